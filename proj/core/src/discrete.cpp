#include "crt_records/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crt_records/analytics.hpp"
#include "crt_records/experiments.hpp"

namespace crt {

namespace {

// Orients an edge list away from `root`.
DiscreteTree orient(std::int32_t root, std::size_t n,
                    const std::vector<std::pair<std::int32_t, std::int32_t>>& edges) {
  std::vector<std::int32_t> head(n, -1);
  std::vector<std::int32_t> next(2 * edges.size(), -1);
  std::vector<std::int32_t> target(2 * edges.size(), -1);
  std::int32_t slot = 0;
  for (const auto& [a, b] : edges) {
    target[slot] = b;
    next[slot] = head[a];
    head[a] = slot++;
    target[slot] = a;
    next[slot] = head[b];
    head[b] = slot++;
  }

  DiscreteTree tree;
  tree.root = root;
  tree.parent.assign(n, -1);
  std::vector<std::int32_t> stack = {root};
  std::vector<bool> seen(n, false);
  seen[root] = true;
  while (!stack.empty()) {
    const std::int32_t v = stack.back();
    stack.pop_back();
    for (std::int32_t e = head[v]; e != -1; e = next[e]) {
      const std::int32_t w = target[e];
      if (!seen[w]) {
        seen[w] = true;
        tree.parent[w] = v;
        stack.push_back(w);
      }
    }
  }
  return tree;
}

}  // namespace

DiscreteTree sample_cayley(std::int64_t n_edges, RandomStream& stream) {
  if (n_edges < 1) throw std::invalid_argument("sample_cayley: n_edges must be >= 1");
  const auto n = static_cast<std::size_t>(n_edges) + 1;

  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  edges.reserve(n - 1);
  if (n == 2) {
    edges.emplace_back(0, 1);
  } else {
    std::vector<std::int32_t> prufer(n - 2);
    for (auto& p : prufer) p = static_cast<std::int32_t>(stream.uniform_index(n));

    std::vector<std::int32_t> degree(n, 1);
    for (std::int32_t p : prufer) ++degree[p];

    // O(n) decode with a moving pointer over the smallest unused leaf
    std::int32_t ptr = 0;
    while (degree[ptr] != 1) ++ptr;
    std::int32_t leaf = ptr;
    for (std::int32_t p : prufer) {
      edges.emplace_back(leaf, p);
      if (--degree[p] == 1 && p < ptr) {
        leaf = p;
      } else {
        ++ptr;
        while (degree[ptr] != 1) ++ptr;
        leaf = ptr;
      }
    }
    edges.emplace_back(leaf, static_cast<std::int32_t>(n - 1));
  }

  const auto root = static_cast<std::int32_t>(stream.uniform_index(n));
  return orient(root, n, edges);
}

SampledBinary sample_binary_detailed(std::int64_t n_leaves, RandomStream& stream) {
  if (n_leaves < 1) throw std::invalid_argument("sample_binary: n_leaves must be >= 1");

  SampledBinary out;
  out.tree.root = 0;
  out.tree.parent = {-1};
  out.left = {-1};
  out.right = {-1};

  for (std::int64_t k = 1; k < n_leaves; ++k) {
    const auto size = out.tree.parent.size();
    const auto v = static_cast<std::int32_t>(stream.uniform_index(size));
    const auto internal = static_cast<std::int32_t>(size);
    const auto fresh = static_cast<std::int32_t>(size + 1);
    const bool fresh_on_right = stream.next_unit() < 0.5;

    const std::int32_t up = out.tree.parent[v];
    out.tree.parent.push_back(up);   // internal
    out.tree.parent.push_back(internal);  // fresh leaf
    out.left.push_back(fresh_on_right ? v : fresh);
    out.right.push_back(fresh_on_right ? fresh : v);
    out.left.push_back(-1);
    out.right.push_back(-1);

    if (up == -1) {
      out.tree.root = internal;
    } else if (out.left[up] == v) {
      out.left[up] = internal;
    } else {
      out.right[up] = internal;
    }
    out.tree.parent[v] = internal;
  }
  return out;
}

DiscreteTree sample_binary(std::int64_t n_leaves, RandomStream& stream) {
  return sample_binary_detailed(n_leaves, stream).tree;
}

CutResult cut_to_root_choose(
    const DiscreteTree& tree,
    const std::function<std::int32_t(std::span<const std::int32_t>)>& choose_edge) {
  const std::size_t n = tree.n_vertices();

  // children as CSR
  std::vector<std::int32_t> child_count(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (tree.parent[v] >= 0) ++child_count[tree.parent[v]];
  std::vector<std::int32_t> child_start(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) child_start[v + 1] = child_start[v] + child_count[v];
  std::vector<std::int32_t> children(static_cast<std::size_t>(child_start[n]));
  std::vector<std::int32_t> fill(child_start.begin(), child_start.end() - 1);
  for (std::size_t v = 0; v < n; ++v)
    if (tree.parent[v] >= 0) children[fill[tree.parent[v]]++] = static_cast<std::int32_t>(v);

  // alive edges named by child vertex
  std::vector<std::int32_t> alive;
  alive.reserve(n - 1);
  std::vector<std::int32_t> position(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    if (tree.parent[v] >= 0) {
      position[v] = static_cast<std::int32_t>(alive.size());
      alive.push_back(static_cast<std::int32_t>(v));
    }
  }

  CutResult result{tree.n_edges(), 0};
  std::vector<std::int32_t> stack;
  while (!alive.empty()) {
    const std::int32_t chosen = choose_edge(std::span<const std::int32_t>(alive));
    if (chosen < 0 || static_cast<std::size_t>(chosen) >= n || position[chosen] < 0)
      throw std::invalid_argument("cut_to_root: chosen edge not alive");
    ++result.cuts;

    // discard the detached subtree, unhooking each edge from the alive array
    stack.assign(1, chosen);
    while (!stack.empty()) {
      const std::int32_t x = stack.back();
      stack.pop_back();
      const std::int32_t at = position[x];
      if (at >= 0) {
        const std::int32_t last = alive.back();
        alive[at] = last;
        position[last] = at;
        alive.pop_back();
        position[x] = -1;
        for (std::int32_t e = child_start[x]; e < child_start[x + 1]; ++e)
          stack.push_back(children[e]);
      }
    }
  }
  return result;
}

CutResult cut_to_root(const DiscreteTree& tree, RandomStream& stream) {
  return cut_to_root_choose(tree, [&stream](std::span<const std::int32_t> alive) {
    return alive[stream.uniform_index(alive.size())];
  });
}

std::string tree_family_name(TreeFamily family) {
  return family == TreeFamily::cayley ? "cayley" : "binary";
}

CuttingMoments cutting_moments(TreeFamily family, std::int64_t size, std::int64_t replicates,
                               std::uint64_t seed, int threads) {
  if (replicates < 1000) throw std::invalid_argument("cutting_moments: need >= 1000 replicates");
  if (size < 1) throw std::invalid_argument("cutting_moments: size must be >= 1");

  CuttingMoments out;
  out.n_edges = family == TreeFamily::cayley ? size : 2 * size - 2;
  if (out.n_edges < 1) throw std::invalid_argument("cutting_moments: tree family needs >= 1 edge");
  out.cuts.assign(static_cast<std::size_t>(replicates), 0);
  parallel_for(replicates, threads, [&](std::int64_t r) {
    RandomStream stream(seed, static_cast<std::uint64_t>(r));
    const DiscreteTree tree = family == TreeFamily::cayley
                                  ? sample_cayley(size, stream)
                                  : sample_binary(size, stream);
    out.cuts[static_cast<std::size_t>(r)] = cut_to_root(tree, stream).cuts;
  });

  const double scale = std::sqrt(static_cast<double>(out.n_edges));
  std::vector<double> scaled(out.cuts.size());
  for (std::size_t i = 0; i < out.cuts.size(); ++i)
    scaled[i] = static_cast<double>(out.cuts[i]) / scale;

  out.mean_scaled = moment_ci(scaled, 1);
  out.mean_scaled.name = tree_family_name(family) + "_mean_cuts_scaled";

  // variance with standard error from the fourth central moment
  const double mean = out.mean_scaled.estimate;
  double m2 = 0.0, m4 = 0.0;
  for (double x : scaled) {
    const double d = x - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(scaled.size());
  m2 /= n;
  m4 /= n;
  out.variance_scaled.name = tree_family_name(family) + "_var_cuts_scaled";
  out.variance_scaled.estimate = m2 * n / (n - 1.0);
  out.variance_scaled.std_error = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);

  out.ks_rayleigh = ks_test(scaled, [](double x) { return analytics::rayleigh_cdf(x); });
  out.ks_rayleigh.name = tree_family_name(family) + "_ks_rayleigh";
  return out;
}

}  // namespace crt
