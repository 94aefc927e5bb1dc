#ifndef CRT_RECORDS_DISCRETE_HPP
#define CRT_RECORDS_DISCRETE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "crt_records/rng.hpp"
#include "crt_records/stats.hpp"

namespace crt {

/// Rooted discrete tree as a parent array; parent[root] = -1.
struct DiscreteTree {
  std::vector<std::int32_t> parent;
  std::int32_t root = 0;

  std::int64_t n_edges() const { return static_cast<std::int64_t>(parent.size()) - 1; }
  std::size_t n_vertices() const { return parent.size(); }
};

/// Uniform rooted labelled tree with n_edges edges: uniform Pruefer sequence
/// decoded in O(n), then a uniform root.
DiscreteTree sample_cayley(std::int64_t n_edges, RandomStream& stream);

/// Uniform rooted planar binary tree with n_leaves leaves, grown by leaf
/// insertion: replace a uniform vertex by a new internal node whose other
/// child is a fresh leaf, side uniform. left/right keep the planar order
/// (leaf vertices have -1 entries).
struct SampledBinary {
  DiscreteTree tree;
  std::vector<std::int32_t> left;
  std::vector<std::int32_t> right;
};
SampledBinary sample_binary_detailed(std::int64_t n_leaves, RandomStream& stream);
DiscreteTree sample_binary(std::int64_t n_leaves, RandomStream& stream);

struct CutResult {
  std::int64_t n_edges = 0;
  std::int64_t cuts = 0;
};

/// Repeatedly removes a uniform edge of the root component and discards the
/// detached part, until the root is isolated. Edges are tracked in an
/// alive array with swap-removal; discards walk the detached subtree once,
/// so a full run costs O(n).
CutResult cut_to_root(const DiscreteTree& tree, RandomStream& stream);

/// Same procedure with an injected edge choice (an edge is named by its
/// child vertex); used to couple runs across relabelings.
CutResult cut_to_root_choose(
    const DiscreteTree& tree,
    const std::function<std::int32_t(std::span<const std::int32_t>)>& choose_edge);

enum class TreeFamily { cayley, binary };

std::string tree_family_name(TreeFamily family);

struct CuttingMoments {
  StatReport mean_scaled;      // E[X] / sqrt(n_edges)
  StatReport variance_scaled;  // Var(X) / n_edges
  StatReport ks_rayleigh;      // KS of X / sqrt(n_edges) against Rayleigh
  std::vector<std::int64_t> cuts;
  std::int64_t n_edges = 0;
};

/// Replicated cutting experiment. `size` is n_edges for the Cayley family
/// and n_leaves for the binary family. Replicate r runs on substream r.
CuttingMoments cutting_moments(TreeFamily family, std::int64_t size, std::int64_t replicates,
                               std::uint64_t seed, int threads = 1);

}  // namespace crt

#endif  // CRT_RECORDS_DISCRETE_HPP
