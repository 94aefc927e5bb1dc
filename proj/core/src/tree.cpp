#include "crt_records/tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "crt_records/stats.hpp"

namespace crt {

Tree Tree::sample_initial(RandomStream& stream) {
  Tree tree;
  BranchRecord first;
  first.attach_branch = -1;
  first.attach_offset = 0.0;
  first.length = next_branch_length(0.0, stream.exponential(1.0));
  tree.append_branch(first);
  return tree;
}

double Tree::next_branch_length(double total_length, double exp_draw) {
  if (total_length < 0.0 || exp_draw < 0.0)
    throw std::invalid_argument("next_branch_length: negative input");
  const double grown = std::sqrt(total_length * total_length + 2.0 * exp_draw);
  return 2.0 * exp_draw / (grown + total_length);
}

void Tree::append_branch(const BranchRecord& record) {
  if (!(record.length > 0.0)) throw std::invalid_argument("append_branch: length must be > 0");
  if (!branches_.empty()) {
    if (record.attach_branch < 0 ||
        static_cast<std::size_t>(record.attach_branch) >= branches_.size())
      throw std::invalid_argument("append_branch: attach_branch out of range");
    const double parent_length = branches_[record.attach_branch].length;
    if (!(record.attach_offset > 0.0) || !(record.attach_offset < parent_length))
      throw std::invalid_argument("append_branch: attach_offset outside parent");
    if (record.attach_branch == 0) {
      min_root_attach_ = has_root_attach_ ? std::min(min_root_attach_, record.attach_offset)
                                          : record.attach_offset;
      has_root_attach_ = true;
    }
  }
  branches_.push_back(record);
  total_length_ += record.length;
  cumulative_length_.push_back(total_length_);
}

const BranchRecord& Tree::grow(RandomStream& stream) {
  if (branches_.empty()) throw std::logic_error("grow: tree is empty");
  BranchRecord next;
  next.length = next_branch_length(total_length_, stream.exponential(1.0));
  const TreePoint attach = sample_uniform_point(stream);
  next.attach_branch = attach.branch;
  next.attach_offset = attach.offset;
  append_branch(next);
  return branches_.back();
}

TreePoint Tree::sample_uniform_point(RandomStream& stream) const {
  if (branches_.empty()) throw std::logic_error("sample_uniform_point: tree is empty");
  return point_at_arclength(stream.next_unit() * total_length_);
}

TreePoint Tree::point_at_arclength(double arclength) const {
  if (!(arclength >= 0.0) || !(arclength < total_length_))
    throw std::invalid_argument("point_at_arclength: coordinate outside [0, total_length)");
  const auto it =
      std::upper_bound(cumulative_length_.begin(), cumulative_length_.end(), arclength);
  const auto k = static_cast<std::size_t>(it - cumulative_length_.begin());
  const std::size_t branch = std::min(k, branches_.size() - 1);
  const double base = branch == 0 ? 0.0 : cumulative_length_[branch - 1];
  return {static_cast<std::int32_t>(branch), arclength - base};
}

std::vector<PathSegment> Tree::root_path(const TreePoint& point) const {
  if (point.branch < 0 || static_cast<std::size_t>(point.branch) >= branches_.size())
    throw std::invalid_argument("root_path: branch out of range");
  if (!(point.offset >= 0.0) || !(point.offset <= branches_[point.branch].length))
    throw std::invalid_argument("root_path: offset outside branch");

  std::vector<PathSegment> path;
  std::int32_t branch = point.branch;
  double stop = point.offset;
  while (branch >= 0) {
    path.push_back({branch, 0.0, stop});
    const BranchRecord& record = branches_[branch];
    stop = record.attach_offset;
    branch = record.attach_branch;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

double Tree::distance_to_root(const TreePoint& point) const {
  double total = 0.0;
  for (const PathSegment& segment : root_path(point)) total += segment.end - segment.begin;
  return total;
}

FirstBranchPoint Tree::first_branch_point() const {
  if (!has_root_attach_) return {0.0, false};
  return {min_root_attach_, true};
}

std::string Tree::serialize() const {
  std::string out;
  for (std::size_t k = 0; k < branches_.size(); ++k) {
    const BranchRecord& record = branches_[k];
    out += std::to_string(k);
    if (k == 0) {
      out += " - -";
    } else {
      out += ' ';
      out += std::to_string(record.attach_branch);
      out += ' ';
      out += format_double(record.attach_offset);
    }
    out += ' ';
    out += format_double(record.length);
    out += '\n';
  }
  return out;
}

Tree Tree::deserialize(std::string_view text) {
  Tree tree;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::size_t index = 0;
    fields >> index;
    if (!fields || index != expected)
      throw std::invalid_argument("Tree::deserialize: bad branch index");
    BranchRecord record;
    if (index == 0) {
      std::string dash1, dash2;
      fields >> dash1 >> dash2 >> record.length;
      if (!fields || dash1 != "-" || dash2 != "-")
        throw std::invalid_argument("Tree::deserialize: malformed root line");
      record.attach_branch = -1;
    } else {
      fields >> record.attach_branch >> record.attach_offset >> record.length;
      if (!fields) throw std::invalid_argument("Tree::deserialize: malformed branch line");
      if (record.attach_branch < 0 || static_cast<std::size_t>(record.attach_branch) >= index)
        throw std::invalid_argument("Tree::deserialize: attach_branch must precede branch");
    }
    tree.append_branch(record);
    ++expected;
  }
  if (tree.branches_.empty()) throw std::invalid_argument("Tree::deserialize: empty input");
  return tree;
}

}  // namespace crt
