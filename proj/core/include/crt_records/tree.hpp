#ifndef CRT_RECORDS_TREE_HPP
#define CRT_RECORDS_TREE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "crt_records/rng.hpp"

namespace crt {

/// One stick of the stick-breaking construction. Branch 0 runs from the root
/// to the first leaf and has no parent; branch k >= 1 attaches strictly
/// inside an earlier branch, attach_offset measured from the parent's own
/// attachment point toward its leaf.
struct BranchRecord {
  std::int32_t attach_branch = -1;  // -1 for branch 0
  double attach_offset = 0.0;
  double length = 0.0;
};

struct TreePoint {
  std::int32_t branch = 0;
  double offset = 0.0;
};

/// Maximal sub-interval [begin, end] of one branch on a root-to-point path.
struct PathSegment {
  std::int32_t branch = 0;
  double begin = 0.0;
  double end = 0.0;
};

struct FirstBranchPoint {
  double height = 0.0;
  bool exists = false;
};

/// Leaf-spanned subtree grown branch by branch. A tree with n branches is
/// the subtree spanned by the root and n leaves; lengths never change after
/// a branch is added, so cumulative lengths form an append-only index giving
/// O(log n) arclength lookup.
///
/// Single-owner mutable during growth; read-only access is safe to share
/// after a checkpoint.
class Tree {
 public:
  /// T_1: one branch of length sqrt(2 E), E ~ Exp(1); Rayleigh-distributed.
  static Tree sample_initial(RandomStream& stream);

  /// Length increment kernel: sqrt(L^2 + 2E) - L, evaluated in the
  /// cancellation-free form 2E / (sqrt(L^2 + 2E) + L).
  static double next_branch_length(double total_length, double exp_draw);

  /// Draws the next branch: length from the increment kernel, attachment
  /// uniform by length measure. Returns the new branch.
  const BranchRecord& grow(RandomStream& stream);

  /// Uniform point by length measure.
  TreePoint sample_uniform_point(RandomStream& stream) const;

  /// Point at a given arclength coordinate in [0, total_length).
  TreePoint point_at_arclength(double arclength) const;

  /// Root-to-point path as branch sub-intervals, ordered from the root.
  /// The interval lengths sum to the distance from the root.
  std::vector<PathSegment> root_path(const TreePoint& point) const;

  double distance_to_root(const TreePoint& point) const;

  /// Height of the lowest branch point on branch 0; absent while the tree
  /// has a single branch.
  FirstBranchPoint first_branch_point() const;

  double total_length() const { return total_length_; }
  std::size_t branch_count() const { return branches_.size(); }
  const BranchRecord& branch(std::size_t k) const { return branches_.at(k); }

  /// Line-oriented text, one branch per line `k attach_branch attach_offset
  /// length` (17 significant digits); branch 0 is `0 - - length`.
  std::string serialize() const;
  static Tree deserialize(std::string_view text);

 private:
  Tree() = default;
  void append_branch(const BranchRecord& record);

  std::vector<BranchRecord> branches_;
  std::vector<double> cumulative_length_;  // cumulative_length_[k] = sum of lengths 0..k
  double total_length_ = 0.0;
  double min_root_attach_ = 0.0;
  bool has_root_attach_ = false;
};

}  // namespace crt

#endif  // CRT_RECORDS_TREE_HPP
