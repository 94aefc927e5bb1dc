#ifndef CRT_RECORDS_RECORDS_HPP
#define CRT_RECORDS_RECORDS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "crt_records/rng.hpp"
#include "crt_records/stats.hpp"
#include "crt_records/tree.hpp"

namespace crt {

/// Separation-time profile on one finite branch: piecewise constant, starts
/// at the value inherited from the attachment point and only decreases.
/// A point at a jump offset takes the post-jump value.
struct SegmentProfile {
  double start_value = 0.0;
  double length = 0.0;
  std::vector<double> jump_offsets;  // strictly increasing, in (0, length)
  std::vector<double> jump_values;   // strictly decreasing

  double value_at(double offset) const;
  /// Exact piecewise-constant integral over [0, length].
  double integral() const;
  std::size_t jump_count() const { return jump_offsets.size(); }
};

/// Finite-level record process on [0, length] started at `start_level`:
/// from level v the next jump is Exp(v) away and the post-jump level is
/// uniform on (0, v). That chain follows from the Poisson-strip geometry
/// (the first mark in the remaining strip has exponential abscissa and
/// uniform ordinate); its one-point marginal is validated against the
/// closed-form mean by test.
SegmentProfile linear_record_finite(RandomStream& stream, double start_level, double length);

/// Separation-time profile of the root branch under the level-infinity
/// process, built lazily top-down. Record positions decrease toward the
/// root and values increase; with V the current frontier the next record is
/// at position U ~ Uniform(0, V) carrying value increment Exp(V). The value
/// at the root diverges, so the recursion is extended only down to what an
/// evaluation actually needs.
class RootProfile {
 public:
  explicit RootProfile(double length);

  /// Generates records until the frontier is <= needed_position.
  /// needed_position must lie in (0, length): the root itself has infinite
  /// value, and positions decay geometrically, so a depth guard of 1e4
  /// levels turns a degenerate request into an error instead of a loop.
  void extend_to(RandomStream& stream, double needed_position);

  bool materialized_at(double position) const;

  /// Value at a position in [frontier, length]; throws if not materialized.
  double value_at(double position) const;

  /// Number of records at positions strictly greater than `cut`.
  std::size_t records_above(double cut) const;

  /// Exact integral of the profile over [cut, length]; requires the profile
  /// materialized down to `cut`.
  double integral_above(double cut) const;

  double frontier() const;
  double length() const { return length_; }
  std::size_t record_count() const { return positions_.size(); }
  const std::vector<double>& record_positions() const { return positions_; }
  const std::vector<double>& record_values() const { return values_; }

 private:
  double length_;
  std::vector<double> positions_;  // strictly decreasing
  std::vector<double> values_;     // strictly increasing
};

/// Builds a root profile extended down to needed_position.
RootProfile linear_record_infinite(RandomStream& stream, double length, double needed_position);

/// Joint separation-time state for a growing tree: the lazy root-branch
/// profile plus one finite profile per later branch (segments[k-1] belongs
/// to branch k). Values agree across branch boundaries by construction.
struct ThetaProfile {
  RootProfile root;
  std::vector<SegmentProfile> segments;

  explicit ThetaProfile(double root_length) : root(root_length) {}
  double value_at(const Tree& tree, const TreePoint& point) const;
};

/// Per-checkpoint observables of one trajectory.
struct RecordSummary {
  std::int64_t n = 0;                // number of branches (= sampled leaves)
  double total_length = 0.0;         // L_n
  double first_branch_height = 0.0;  // h_n; NaN while n = 1
  std::int64_t record_count = 0;     // X_n^*, records above the first branch point
  double theta_integral = 0.0;       // I_n = integral of theta over T_n^*
  double theta_hat_length = 0.0;     // I_n / L_n
  double theta_hat_sqrt = 0.0;       // I_n / sqrt(2n)
};

/// One growing trajectory: tree, profiles, and running record tallies.
/// Growth evaluates theta at each attachment point (extending the root
/// profile when the attachment lands below its frontier) and runs a finite
/// record process along the new branch.
class GrowthSimulation {
 public:
  GrowthSimulation(std::uint64_t seed, std::uint64_t replicate);

  void step();
  void grow_to(std::int64_t n_branches);

  RecordSummary summary() const;

  const Tree& tree() const { return tree_; }
  const ThetaProfile& profile() const { return profile_; }
  std::int64_t segment_jump_count() const { return segment_jumps_; }
  double segment_integral() const { return segment_integral_; }

 private:
  RandomStream stream_;
  Tree tree_;
  ThetaProfile profile_;
  std::int64_t segment_jumps_ = 0;
  double segment_integral_ = 0.0;
};

/// Grows one replicate to n_max, emitting a summary at each checkpoint.
/// Checkpoints must be sorted, within [1, n_max]; n_max >= 2.
std::vector<RecordSummary> run_growth(std::uint64_t seed, std::uint64_t replicate,
                                      std::int64_t n_max,
                                      std::span<const std::int64_t> checkpoints);

/// Exact integral of theta over the tree above `lower_cut` on branch 0
/// (all of branches 1.. plus the branch-0 piece [lower_cut, L_1]).
double integral_theta(const ThetaProfile& profile, const Tree& tree, double lower_cut);

/// CSV schema for RecordSummary rows.
std::string record_summary_csv_header();
std::string record_summary_csv_row(std::uint64_t replicate, const RecordSummary& summary);

/// Monte Carlo zero-mean checks for the three compensated-process
/// identities of the linear record process at (q, t):
///   [0] N_t,
///   [1] N_t^2 - int theta,
///   [2] N_t^4 - 3 (int theta)^2 - int theta,
/// with N_t = X_t - int_0^t theta. Estimates carry standard errors.
std::array<StatReport, 3> martingale_stats(double q, double t, std::int64_t replicates,
                                           std::uint64_t seed);

}  // namespace crt

#endif  // CRT_RECORDS_RECORDS_HPP
