#include "crt_records/records.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crt {

namespace {
constexpr std::size_t kRootDepthGuard = 10'000;
}

double SegmentProfile::value_at(double offset) const {
  if (!(offset >= 0.0) || !(offset <= length))
    throw std::invalid_argument("SegmentProfile::value_at: offset outside segment");
  const auto it = std::upper_bound(jump_offsets.begin(), jump_offsets.end(), offset);
  if (it == jump_offsets.begin()) return start_value;
  return jump_values[static_cast<std::size_t>(it - jump_offsets.begin()) - 1];
}

double SegmentProfile::integral() const {
  double acc = 0.0;
  double prev = 0.0;
  double value = start_value;
  for (std::size_t i = 0; i < jump_offsets.size(); ++i) {
    acc += value * (jump_offsets[i] - prev);
    prev = jump_offsets[i];
    value = jump_values[i];
  }
  acc += value * (length - prev);
  return acc;
}

SegmentProfile linear_record_finite(RandomStream& stream, double start_level, double length) {
  if (!(start_level > 0.0) || std::isinf(start_level))
    throw std::invalid_argument("linear_record_finite: start level must be finite and > 0");
  if (!(length >= 0.0) || std::isinf(length))
    throw std::invalid_argument("linear_record_finite: length must be finite and >= 0");

  SegmentProfile profile;
  profile.start_value = start_level;
  profile.length = length;

  double position = 0.0;
  double level = start_level;
  while (true) {
    position += stream.exponential(level);
    if (position >= length) break;
    level *= stream.next_unit_open();
    profile.jump_offsets.push_back(position);
    profile.jump_values.push_back(level);
  }
  return profile;
}

RootProfile::RootProfile(double length) : length_(length) {
  if (!(length > 0.0) || std::isinf(length))
    throw std::invalid_argument("RootProfile: length must be finite and > 0");
}

double RootProfile::frontier() const { return positions_.empty() ? length_ : positions_.back(); }

void RootProfile::extend_to(RandomStream& stream, double needed_position) {
  if (!(needed_position > 0.0))
    throw std::invalid_argument("RootProfile::extend_to: position must be > 0 (the root value diverges)");
  if (!(needed_position < length_))
    throw std::invalid_argument("RootProfile::extend_to: position must be < branch length");

  while (frontier() > needed_position) {
    if (positions_.size() >= kRootDepthGuard)
      throw std::runtime_error("RootProfile::extend_to: depth guard hit (degenerate request)");
    const double active = frontier();
    const double increment = stream.exponential(active);
    const double record_position = stream.uniform(0.0, active);
    const double value = (values_.empty() ? 0.0 : values_.back()) + increment;
    positions_.push_back(record_position);
    values_.push_back(value);
  }
}

bool RootProfile::materialized_at(double position) const {
  return !positions_.empty() && position >= positions_.back() && position <= length_;
}

double RootProfile::value_at(double position) const {
  if (!(position >= 0.0) || !(position <= length_))
    throw std::invalid_argument("RootProfile::value_at: position outside branch");
  if (!materialized_at(position))
    throw std::logic_error("RootProfile::value_at: profile not materialized this far down");
  // positions_ descending: first record at or below `position`
  const auto it = std::lower_bound(positions_.begin(), positions_.end(), position,
                                   [](double record, double query) { return record > query; });
  return values_[static_cast<std::size_t>(it - positions_.begin())];
}

std::size_t RootProfile::records_above(double cut) const {
  if (cut >= length_) return 0;
  if (frontier() > cut)
    throw std::logic_error("RootProfile::records_above: profile not materialized this far down");
  const auto it = std::lower_bound(positions_.begin(), positions_.end(), cut,
                                   [](double record, double query) { return record > query; });
  return static_cast<std::size_t>(it - positions_.begin());
}

double RootProfile::integral_above(double cut) const {
  if (cut >= length_) return 0.0;
  if (frontier() > cut)
    throw std::logic_error("RootProfile::integral_above: profile not materialized this far down");
  double acc = 0.0;
  double upper = length_;
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const double lo = std::max(positions_[i], cut);
    if (lo < upper) acc += values_[i] * (upper - lo);
    upper = positions_[i];
    if (positions_[i] <= cut) break;
  }
  return acc;
}

RootProfile linear_record_infinite(RandomStream& stream, double length, double needed_position) {
  RootProfile profile(length);
  profile.extend_to(stream, needed_position);
  return profile;
}

double ThetaProfile::value_at(const Tree& tree, const TreePoint& point) const {
  if (point.branch < 0 || static_cast<std::size_t>(point.branch) >= tree.branch_count())
    throw std::invalid_argument("ThetaProfile::value_at: branch out of range");
  if (point.branch == 0) return root.value_at(point.offset);
  return segments.at(static_cast<std::size_t>(point.branch) - 1).value_at(point.offset);
}

GrowthSimulation::GrowthSimulation(std::uint64_t seed, std::uint64_t replicate)
    : stream_(seed, replicate),
      tree_(Tree::sample_initial(stream_)),
      profile_(tree_.branch(0).length) {}

void GrowthSimulation::step() {
  const BranchRecord& grown = tree_.grow(stream_);
  double start_level;
  if (grown.attach_branch == 0) {
    if (!profile_.root.materialized_at(grown.attach_offset))
      profile_.root.extend_to(stream_, grown.attach_offset);
    start_level = profile_.root.value_at(grown.attach_offset);
  } else {
    start_level = profile_.segments[static_cast<std::size_t>(grown.attach_branch) - 1].value_at(
        grown.attach_offset);
  }
  SegmentProfile segment = linear_record_finite(stream_, start_level, grown.length);
  segment_jumps_ += static_cast<std::int64_t>(segment.jump_count());
  segment_integral_ += segment.integral();
  profile_.segments.push_back(std::move(segment));
}

void GrowthSimulation::grow_to(std::int64_t n_branches) {
  while (static_cast<std::int64_t>(tree_.branch_count()) < n_branches) step();
}

RecordSummary GrowthSimulation::summary() const {
  RecordSummary out;
  out.n = static_cast<std::int64_t>(tree_.branch_count());
  out.total_length = tree_.total_length();
  const FirstBranchPoint fb = tree_.first_branch_point();
  if (!fb.exists) {
    out.first_branch_height = std::numeric_limits<double>::quiet_NaN();
    out.record_count = 0;
    out.theta_integral = 0.0;
    out.theta_hat_length = 0.0;
    out.theta_hat_sqrt = 0.0;
    return out;
  }
  out.first_branch_height = fb.height;
  out.record_count =
      segment_jumps_ + static_cast<std::int64_t>(profile_.root.records_above(fb.height));
  out.theta_integral = segment_integral_ + profile_.root.integral_above(fb.height);
  out.theta_hat_length = out.theta_integral / out.total_length;
  out.theta_hat_sqrt = out.theta_integral / std::sqrt(2.0 * static_cast<double>(out.n));
  return out;
}

std::vector<RecordSummary> run_growth(std::uint64_t seed, std::uint64_t replicate,
                                      std::int64_t n_max,
                                      std::span<const std::int64_t> checkpoints) {
  if (n_max < 2) throw std::invalid_argument("run_growth: n_max must be >= 2");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > n_max)
      throw std::invalid_argument("run_growth: checkpoint outside [1, n_max]");
    if (i > 0 && checkpoints[i] < checkpoints[i - 1])
      throw std::invalid_argument("run_growth: checkpoints must be sorted");
  }

  GrowthSimulation simulation(seed, replicate);
  std::vector<RecordSummary> out;
  out.reserve(checkpoints.size());
  for (std::int64_t checkpoint : checkpoints) {
    simulation.grow_to(checkpoint);
    out.push_back(simulation.summary());
  }
  return out;
}

double integral_theta(const ThetaProfile& profile, const Tree& tree, double lower_cut) {
  if (tree.branch_count() != profile.segments.size() + 1)
    throw std::invalid_argument("integral_theta: profile does not match tree");
  double acc = profile.root.integral_above(lower_cut);
  for (const SegmentProfile& segment : profile.segments) acc += segment.integral();
  return acc;
}

std::string record_summary_csv_header() {
  return "replicate,n,L_n,h_n,X_star,I_n,theta_hat_L,theta_hat_sqrt";
}

std::string record_summary_csv_row(std::uint64_t replicate, const RecordSummary& summary) {
  std::string row = std::to_string(replicate);
  row += ',';
  row += std::to_string(summary.n);
  row += ',';
  row += format_double(summary.total_length);
  row += ',';
  row += format_double(summary.first_branch_height);
  row += ',';
  row += std::to_string(summary.record_count);
  row += ',';
  row += format_double(summary.theta_integral);
  row += ',';
  row += format_double(summary.theta_hat_length);
  row += ',';
  row += format_double(summary.theta_hat_sqrt);
  return row;
}

std::array<StatReport, 3> martingale_stats(double q, double t, std::int64_t replicates,
                                           std::uint64_t seed) {
  if (!(q > 0.0) || std::isinf(q)) throw std::invalid_argument("martingale_stats: need 0 < q < inf");
  if (!(t > 0.0)) throw std::invalid_argument("martingale_stats: need t > 0");
  if (replicates < 1000) throw std::invalid_argument("martingale_stats: need >= 1000 replicates");

  std::vector<double> first(static_cast<std::size_t>(replicates));
  std::vector<double> second(static_cast<std::size_t>(replicates));
  std::vector<double> fourth(static_cast<std::size_t>(replicates));
  for (std::int64_t r = 0; r < replicates; ++r) {
    RandomStream stream(seed, static_cast<std::uint64_t>(r));
    const SegmentProfile path = linear_record_finite(stream, q, t);
    const double integral = path.integral();
    const double n_t = static_cast<double>(path.jump_count()) - integral;
    first[static_cast<std::size_t>(r)] = n_t;
    second[static_cast<std::size_t>(r)] = n_t * n_t - integral;
    fourth[static_cast<std::size_t>(r)] =
        n_t * n_t * n_t * n_t - 3.0 * integral * integral - integral;
  }

  std::array<StatReport, 3> out = {moment_ci(first, 1), moment_ci(second, 1),
                                   moment_ci(fourth, 1)};
  out[0].name = "record_compensated_mean";
  out[1].name = "record_compensated_second";
  out[2].name = "record_compensated_fourth";
  return out;
}

}  // namespace crt
