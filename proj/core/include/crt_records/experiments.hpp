#ifndef CRT_RECORDS_EXPERIMENTS_HPP
#define CRT_RECORDS_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "crt_records/discrete.hpp"
#include "crt_records/stats.hpp"

namespace crt {

/// Runs body(0..count-1) on up to `threads` workers. Work items are claimed
/// from an atomic counter; callers that index results by the work item get
/// schedule-independent output. threads <= 1 runs inline. The first
/// exception thrown by a body is rethrown after all workers join.
void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& body);

enum class ExperimentKind { densities, lineartest, martingale, lgn, fluctuation, discrete };

/// Parses one of: densities, lineartest, martingale, lgn, fluctuation,
/// discrete. Throws std::invalid_argument otherwise.
ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

/// Experiment parameters. Zero/empty fields mean "per-experiment default";
/// resolve() fills them in. Pass thresholds live here so the stats harness
/// stays policy free; keys not present fall back to the built-in defaults,
/// which are the acceptance values.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::densities;
  std::uint64_t seed = 0;
  std::int64_t replicates = 0;
  std::vector<std::int64_t> n_values;
  std::int64_t m_ref = 0;
  std::vector<std::int64_t> checkpoints;
  std::vector<TreeFamily> families;
  int threads = 0;
  std::filesystem::path out_dir = ".";
  std::map<std::string, double> thresholds;

  double threshold(const std::string& key, double fallback) const;

  /// Applies per-experiment defaults and validates invariants
  /// (sorted checkpoints, replicates >= 1, m_ref >= max n for fluctuation).
  void resolve();
};

struct ExperimentResult {
  std::vector<StatReport> reports;
  bool all_pass = true;
  std::vector<std::filesystem::path> artifacts;
};

/// Runs one experiment, writing its CSV artifacts into config.out_dir.
/// Throws on configuration or I/O errors; statistical failures are reported
/// through `all_pass` and the per-report flags.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace crt

#endif  // CRT_RECORDS_EXPERIMENTS_HPP
