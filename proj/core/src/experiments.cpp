#include "crt_records/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "crt_records/analytics.hpp"
#include "crt_records/records.hpp"

namespace crt {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void write_lines(const std::filesystem::path& path, const std::string& header,
                 const std::vector<std::string>& rows) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << header << '\n';
  for (const std::string& row : rows) out << row << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string name_num(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

StatReport labeled(StatReport report, std::string name) {
  report.name = std::move(name);
  return report;
}

StatReport check_abs(std::string name, double value, double target, double tol) {
  StatReport report;
  report.name = std::move(name);
  report.estimate = value;
  report.statistic = std::abs(value - target);
  report.pass = std::abs(value - target) <= tol;
  return report;
}

StatReport check_true(std::string name, bool condition, double value) {
  StatReport report;
  report.name = std::move(name);
  report.estimate = value;
  report.pass = condition;
  return report;
}

void pass_if_within_stderr(StatReport& report, double target, double multiplier) {
  report.statistic = std::abs(report.estimate - target);
  report.pass = report.statistic <= multiplier * report.std_error;
}

void pass_if_p_above(StatReport& report, double p_min) { report.pass = report.p_value > p_min; }

struct GoldenRows {
  std::vector<std::string> rows;
  void add(const std::string& name, double value) {
    rows.push_back(name + "," + format_double(value));
  }
};

}  // namespace

void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& body) {
  if (count <= 0) return;
  if (threads <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    while (true) {
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_workers = std::min<std::int64_t>(threads, count);
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "densities") return ExperimentKind::densities;
  if (name == "lineartest") return ExperimentKind::lineartest;
  if (name == "martingale") return ExperimentKind::martingale;
  if (name == "lgn") return ExperimentKind::lgn;
  if (name == "fluctuation") return ExperimentKind::fluctuation;
  if (name == "discrete") return ExperimentKind::discrete;
  throw std::invalid_argument("unknown experiment: " + name);
}

std::string experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::densities: return "densities";
    case ExperimentKind::lineartest: return "lineartest";
    case ExperimentKind::martingale: return "martingale";
    case ExperimentKind::lgn: return "lgn";
    case ExperimentKind::fluctuation: return "fluctuation";
    case ExperimentKind::discrete: return "discrete";
  }
  throw std::logic_error("unreachable");
}

double ExperimentConfig::threshold(const std::string& key, double fallback) const {
  const auto it = thresholds.find(key);
  return it == thresholds.end() ? fallback : it->second;
}

void ExperimentConfig::resolve() {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }

  switch (kind) {
    case ExperimentKind::densities:
      if (replicates <= 0) replicates = 1;
      break;
    case ExperimentKind::lineartest:
      if (replicates <= 0) replicates = 100'000;
      break;
    case ExperimentKind::martingale:
      if (replicates <= 0) replicates = 100'000;
      break;
    case ExperimentKind::lgn:
      if (replicates <= 0) replicates = 2000;
      if (n_values.empty()) n_values = {4096};
      if (checkpoints.empty()) checkpoints = {64, 256, 1024};
      break;
    case ExperimentKind::fluctuation:
      if (replicates <= 0) replicates = 2000;
      if (n_values.empty()) n_values = {64, 256};
      break;
    case ExperimentKind::discrete:
      if (replicates <= 0) replicates = 10'000;
      if (n_values.empty()) n_values = {1000};
      if (families.empty()) families = {TreeFamily::cayley};
      break;
  }

  std::sort(n_values.begin(), n_values.end());
  n_values.erase(std::unique(n_values.begin(), n_values.end()), n_values.end());
  for (std::int64_t n : n_values)
    if (n < 1) throw std::invalid_argument("config: n values must be >= 1");
  if (replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw std::invalid_argument("config: checkpoints must be sorted");

  if (kind == ExperimentKind::fluctuation) {
    if (m_ref <= 0) m_ref = 256 * n_values.back();
    if (m_ref < n_values.back())
      throw std::invalid_argument("config: m_ref must be >= the largest checkpoint");
  }
}

namespace {

// --- densities ------------------------------------------------------------

ExperimentResult run_densities(const ExperimentConfig& config) {
  using namespace analytics;
  ExperimentResult result;
  GoldenRows goldens;
  QuadratureSpec tight{1e-11, 1e-11, 1'000'000};

  // tagged-fragment normalization
  for (double a : {0.1, 1.0, 10.0}) {
    const double mass =
        integrate([a](double v) { return tagged_fragment_pdf(a, v); }, 0.0, 1.0, tight);
    result.reports.push_back(
        check_abs("tagged_fragment_normalization_a" + name_num(a), mass, 1.0, 1e-8));
    goldens.add("tagged_fragment_mass_a" + name_num(a), mass);
  }
  {
    const double half_mass =
        integrate([](double v) { return tagged_fragment_pdf(1.0, v); }, 0.0, 0.5, tight);
    result.reports.push_back(
        check_abs("tagged_fragment_half_mass_a1", half_mass, 0.68268949213708585, 1e-8));
    goldens.add("tagged_fragment_half_mass_a1", half_mass);
  }

  // branch-length CDF saturates exactly (closed-form antiderivative)
  for (double a : {0.0, 1.0, 10.0}) {
    const double at_tail = branch_length_cdf(a, 60.0);
    result.reports.push_back(
        check_abs("branch_length_cdf_saturation_a" + name_num(a), at_tail, 1.0, 1e-10));
  }

  // chi(2n) with n = 1 is the Rayleigh law, pointwise
  {
    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double x = 0.35 * i;
      worst = std::max(worst, std::abs(chi2n_pdf(1, x) - rayleigh_pdf(x)));
      worst = std::max(worst, std::abs(chi2n_cdf(1, x) - rayleigh_cdf(x)));
    }
    result.reports.push_back(check_true("chi2n_n1_matches_rayleigh", worst <= 1e-12, worst));
  }

  // density normalizations
  for (int n : {3, 7}) {
    const double mass = integrate_to_infinity([n](double x) { return chi2n_pdf(n, x); }, 0.0, tight);
    result.reports.push_back(check_abs("chi2n_normalization_n" + std::to_string(n), mass, 1.0, 1e-8));
  }
  {
    const double mass = integrate_to_infinity([](double x) { return rayleigh_pdf(x); }, 0.0, tight);
    result.reports.push_back(check_abs("rayleigh_normalization", mass, 1.0, 1e-8));
  }
  for (double a : {0.0, 1.0, 10.0}) {
    const double mass =
        integrate_to_infinity([a](double x) { return branch_length_pdf(a, x); }, 0.0, tight);
    result.reports.push_back(
        check_abs("branch_length_normalization_a" + name_num(a), mass, 1.0, 1e-8));
  }

  // chi(2n) second moment is 2n
  {
    const double m2 =
        integrate_to_infinity([](double x) { return x * x * chi2n_pdf(7, x); }, 0.0, tight);
    result.reports.push_back(check_abs("chi2n_second_moment_n7", m2, 14.0, 1e-6));
  }

  // mean_Theta_qv domination sqrt(pi/2) min(qv, sqrt(v))
  {
    bool ok = true;
    double worst = 0.0;
    for (double q : {0.1, 1.0, 10.0}) {
      for (double v : {0.1, 1.0, 10.0}) {
        const double value = mean_Theta_qv(q, v);
        const double bound =
            std::sqrt(kPi / 2.0) * std::min(q * v, std::sqrt(v)) + 1e-10;
        worst = std::max(worst, value - bound);
        ok = ok && value <= bound;
        goldens.add("mean_Theta_q" + name_num(q) + "_v" + name_num(v), value);
      }
    }
    result.reports.push_back(check_true("mean_Theta_qv_domination", ok, worst));
  }
  {
    const double value = mean_Theta_qv(std::numeric_limits<double>::infinity(), 2.0);
    result.reports.push_back(check_abs("mean_Theta_inf_v2", value, std::sqrt(kPi), 1e-8));
  }

  // moments of the fluctuation limit, from quadrature
  {
    const auto [second, fourth] = z_moments();
    result.reports.push_back(check_abs("z_second_moment", second, std::sqrt(kPi), 1e-6));
    result.reports.push_back(check_abs("z_fourth_moment", fourth, 12.0, 1e-6));
    goldens.add("z_second_moment", second);
    goldens.add("z_fourth_moment", fourth);
    goldens.add("rayleigh_moment_1", rayleigh_moment(1));
    goldens.add("rayleigh_moment_2", rayleigh_moment(2));
  }

  // h-moment identities
  result.reports.push_back(check_abs("h_moment_alpha0", h_moment(17, 0.0), 1.0, 0.0));
  {
    const double scaled = h_moment(1'000'000, 1.0) * std::sqrt(1e6);
    const double limit = std::exp2(-0.5);  // Gamma(2) 2^{-1/2}
    result.reports.push_back(
        check_true("h_moment_asymptotic", std::abs(scaled / limit - 1.0) < 1e-3, scaled));
    goldens.add("h_moment_n10_alpha1", h_moment(10, 1.0));
    goldens.add("h_moment_n10_alpha2", h_moment(10, 2.0));
  }

  // mean separation time closed form
  result.reports.push_back(check_abs(
      "mean_theta_linear_inf_s2", mean_theta_linear(std::numeric_limits<double>::infinity(), 2.0),
      0.5, 0.0));
  result.reports.push_back(check_abs("mean_theta_linear_small_s",
                                     mean_theta_linear(3.0, 1e-8), 3.0, 1e-6));

  // F(q, t): small-t quadratic behavior, scale invariance, monotone grid
  {
    const double f_small = F_qt(1.0, 1e-3);
    result.reports.push_back(
        check_true("F_qt_small_t_quadratic", std::abs(f_small / 1e-6 - 1.0) < 0.01, f_small));
    const double f11 = F_qt(1.0, 1.0);
    const double f_inv = F_qt(2.0, 0.5);
    result.reports.push_back(
        check_true("F_qt_scale_invariance", std::abs(f_inv - f11) < 1e-8, f_inv - f11));
    goldens.add("F_1_1", f11);
    goldens.add("F_3_0.5", F_qt(3.0, 0.5));

    bool monotone = true;
    double previous = 0.0;
    for (double x : {0.1, 0.3, 1.0, 3.0, 10.0, 30.0}) {
      const double value = F_qt(1.0, x);
      monotone = monotone && value >= previous;
      previous = value;
    }
    result.reports.push_back(check_true("F_qt_monotone", monotone, previous));
  }

  // characteristic function of the limit
  {
    const double at_zero = clt_char_fn(0.0);
    result.reports.push_back(check_abs("clt_char_fn_at_zero", at_zero, 1.0, 1e-10));
    const double plus = clt_char_fn(1.25);
    const double minus = clt_char_fn(-1.25);
    result.reports.push_back(check_true("clt_char_fn_even", plus == minus, plus - minus));
    for (double t : {0.5, 1.0, 2.0}) goldens.add("clt_char_fn_t" + name_num(t), clt_char_fn(t));
  }

  std::filesystem::create_directories(config.out_dir);
  const auto golden_path = config.out_dir / "goldens.csv";
  write_lines(golden_path, "name,value", goldens.rows);
  result.artifacts.push_back(golden_path);
  return result;
}

// --- lineartest -----------------------------------------------------------

ExperimentResult run_lineartest(const ExperimentConfig& config) {
  ExperimentResult result;
  const double p_min = config.threshold("p_min", 1e-3);
  const double k_se = config.threshold("stderr_mult", 4.0);

  const double q_grid[] = {0.5, 1.0, 3.0};
  const double s_grid[] = {0.5, 2.0};
  std::uint64_t substream_base = 0;
  for (double q : q_grid) {
    for (double s : s_grid) {
      std::vector<double> values(static_cast<std::size_t>(config.replicates));
      parallel_for(config.replicates, config.threads, [&](std::int64_t r) {
        RandomStream stream(config.seed, substream_base + static_cast<std::uint64_t>(r));
        values[static_cast<std::size_t>(r)] = linear_record_finite(stream, q, s).value_at(s);
      });
      StatReport report = labeled(moment_ci(values, 1),
                                  "mean_theta_q" + name_num(q) + "_s" + name_num(s));
      pass_if_within_stderr(report, analytics::mean_theta_linear(q, s), k_se);
      result.reports.push_back(report);
      substream_base += static_cast<std::uint64_t>(config.replicates);
    }
  }

  // marginal of the level-infinity process: theta(s) ~ Exp(s)
  {
    const double s = 0.3;
    const std::int64_t n_draws = std::min<std::int64_t>(config.replicates, 10'000);
    std::vector<double> values(static_cast<std::size_t>(n_draws));
    parallel_for(n_draws, config.threads, [&](std::int64_t r) {
      RandomStream stream(config.seed, substream_base + static_cast<std::uint64_t>(r));
      values[static_cast<std::size_t>(r)] =
          linear_record_infinite(stream, 1.0, s).value_at(s);
    });
    StatReport report = labeled(
        ks_test(values, [s](double x) { return -std::expm1(-s * x); }), "ks_theta_marginal_exp");
    pass_if_p_above(report, p_min);
    result.reports.push_back(report);
  }

  std::filesystem::create_directories(config.out_dir);
  return result;
}

// --- martingale -----------------------------------------------------------

ExperimentResult run_martingale(const ExperimentConfig& config) {
  ExperimentResult result;
  const double k_se = config.threshold("stderr_mult", 4.0);
  const double k_se_fourth = config.threshold("stderr_mult_fourth", 5.0);

  auto reports = martingale_stats(2.0, 1.5, config.replicates, config.seed);
  pass_if_within_stderr(reports[0], 0.0, k_se);
  pass_if_within_stderr(reports[1], 0.0, k_se);
  pass_if_within_stderr(reports[2], 0.0, k_se_fourth);
  result.reports.assign(reports.begin(), reports.end());

  std::filesystem::create_directories(config.out_dir);
  return result;
}

// --- lgn --------------------------------------------------------------------

ExperimentResult run_lgn(const ExperimentConfig& config) {
  ExperimentResult result;
  const double p_min = config.threshold("p_min", 1e-3);

  const std::int64_t terminal = config.n_values.back();
  std::vector<std::int64_t> checkpoints;
  for (std::int64_t c : config.checkpoints)
    if (c < terminal) checkpoints.push_back(c);
  std::vector<std::int64_t> all = checkpoints;
  all.push_back(terminal);

  std::vector<std::vector<RecordSummary>> rows(static_cast<std::size_t>(config.replicates));
  parallel_for(config.replicates, config.threads, [&](std::int64_t r) {
    rows[static_cast<std::size_t>(r)] =
        run_growth(config.seed, static_cast<std::uint64_t>(r), terminal, all);
  });

  std::vector<std::string> csv_rows;
  csv_rows.reserve(rows.size() * all.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const RecordSummary& summary : rows[r])
      csv_rows.push_back(record_summary_csv_row(r, summary));
  std::filesystem::create_directories(config.out_dir);
  const auto data_path = config.out_dir / "lgn_trajectories.csv";
  write_lines(data_path, record_summary_csv_header(), csv_rows);
  result.artifacts.push_back(data_path);

  std::vector<double> theta_hat(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    theta_hat[r] = rows[r].back().theta_hat_length;

  StatReport ks = labeled(ks_test(theta_hat, [](double x) { return analytics::rayleigh_cdf(x); }),
                          "ks_theta_hat_rayleigh");
  pass_if_p_above(ks, p_min);
  result.reports.push_back(ks);

  // per-trajectory deviation |X_n^*/sqrt(2n) - theta_hat|, medians must
  // decrease strictly along the checkpoints
  std::vector<double> medians;
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    std::vector<double> deviations(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const RecordSummary& summary = rows[r][c];
      const double scaled =
          static_cast<double>(summary.record_count) / std::sqrt(2.0 * static_cast<double>(summary.n));
      deviations[r] = std::abs(scaled - theta_hat[r]);
    }
    medians.push_back(median(std::move(deviations)));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < medians.size(); ++i)
    decreasing = decreasing && medians[i] < medians[i - 1];
  StatReport decay =
      check_true("record_deviation_median_decay", decreasing, medians.empty() ? 0.0 : medians.back());
  for (std::size_t i = 0; i < medians.size(); ++i)
    decay.meta.emplace_back("median_n" + std::to_string(checkpoints[i]), format_double(medians[i]));
  result.reports.push_back(decay);
  return result;
}

// --- fluctuation ------------------------------------------------------------

ExperimentResult run_fluctuation(const ExperimentConfig& config) {
  ExperimentResult result;

  std::vector<std::int64_t> all = config.n_values;
  if (all.back() < config.m_ref) all.push_back(config.m_ref);

  std::vector<std::vector<RecordSummary>> rows(static_cast<std::size_t>(config.replicates));
  parallel_for(config.replicates, config.threads, [&](std::int64_t r) {
    rows[static_cast<std::size_t>(r)] =
        run_growth(config.seed, static_cast<std::uint64_t>(r), config.m_ref, all);
  });

  const std::size_t n_checkpoints = config.n_values.size();
  std::vector<double> theta_hat(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    theta_hat[r] = rows[r].back().theta_hat_length;

  // Z and the studentized W per checkpoint
  std::vector<std::vector<double>> z_by_checkpoint(n_checkpoints);
  std::vector<std::vector<double>> w_by_checkpoint(n_checkpoints);
  std::vector<std::string> csv_rows;
  csv_rows.reserve(rows.size() * n_checkpoints);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < n_checkpoints; ++c) {
      const RecordSummary& summary = rows[r][c];
      const double n = static_cast<double>(summary.n);
      const double z = std::pow(n, 0.25) *
                       (static_cast<double>(summary.record_count) / std::sqrt(2.0 * n) -
                        theta_hat[r]);
      const double w = z / (std::pow(2.0, 0.25) * std::sqrt(theta_hat[r]));
      z_by_checkpoint[c].push_back(z);
      w_by_checkpoint[c].push_back(w);
      std::string row = std::to_string(r);
      row += ',';
      row += std::to_string(summary.n);
      row += ',';
      row += format_double(z);
      row += ',';
      row += format_double(w);
      row += ',';
      row += format_double(theta_hat[r]);
      csv_rows.push_back(std::move(row));
    }
  }
  std::filesystem::create_directories(config.out_dir);
  const auto data_path = config.out_dir / "fluctuation_z.csv";
  write_lines(data_path, "replicate,n,Z,W,theta_hat", csv_rows);
  result.artifacts.push_back(data_path);

  const std::size_t last = n_checkpoints - 1;
  const std::vector<double>& z_main = z_by_checkpoint[last];
  const std::string n_main = std::to_string(config.n_values[last]);

  // (a) second moment of Z against sqrt(pi)
  {
    StatReport report = labeled(moment_ci(z_main, 2), "z2_n" + n_main);
    const double rel_tol = config.threshold("z2_rel_tol", 0.15);
    report.statistic = std::abs(report.estimate / std::sqrt(kPi) - 1.0);
    report.pass = report.statistic <= rel_tol;
    result.reports.push_back(report);
  }

  // (b) kurtosis ratio, target 12/pi, must stay away from the Gaussian 3
  {
    const double m2 = moment_ci(z_main, 2).estimate;
    const double m4 = moment_ci(z_main, 4).estimate;
    const double ratio = m4 / (m2 * m2);
    StatReport report = check_true("z_kurtosis_ratio_n" + n_main,
                                   ratio >= config.threshold("kurt_lo", 3.3) &&
                                       ratio <= config.threshold("kurt_hi", 4.4),
                                   ratio);
    report.meta.emplace_back("target", format_double(12.0 / kPi));
    result.reports.push_back(report);
  }

  // (c) + (d) studentized W against the standard normal
  std::vector<double> ks_d(n_checkpoints);
  for (std::size_t c = 0; c < n_checkpoints; ++c)
    ks_d[c] = ks_statistic(w_by_checkpoint[c], normal_cdf);
  {
    StatReport report;
    report.name = "w_ks_normal_n" + n_main;
    report.statistic = ks_d[last];
    report.estimate = ks_d[last];
    report.p_value =
        kolmogorov_p(std::sqrt(static_cast<double>(w_by_checkpoint[last].size())) * ks_d[last]);
    report.pass = ks_d[last] < config.threshold("w_ks_d_max", 0.06);
    result.reports.push_back(report);
  }
  {
    StatReport report = check_true("w_ks_trend", ks_d[last] <= ks_d[0], ks_d[last] - ks_d[0]);
    for (std::size_t c = 0; c < n_checkpoints; ++c)
      report.meta.emplace_back("D_n" + std::to_string(config.n_values[c]), format_double(ks_d[c]));
    result.reports.push_back(report);
  }

  // (e) conditional-variance structure: W^2 decorrelated from theta_hat
  {
    std::vector<double> w_squared(z_main.size());
    for (std::size_t i = 0; i < w_by_checkpoint[last].size(); ++i)
      w_squared[i] = w_by_checkpoint[last][i] * w_by_checkpoint[last][i];
    StatReport report = labeled(correlation(w_squared, theta_hat), "corr_w2_theta_n" + n_main);
    report.pass = std::abs(report.estimate) < config.threshold("corr_max", 0.1);
    result.reports.push_back(report);

    StatReport informational =
        labeled(correlation(w_by_checkpoint[last], theta_hat), "corr_w_theta_n" + n_main);
    informational.meta.emplace_back("informational", "true");
    result.reports.push_back(informational);
  }

  // (f) empirical characteristic function of Z against the limit transform
  {
    const std::vector<double> t_grid = {0.5, 1.0, 2.0};
    const auto ecf = empirical_cf(z_main, t_grid);
    for (const CharFnPoint& point : ecf) {
      const double target = analytics::clt_char_fn(point.t);
      StatReport report = check_abs("z_cf_t" + name_num(point.t) + "_n" + n_main,
                                    point.real_part, target, config.threshold("cf_abs_tol", 0.05));
      report.meta.emplace_back("imag", format_double(point.imag_part));
      report.meta.emplace_back("target", format_double(target));
      result.reports.push_back(report);
    }
  }
  return result;
}

// --- discrete ---------------------------------------------------------------

ExperimentResult run_discrete(const ExperimentConfig& config) {
  ExperimentResult result;
  const double p_min = config.threshold("p_min", 1e-3);
  const double mean_rel_tol = config.threshold("mean_rel_tol", 0.05);
  const double var_rel_tol = config.threshold("var_rel_tol", 0.10);

  std::vector<std::string> csv_rows;
  std::uint64_t pair_index = 0;
  for (TreeFamily family : config.families) {
    for (std::int64_t size : config.n_values) {
      CuttingMoments moments = cutting_moments(family, size, config.replicates,
                                               config.seed + pair_index, config.threads);
      ++pair_index;

      for (std::size_t r = 0; r < moments.cuts.size(); ++r) {
        std::string row = std::to_string(r);
        row += ',';
        row += tree_family_name(family);
        row += ',';
        row += std::to_string(moments.n_edges);
        row += ',';
        row += std::to_string(moments.cuts[r]);
        csv_rows.push_back(std::move(row));
      }

      StatReport mean = moments.mean_scaled;
      mean.statistic = std::abs(mean.estimate / std::sqrt(kPi / 2.0) - 1.0);
      mean.pass = mean.statistic <= mean_rel_tol;
      mean.meta.emplace_back("target", format_double(std::sqrt(kPi / 2.0)));
      result.reports.push_back(mean);

      StatReport ks = moments.ks_rayleigh;
      pass_if_p_above(ks, p_min);
      result.reports.push_back(ks);

      StatReport variance = moments.variance_scaled;
      const double var_target = 2.0 - kPi / 2.0;
      variance.statistic = std::abs(variance.estimate / var_target - 1.0);
      variance.pass = variance.statistic <= var_rel_tol;
      variance.meta.emplace_back("target", format_double(var_target));
      result.reports.push_back(variance);
    }
  }

  std::filesystem::create_directories(config.out_dir);
  const auto data_path = config.out_dir / "discrete_cuts.csv";
  write_lines(data_path, "replicate,family,n_edges,cuts", csv_rows);
  result.artifacts.push_back(data_path);
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& raw_config) {
  ExperimentConfig config = raw_config;
  config.resolve();

  ExperimentResult result;
  switch (config.kind) {
    case ExperimentKind::densities: result = run_densities(config); break;
    case ExperimentKind::lineartest: result = run_lineartest(config); break;
    case ExperimentKind::martingale: result = run_martingale(config); break;
    case ExperimentKind::lgn: result = run_lgn(config); break;
    case ExperimentKind::fluctuation: result = run_fluctuation(config); break;
    case ExperimentKind::discrete: result = run_discrete(config); break;
  }

  result.all_pass = true;
  for (const StatReport& report : result.reports) result.all_pass = result.all_pass && report.pass;

  std::vector<std::string> rows;
  rows.reserve(result.reports.size());
  for (const StatReport& report : result.reports) rows.push_back(stat_report_csv_row(report));
  const auto report_path =
      config.out_dir / (experiment_kind_name(config.kind) + "_report.csv");
  write_lines(report_path, stat_report_csv_header(), rows);
  result.artifacts.push_back(report_path);
  return result;
}

}  // namespace crt
