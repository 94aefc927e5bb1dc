#ifndef CRT_RECORDS_STATS_HPP
#define CRT_RECORDS_STATS_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace crt {

/// One named estimate or test outcome. Harness functions fill the numbers
/// and leave `pass` true; pass/fail policy belongs to the experiment layer.
struct StatReport {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double statistic = 0.0;
  double p_value = 1.0;
  bool pass = true;
  std::vector<std::pair<std::string, std::string>> meta;
};

/// Kolmogorov-Smirnov statistic D = sup |F_hat - F|. Valid for any n >= 1.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Tail probability Q(lambda) of the Kolmogorov distribution (asymptotic
/// series, terms truncated below 1e-12; dual series for small lambda).
double kolmogorov_p(double lambda);

/// One-sample KS test with p-value from the asymptotic distribution at
/// sqrt(n) scaling. Requires at least 20 samples.
StatReport ks_test(const std::vector<double>& samples, const std::function<double(double)>& cdf);

/// k-th empirical moment with standard error sd(x^k)/sqrt(n).
StatReport moment_ci(const std::vector<double>& samples, int k);

/// Pearson correlation; standard error (1-r^2)/sqrt(n-3).
StatReport correlation(const std::vector<double>& x, const std::vector<double>& y);

struct CharFnPoint {
  double t;
  double real_part;
  double imag_part;
};

/// Empirical characteristic function (1/n) sum (cos(t x_j), sin(t x_j)).
std::vector<CharFnPoint> empirical_cf(const std::vector<double>& samples,
                                      const std::vector<double>& t_grid);

/// CSV emission: header `name,estimate,stderr,statistic,p_value,pass`.
std::string stat_report_csv_header();
std::string stat_report_csv_row(const StatReport& report);

/// Decimal formatting with 17 significant digits, shared by all CSV output.
std::string format_double(double value);

}  // namespace crt

#endif  // CRT_RECORDS_STATS_HPP
