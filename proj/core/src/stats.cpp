#include "crt_records/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace crt {

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: need at least one sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    if (f < 0.0 || f > 1.0) throw std::invalid_argument("ks_statistic: cdf out of [0,1]");
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

double kolmogorov_p(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // dual series, accurate where the direct one converges slowly
    const double pi = 3.14159265358979323846;
    const double y = std::exp(-pi * pi / (8.0 * lambda * lambda));
    double cdf = 0.0;
    for (int k = 1; k < 50; k += 2) {
      const double term = std::pow(y, static_cast<double>(k) * k);
      cdf += term;
      if (term < 1e-12 * cdf) break;
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double term = 2.0 * std::exp(-2.0 * static_cast<double>(k) * k * lambda * lambda);
    q += (k % 2 == 1) ? term : -term;
    if (term < 1e-12) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

StatReport ks_test(const std::vector<double>& samples, const std::function<double(double)>& cdf) {
  if (samples.size() < 20) throw std::invalid_argument("ks_test: need at least 20 samples");
  StatReport report;
  report.name = "ks";
  report.statistic = ks_statistic(samples, cdf);
  report.estimate = report.statistic;
  report.p_value = kolmogorov_p(std::sqrt(static_cast<double>(samples.size())) * report.statistic);
  return report;
}

StatReport moment_ci(const std::vector<double>& samples, int k) {
  if (k < 0) throw std::invalid_argument("moment_ci: k must be >= 0");
  if (samples.size() < 2) throw std::invalid_argument("moment_ci: need at least 2 samples");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += std::pow(x, k);
  mean /= n;
  double var = 0.0;
  for (double x : samples) {
    const double d = std::pow(x, k) - mean;
    var += d * d;
  }
  var /= (n - 1.0);
  StatReport report;
  report.name = "moment_" + std::to_string(k);
  report.estimate = mean;
  report.std_error = std::sqrt(var / n);
  return report;
}

StatReport correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("correlation: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("correlation: need at least 3 pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("correlation: zero variance input");
  const double r = sxy / std::sqrt(sxx * syy);
  StatReport report;
  report.name = "pearson";
  report.estimate = r;
  report.std_error = (1.0 - r * r) / std::sqrt(std::max(n - 3.0, 1.0));
  report.statistic = r;
  return report;
}

std::vector<CharFnPoint> empirical_cf(const std::vector<double>& samples,
                                      const std::vector<double>& t_grid) {
  if (samples.empty()) throw std::invalid_argument("empirical_cf: empty samples");
  std::vector<CharFnPoint> out;
  out.reserve(t_grid.size());
  const double n = static_cast<double>(samples.size());
  for (double t : t_grid) {
    double re = 0.0, im = 0.0;
    for (double x : samples) {
      re += std::cos(t * x);
      im += std::sin(t * x);
    }
    out.push_back({t, re / n, im / n});
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string stat_report_csv_header() { return "name,estimate,stderr,statistic,p_value,pass"; }

std::string stat_report_csv_row(const StatReport& report) {
  std::string row = report.name;
  row += ',';
  row += format_double(report.estimate);
  row += ',';
  row += format_double(report.std_error);
  row += ',';
  row += format_double(report.statistic);
  row += ',';
  row += format_double(report.p_value);
  row += ',';
  row += report.pass ? "true" : "false";
  return row;
}

}  // namespace crt
