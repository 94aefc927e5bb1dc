#include "crt_records/analytics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crt::analytics {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2Pi = 2.50662827463100050242;

// G1(y) = 1 - e^{-y}(1+y)          ~ y^2/2 - y^3/3 + y^4/8
// G2(y) = 2 - e^{-y}(2+2y+y^2)     ~ y^3/3 - y^4/4 + y^5/10
// Series branches avoid cancellation for small y.
double g1(double y) {
  if (y < 1e-4) return y * y * (0.5 - y / 3.0 + y * y / 8.0);
  return 1.0 - std::exp(-y) * (1.0 + y);
}

double g2(double y) {
  if (y < 1e-3) return y * y * y * (1.0 / 3.0 - y / 4.0 + y * y / 10.0);
  return 2.0 - std::exp(-y) * (2.0 + 2.0 * y + y * y);
}

// E[theta(v) (1 - e^{-theta(v) d})] under P_q: atom e^{-qv} at q plus
// density v e^{-vx} on (0, q).
double pair_kernel(double q, double v, double d) {
  const double tail = -std::expm1(-q * d);
  if (v < 1e-300) return q * tail;
  const double atom = q * std::exp(-q * v) * tail;
  const double vd = v + d;
  return atom + g1(q * v) / v - v * g1(q * vd) / (vd * vd);
}

// E[theta(v) theta(u)] for v < u, by the Markov property at v.
double pair_expectation(double q, double v, double u) {
  const double d = u - v;
  if (d < 1e-6) {
    // A(v, d) = E[theta(v)^2] - (d/2) E[theta(v)^3] + O(d^2)
    const double m2 = second_moment_theta_linear(q, v);
    double m3;
    if (v < 1e-300) {
      m3 = q * q * q;
    } else {
      const double y = q * v;
      const double G3 = (y < 1e-2) ? y * y * y * y * (0.25 - y / 5.0)
                                   : 6.0 - std::exp(-y) * (6.0 + 6.0 * y + 3.0 * y * y + y * y * y);
      m3 = q * q * q * std::exp(-y) + G3 / (v * v * v);
    }
    return m2 - 0.5 * d * m3;
  }
  return pair_kernel(q, v, d) / d;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::invalid_argument("regularized_gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;

  if (x < a + 1.0) {
    // series representation
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16)
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("regularized_gamma_p: series did not converge");
  }

  // modified Lentz continued fraction for Q(a, x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      const double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
      return 1.0 - q;
    }
  }
  throw std::runtime_error("regularized_gamma_p: continued fraction did not converge");
}

double rayleigh_pdf(double x) {
  if (x < 0.0) throw std::invalid_argument("rayleigh_pdf: x must be >= 0");
  return x * std::exp(-0.5 * x * x);
}

double rayleigh_cdf(double x) {
  if (x < 0.0) throw std::invalid_argument("rayleigh_cdf: x must be >= 0");
  return -std::expm1(-0.5 * x * x);
}

double rayleigh_moment(int k, const QuadratureSpec& spec) {
  if (k < 0) throw std::invalid_argument("rayleigh_moment: k must be >= 0");
  return integrate_to_infinity(
      [k](double x) { return std::pow(x, k) * rayleigh_pdf(x); }, 0.0, spec);
}

double chi2n_pdf(int n, double x) {
  if (n < 1) throw std::invalid_argument("chi2n_pdf: n must be >= 1");
  if (x < 0.0) throw std::invalid_argument("chi2n_pdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double log_pdf = (1.0 - n) * std::log(2.0) - std::lgamma(n) +
                         (2.0 * n - 1.0) * std::log(x) - 0.5 * x * x;
  return std::exp(log_pdf);
}

double chi2n_cdf(int n, double x) {
  if (n < 1) throw std::invalid_argument("chi2n_cdf: n must be >= 1");
  if (x < 0.0) throw std::invalid_argument("chi2n_cdf: x must be >= 0");
  return regularized_gamma_p(n, 0.5 * x * x);
}

double h_moment(int n, double alpha) {
  if (n < 2) throw std::invalid_argument("h_moment: n must be >= 2");
  if (!(alpha > -1.0)) throw std::invalid_argument("h_moment: alpha must be > -1");
  const double log_value = std::lgamma(alpha + 1.0) - 0.5 * alpha * std::log(2.0) +
                           std::lgamma(n - 0.5) - std::lgamma(n + 0.5 * alpha - 0.5);
  return std::exp(log_value);
}

double tagged_fragment_pdf(double a, double v) {
  if (!(a > 0.0)) throw std::invalid_argument("tagged_fragment_pdf: a must be > 0");
  if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("tagged_fragment_pdf: v must be in (0,1)");
  return a * std::exp(-a * a * v / (2.0 - 2.0 * v)) /
         (kSqrt2Pi * std::sqrt(v) * std::pow(1.0 - v, 1.5));
}

double branch_length_pdf(double a, double x) {
  if (a < 0.0 || x < 0.0) throw std::invalid_argument("branch_length_pdf: need a, x >= 0");
  return (a + x) * std::exp(-0.5 * x * x - a * x);
}

double branch_length_cdf(double a, double x) {
  if (a < 0.0 || x < 0.0) throw std::invalid_argument("branch_length_cdf: need a, x >= 0");
  return -std::expm1(-(0.5 * x * x + a * x));
}

double branch_length_moment(double a, double lambda, const QuadratureSpec& spec) {
  if (a < 0.0) throw std::invalid_argument("branch_length_moment: a must be >= 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("branch_length_moment: lambda must be > 0");
  return integrate_to_infinity(
      [a, lambda](double x) { return std::pow(x, lambda) * branch_length_pdf(a, x); }, 0.0,
      spec);
}

double mean_theta_linear(double q, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("mean_theta_linear: s must be > 0");
  if (std::isinf(q)) return 1.0 / s;
  if (!(q > 0.0)) throw std::invalid_argument("mean_theta_linear: q must be > 0");
  return -std::expm1(-q * s) / s;
}

double mean_Theta_qv(double q, double v, const QuadratureSpec& spec) {
  if (!(v > 0.0)) throw std::invalid_argument("mean_Theta_qv: v must be > 0");
  if (std::isinf(q)) return std::sqrt(kPi * v / 2.0);
  if (!(q > 0.0)) throw std::invalid_argument("mean_Theta_qv: q must be > 0");
  const double qsv = q * std::sqrt(v);
  return std::sqrt(v) * integrate_to_infinity(
                            [qsv](double x) {
                              return std::exp(-0.5 * x * x) * (-std::expm1(-x * qsv));
                            },
                            0.0, spec);
}

double second_moment_theta_linear(double q, double v) {
  if (!(q > 0.0) || std::isinf(q))
    throw std::invalid_argument("second_moment_theta_linear: need 0 < q < inf");
  if (v < 0.0) throw std::invalid_argument("second_moment_theta_linear: v must be >= 0");
  if (v < 1e-300) return q * q;
  return q * q * std::exp(-q * v) + g2(q * v) / (v * v);
}

double F_qt(double q, double t, const QuadratureSpec& spec) {
  if (!(q > 0.0) || !(t > 0.0) || std::isinf(q) || std::isinf(t))
    throw std::invalid_argument("F_qt: need finite q, t > 0");
  QuadratureSpec inner_spec = spec;
  inner_spec.abs_tol = std::min(spec.abs_tol, 1e-12);
  inner_spec.rel_tol = std::min(spec.rel_tol, 1e-12);
  auto inner = [q, &inner_spec](double u) {
    return integrate([q, u](double v) { return pair_expectation(q, v, u); }, 0.0, u,
                     inner_spec);
  };
  return 2.0 * integrate(inner, 0.0, t, spec);
}

double clt_char_fn(double t, const QuadratureSpec& spec) {
  const double c = t * t / std::sqrt(2.0);
  return integrate_to_infinity(
      [c](double x) { return rayleigh_pdf(x) * std::exp(-c * x); }, 0.0, spec);
}

std::pair<double, double> z_moments(const QuadratureSpec& spec) {
  const double second = std::sqrt(2.0) * rayleigh_moment(1, spec);
  const double fourth = 6.0 * rayleigh_moment(2, spec);
  return {second, fourth};
}

}  // namespace crt::analytics
