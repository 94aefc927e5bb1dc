#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "crt_records/analytics.hpp"
#include "crt_records/quadrature.hpp"

using namespace crt::analytics;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("rayleigh pdf/cdf basics") {
  CHECK(rayleigh_cdf(0.0) == 0.0);
  CHECK(rayleigh_cdf(40.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rayleigh_pdf(1.0) == doctest::Approx(std::exp(-0.5)));
  CHECK_THROWS_AS(rayleigh_pdf(-0.1), std::invalid_argument);
}

TEST_CASE("rayleigh moments by quadrature") {
  CHECK(rayleigh_moment(1) == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-9));
  CHECK(std::abs(rayleigh_moment(2) - 2.0) < 1e-9);
  CHECK(rayleigh_moment(0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(rayleigh_moment(-1), std::invalid_argument);
}

TEST_CASE("chi2n matches rayleigh at n = 1 and normalizes") {
  for (int i = 1; i <= 10; ++i) {
    const double x = 0.3 * i;
    CHECK(std::abs(chi2n_pdf(1, x) - rayleigh_pdf(x)) < 1e-12);
    CHECK(std::abs(chi2n_cdf(1, x) - rayleigh_cdf(x)) < 1e-12);
  }
  const double mass = crt::integrate_to_infinity([](double x) { return chi2n_pdf(3, x); }, 0.0);
  CHECK(std::abs(mass - 1.0) < 1e-8);
  const double m2 =
      crt::integrate_to_infinity([](double x) { return x * x * chi2n_pdf(7, x); }, 0.0);
  CHECK(std::abs(m2 - 14.0) < 1e-6);
  CHECK_THROWS_AS(chi2n_pdf(0, 1.0), std::invalid_argument);
}

TEST_CASE("regularized gamma spot values") {
  // P(1, x) = 1 - e^{-x}
  CHECK(regularized_gamma_p(1.0, 0.7) == doctest::Approx(-std::expm1(-0.7)).epsilon(1e-13));
  CHECK(regularized_gamma_p(5.0, 100.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(regularized_gamma_p(5.0, 0.0) == 0.0);
  // cross-check against quadrature of the chi(2n) density at n = 10
  const double x = 4.2;
  const double by_quadrature =
      crt::integrate([](double t) { return chi2n_pdf(10, t); }, 0.0, x);
  CHECK(chi2n_cdf(10, x) == doctest::Approx(by_quadrature).epsilon(1e-9));
}

TEST_CASE("h_moment identities") {
  CHECK(h_moment(2, 0.0) == 1.0);
  CHECK(h_moment(100, 0.0) == 1.0);
  // alpha = 1 at n = 10 against a direct log-gamma composition
  const double direct = std::exp(std::lgamma(2.0) - 0.5 * std::log(2.0) + std::lgamma(9.5) -
                                 std::lgamma(10.0));
  CHECK(h_moment(10, 1.0) == doctest::Approx(direct).epsilon(1e-14));
  // n = 2: the attachment is uniform on a Rayleigh-length branch, so
  // E[h] = E[U] E[L1] and E[h^2] = E[U^2] E[L1^2]
  CHECK(h_moment(2, 1.0) == doctest::Approx(0.5 * std::sqrt(kPi / 2.0)).epsilon(1e-12));
  CHECK(h_moment(2, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  // asymptotic scaling
  const double scaled = h_moment(1'000'000, 1.0) * 1000.0;
  CHECK(std::abs(scaled / std::exp2(-0.5) - 1.0) < 1e-3);
  CHECK_THROWS_AS(h_moment(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(h_moment(5, -1.0), std::invalid_argument);
}

TEST_CASE("tagged fragment density") {
  for (double a : {0.1, 1.0, 10.0}) {
    const double mass = crt::integrate([a](double v) { return tagged_fragment_pdf(a, v); }, 0.0,
                                       1.0, crt::QuadratureSpec{1e-11, 1e-11, 1'000'000});
    CHECK(std::abs(mass - 1.0) < 1e-8);
  }
  for (double v : {0.05, 0.3, 0.7, 0.95}) CHECK(tagged_fragment_pdf(1.0, v) > 0.0);
  // frozen quadrature goldens at a = 1: mass below 1/2 and a pointwise value
  const double half_mass = crt::integrate([](double v) { return tagged_fragment_pdf(1.0, v); },
                                          0.0, 0.5, crt::QuadratureSpec{1e-11, 1e-11, 1'000'000});
  CHECK(half_mass == doctest::Approx(0.68268949213708585).epsilon(1e-9));
  CHECK(tagged_fragment_pdf(1.0, 0.25) == doctest::Approx(1.0398381638546195).epsilon(1e-12));
  CHECK_THROWS_AS(tagged_fragment_pdf(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(tagged_fragment_pdf(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("branch length density, cdf, and moment bounds") {
  // a = 0 reduces to the Rayleigh law
  for (double x : {0.2, 0.9, 1.7, 3.0}) {
    CHECK(std::abs(branch_length_pdf(0.0, x) - rayleigh_pdf(x)) < 1e-12);
    CHECK(std::abs(branch_length_cdf(0.0, x) - rayleigh_cdf(x)) < 1e-12);
  }
  CHECK(branch_length_cdf(2.0, 60.0) == doctest::Approx(1.0).epsilon(1e-14));

  // scaled moments approach Gamma(lambda + 1) as a grows, from below, with
  // the O(a^-2) excess from the second proof integral
  const double lambda = 1.5;
  const double c1 = std::tgamma(lambda + 1.0);
  for (double a : {10.0, 100.0, 1000.0}) {
    const double ratio = branch_length_moment(a, lambda) * std::pow(a, lambda);
    CHECK(ratio > c1 - 0.05);
    CHECK(ratio < c1 * (1.0 + 10.0 / (a * a)));
  }
  CHECK_THROWS_AS(branch_length_pdf(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(branch_length_moment(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("mean separation time closed form") {
  CHECK(mean_theta_linear(kInf, 2.0) == 0.5);
  CHECK(mean_theta_linear(3.0, 1e-8) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(mean_theta_linear(1.0, 2.0) == doctest::Approx(-std::expm1(-2.0) / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(mean_theta_linear(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("mean Theta under mass-v trees") {
  CHECK(mean_Theta_qv(kInf, 2.0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-9));
  for (double q : {0.1, 1.0, 10.0}) {
    for (double v : {0.1, 1.0, 10.0}) {
      const double value = mean_Theta_qv(q, v);
      CHECK(value <= std::sqrt(kPi / 2.0) * std::min(q * v, std::sqrt(v)) + 1e-10);
      CHECK(value > 0.0);
    }
  }
  // small-q linearization: value ~ q v
  const double q = 1e-6;
  CHECK(mean_Theta_qv(q, 1.0) / q == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(mean_Theta_qv(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("F_qt second moment of the integrated record process") {
  // frozen cross-implementation values (verified against direct Monte Carlo
  // of the record process to well within 1%)
  CHECK(F_qt(1.0, 1.0) == doctest::Approx(0.6944741801).epsilon(1e-6));
  CHECK(F_qt(3.0, 0.5) == doctest::Approx(1.3248100049).epsilon(1e-6));
  CHECK(F_qt(2.0, 1.5) == doctest::Approx(3.4304719243).epsilon(1e-6));

  // the record process is scale invariant, so F depends on qt only
  CHECK(F_qt(2.0, 0.5) == doctest::Approx(F_qt(1.0, 1.0)).epsilon(1e-9));
  CHECK(F_qt(0.5, 2.0) == doctest::Approx(F_qt(1.0, 1.0)).epsilon(1e-9));

  // small-t expansion: F = q^2 t^2 (1 + O(t))
  CHECK(F_qt(1.0, 1e-3) / 1e-6 == doctest::Approx(1.0).epsilon(0.01));
  CHECK(F_qt(3.0, 1e-3) / 9e-6 == doctest::Approx(1.0).epsilon(0.01));

  // nondecreasing in both arguments
  double previous = 0.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double value = F_qt(1.0, t);
    CHECK(value >= previous);
    previous = value;
  }
  previous = 0.0;
  for (double q : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double value = F_qt(q, 1.0);
    CHECK(value >= previous);
    previous = value;
  }

  // boundedness of the normal-range envelope with fitted constants
  double c1 = 0.0;
  for (double q : {0.1, 1.0, 10.0})
    for (double t : {0.1, 1.0, 10.0}) c1 = std::max(c1, F_qt(q, t) / std::pow(q * t, 1.5));
  CHECK(c1 < 10.0);

  // large-argument envelope log^2(qt) + q^{-1/2} t^{1/2} stays bounded
  double c2 = 0.0;
  for (double x : {1e2, 1e3}) {
    const double envelope = std::log(x) * std::log(x) + std::sqrt(x);
    c2 = std::max(c2, F_qt(1.0, x) / envelope);
  }
  CHECK(c2 < 20.0);

  CHECK_THROWS_AS(F_qt(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(F_qt(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("second moment of the one-point marginal") {
  // at v = 0 the level is still q
  CHECK(second_moment_theta_linear(2.0, 0.0) == 4.0);
  // against direct quadrature of the marginal: atom + density
  const double q = 2.0, v = 0.7;
  const double interior =
      crt::integrate([q, v](double x) { return x * x * v * std::exp(-v * x); }, 0.0, q);
  const double direct = q * q * std::exp(-q * v) + interior;
  CHECK(second_moment_theta_linear(q, v) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("characteristic function of the fluctuation limit") {
  CHECK(clt_char_fn(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(clt_char_fn(1.25) == clt_char_fn(-1.25));
  // frozen quadrature goldens
  CHECK(clt_char_fn(0.5) == doctest::Approx(0.806531822249).epsilon(1e-9));
  CHECK(clt_char_fn(1.0) == doctest::Approx(0.454358639235).epsilon(1e-9));
  CHECK(clt_char_fn(2.0) == doctest::Approx(0.094645900038).epsilon(1e-9));
}

TEST_CASE("z moments from rayleigh quadrature") {
  const auto [second, fourth] = z_moments();
  CHECK(second == doctest::Approx(std::sqrt(kPi)).epsilon(1e-9));
  CHECK(fourth == doctest::Approx(12.0).epsilon(1e-9));
  CHECK(fourth / (second * second) == doctest::Approx(12.0 / kPi).epsilon(1e-9));
  CHECK(fourth / (second * second) > 3.0);
}

TEST_CASE("cdfs are nondecreasing from 0 toward 1") {
  const auto check_cdf = [](auto&& cdf, double hi) {
    double previous = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double x = hi * i / 100.0;
      const double value = cdf(x);
      CHECK(value >= previous - 1e-15);
      previous = value;
    }
    CHECK(cdf(0.0) == 0.0);
    CHECK(previous <= 1.0 + 1e-12);
    CHECK(cdf(hi) > 0.999);
  };
  check_cdf([](double x) { return rayleigh_cdf(x); }, 8.0);
  check_cdf([](double x) { return chi2n_cdf(4, x); }, 10.0);
  check_cdf([](double x) { return branch_length_cdf(1.5, x); }, 8.0);
}
