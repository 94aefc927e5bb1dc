#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "crt_records/quadrature.hpp"

using crt::integrate;
using crt::integrate_to_infinity;
using crt::QuadratureSpec;

TEST_CASE("polynomial and trigonometric integrals") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("semi-infinite integrals with exponential and Gaussian decay") {
  CHECK(integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate_to_infinity([](double x) { return std::exp(-0.5 * x * x); }, 0.0) ==
        doctest::Approx(std::sqrt(3.14159265358979323846 / 2.0)).epsilon(1e-10));
  CHECK(integrate_to_infinity([](double x) { return std::exp(-x); }, 2.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("integrable endpoint singularity") {
  QuadratureSpec spec;
  spec.abs_tol = 1e-9;
  spec.rel_tol = 1e-9;
  CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, spec) ==
        doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("invalid tolerances are rejected") {
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, QuadratureSpec{0.0, 1e-10, 100}),
                  std::invalid_argument);
}
