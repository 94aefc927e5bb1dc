#ifndef CRT_RECORDS_QUADRATURE_HPP
#define CRT_RECORDS_QUADRATURE_HPP

#include <functional>

namespace crt {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 1'000'000;
};

/// Adaptive Gauss-Kronrod (G7/K15) on [a, b], worst-interval-first refinement.
/// Throws std::runtime_error if the subdivision budget is exhausted before
/// the error estimate meets max(abs_tol, rel_tol * |value|).
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

/// Integral over [a, infinity) via the substitution x = a - log(1 - u),
/// u in [0, 1). Requires f to decay at least exponentially.
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             const QuadratureSpec& spec = {});

}  // namespace crt

#endif  // CRT_RECORDS_QUADRATURE_HPP
