#ifndef CRT_RECORDS_ANALYTICS_HPP
#define CRT_RECORDS_ANALYTICS_HPP

#include <utility>

#include "crt_records/quadrature.hpp"

namespace crt::analytics {

// Closed forms and quadrature values for every density, moment and bound the
// stochastic modules are tested against. Everything here is pure and
// reentrant.

/// Regularized lower incomplete gamma P(a, x); series for x < a+1, continued
/// fraction otherwise.
double regularized_gamma_p(double a, double x);

/// Rayleigh density x e^{-x^2/2} and CDF 1 - e^{-x^2/2} on [0, inf).
double rayleigh_pdf(double x);
double rayleigh_cdf(double x);

/// k-th Rayleigh moment, by quadrature (k >= 0).
double rayleigh_moment(int k, const QuadratureSpec& spec = {});

/// Chi(2n) density 2^{1-n}/(n-1)! x^{2n-1} e^{-x^2/2}; the total length of a
/// subtree spanned by n leaves has this law. CDF is P(n, x^2/2). n = 1 is
/// the Rayleigh case.
double chi2n_pdf(int n, double x);
double chi2n_cdf(int n, double x);

/// E[h^alpha] for the height of the first branch point of the n-leaf
/// subtree: Gamma(alpha+1) 2^{-alpha/2} Gamma(n-1/2) / Gamma(n+alpha/2-1/2).
/// Log-gamma based so it stays finite at n ~ 1e6. Requires n >= 2,
/// alpha > -1.
double h_moment(int n, double alpha);

/// Root-fragment mass density at fragmentation time a:
/// f_a(v) = a e^{-a^2 v/(2-2v)} / (sqrt(2 pi) v^{1/2} (1-v)^{3/2}), v in (0,1).
double tagged_fragment_pdf(double a, double v);

/// Conditional next-branch-length density given current total length a:
/// r_a(x) = (a+x) e^{-x^2/2 - a x}, with exact CDF 1 - e^{-x^2/2 - a x}.
double branch_length_pdf(double a, double x);
double branch_length_cdf(double a, double x);
/// lambda-th moment of r_a, by quadrature (lambda > 0).
double branch_length_moment(double a, double lambda, const QuadratureSpec& spec = {});

/// Mean separation time of the linear record process started at level q,
/// evaluated at distance s: (1 - e^{-q s})/s. Pass q = infinity for the
/// limit 1/s.
double mean_theta_linear(double q, double s);

/// E_q^{(v)}[Theta]: mean of the mass-averaged separation time on a tree of
/// mass v when the process starts at level q. Computed as
/// sqrt(v) * int_0^inf e^{-x^2/2} (1 - e^{-x q sqrt(v)}) dx; q = infinity
/// gives sqrt(pi v / 2). Bounded by sqrt(pi/2) min(q v, sqrt(v)).
double mean_Theta_qv(double q, double v, const QuadratureSpec& spec = {});

/// F(q,t) = E_q[(int_0^t theta(s) ds)^2] for the linear record process.
/// Exact double integral obtained from the Markov property at the smaller
/// time and the one-point marginal of theta; scale invariance makes it a
/// function of q t alone. See also second_moment_theta_linear.
double F_qt(double q, double t, const QuadratureSpec& spec = {});

/// E_q[theta(v)^2], the second moment of the one-point marginal.
double second_moment_theta_linear(double q, double v);

/// Characteristic function of the fluctuation limit Z under the mixture
/// E[e^{itZ}] = int_0^inf x e^{-x^2/2} e^{-t^2 x / sqrt(2)} dx.
/// Real-valued and even in t.
double clt_char_fn(double t, const QuadratureSpec& spec = {});

/// (E[Z^2], E[Z^4]) = (sqrt(2) E[Theta], 6 E[Theta^2]) computed from
/// rayleigh_moment, not hard-coded.
std::pair<double, double> z_moments(const QuadratureSpec& spec = {});

}  // namespace crt::analytics

#endif  // CRT_RECORDS_ANALYTICS_HPP
