#pragma once

#include <span>
#include <vector>

#include "wdist/core.hpp"

namespace wdist {

/// Gamma(x) for real x, excluding the poles at 0, -1, -2, ...
/// Relative accuracy ~1e-13 on [0.1, 30].
double gammafn(double x);

/// Gamma(z) for complex z off the poles (Lanczos, ~1e-13 relative).
Complex gammafn(Complex z);

/// log|Gamma(x)| and the sign of Gamma(x); x must not be a pole.
double log_abs_gamma(double x);
int gamma_sign(double x);

/// psi(x) = Gamma'(x)/Gamma(x) for x > 0.
double digamma(double x);

/// Gamma(1-x) Gamma(x) sin(pi x) / pi, evaluated with both Gamma factors;
/// must equal 1 for non-integer x.
double reflection_check(double x);

/// Weighted area of the orthant part of the unit sphere S_1^+(dim):
/// prod Gamma((gamma_i+1)/2) / (2^{dim-1} Gamma((dim+|gamma|)/2)).
double sphere_measure(int dim, std::span<const double> gamma_part);

/// int_{S^+} prod omega_i^{2 a_i + gamma_i} dS =
/// prod Gamma(a_i+(gamma_i+1)/2) / (2^{dim-1} Gamma((dim+2|a|+|gamma|)/2)).
/// Reduces to sphere_measure for all-zero exponents.
double dirichlet_monomial(int dim, std::span<const int> exponents,
                          std::span<const double> gamma_part);

/// prefactor * prod Gamma(num_i) / prod Gamma(den_i), evaluated by summing
/// log-Gammas with sign tracking.  A pole in the numerator throws PoleError;
/// a pole in the denominator yields 0.
struct GammaQuotient {
  std::vector<double> numerator_args;
  std::vector<double> denominator_args;
  Complex prefactor{1.0, 0.0};

  Complex evaluate() const;
};

}  // namespace wdist
