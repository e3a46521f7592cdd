#pragma once

#include <functional>

#include "wdist/core.hpp"
#include "wdist/quad.hpp"
#include "wdist/testfn.hpp"

namespace wdist {

/// The two regularizations of the k-th derivative of delta_gamma(P):
/// OuterR carries the outer integral in r (delta_{gamma,1}),
/// OuterS in s (delta_{gamma,2}).  They coincide for k < (p+q+|gamma|-2)/2.
enum class DeltaVariant { OuterR, OuterS };

enum class TheoremTag { T1, T2, T3, Regular, UnsupportedCase };
const char* to_string(TheoremTag t);

struct ResidueReport {
  Complex pole{0.0, 0.0};
  TheoremTag theorem = TheoremTag::UnsupportedCase;
  Complex formula_value{0.0, 0.0};
  Complex oracle_value{0.0, 0.0};
  double discrepancy = 0.0;  // absolute, or relative when |formula| > 1
};

/// (delta^{(k)}_{gamma,v}(P), phi)_gamma.  The inner (1/(2s) d/ds)^k acts
/// symbolically on the psi profile; the outer integral runs through
/// integrate_semiaxis while convergent and finite_part_semiaxis beyond.
PairingResult pair_delta(const Signature& sig, DeltaVariant variant, int k,
                         const TestFunction& phi, double tol);

/// (L_B^k delta_gamma, phi)_gamma = (L_B^k phi)(0) by self-adjointness.
Complex pair_delta_origin(const Signature& sig, int k, const TestFunction& phi);

/// (P^lambda_{gamma,+}, phi)_gamma for Re(lambda) > -1 via the bipolar
/// reduction to int_0^inf u^{lambda+(n+|gamma|)/2-1} Phi(lambda,u) du.
PairingResult pair_plambda_direct(const Signature& sig, Complex lambda,
                                  const TestFunction& phi, double tol);

/// Analytic continuation by the k-fold Green-identity iterate:
/// (P^lambda, phi) = (P^{lambda+k}, L_B^k phi) / prod 4(lambda+j)(lambda+h+j-1)
/// with h = (n+|gamma|)/2.  forced_k < 0 picks the smallest k with
/// Re(lambda)+k > -1/2.  Refuses lambda within kPoleGuard of any pole.
PairingResult pair_plambda_continued(const Signature& sig, Complex lambda,
                                     const TestFunction& phi, double tol,
                                     int forced_k = -1);

/// Residue check at the first-series poles lambda = -k.
ResidueReport residue_first_series(const Signature& sig, int k,
                                   const TestFunction& phi, double tol);

/// Residue check at the second-series poles lambda = -(n+|gamma|)/2 - k.
ResidueReport residue_second_series(const Signature& sig, int k,
                                    const TestFunction& phi, double tol);

struct LaurentReport {
  TheoremTag theorem = TheoremTag::UnsupportedCase;
  LaurentExpansion formula;
  LaurentExpansion fitted;
  ResidueReport residue;  // formula vs fitted c_{-1}
};

/// Double-pole Laurent check at the collision poles (n+|gamma| even).
LaurentReport laurent_double_pole(const Signature& sig, int k,
                                  const TestFunction& phi, double tol);

/// Laurent coefficients c_{-2}, c_{-1}, c_0 of an analytic-except-at-center
/// evaluator, by discrete Fourier inversion of M samples on the circle
/// |lambda - center| = radius.
LaurentExpansion laurent_circle_fit(
    Complex center, double radius, int M,
    const std::function<Complex(Complex)>& evaluator);

/// Default Richardson ladder for simple-pole residue oracles:
/// limit of f(eps) as eps -> 0 from eps = base, base/2, ... (points samples),
/// by polynomial extrapolation.
Complex richardson_limit(const std::function<Complex(double)>& f,
                         double base = 0.2, int points = 4,
                         double* err_estimate = nullptr);

}  // namespace wdist
