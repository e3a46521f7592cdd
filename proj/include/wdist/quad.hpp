#pragma once

#include <functional>
#include <optional>
#include <span>

#include "wdist/core.hpp"
#include "wdist/testfn.hpp"

namespace wdist {

struct QuadResult {
  Complex value{0.0, 0.0};
  double abs_error = 0.0;
  int subdivisions = 0;
};

using Integrand = std::function<Complex(double)>;

inline constexpr int kMaxSubdiv = 2000;

/// Nodes and weights for int_0^1 (1-t)^a t^b f(t) dt (Golub-Welsch).
/// a, b > -1.  Cached by (n, a, b).
struct Rule01 {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const Rule01& gauss_jacobi01(int n, double a, double b);

/// Adaptive integration of a smooth integrand on [a, b].
QuadResult integrate_interval(const Integrand& f, double a, double b,
                              double tol);

/// int_0^inf f(s) ds for smooth f with Gaussian-dominated decay.
/// scale_hint sets the panel geometry (roughly the decay length).
QuadResult integrate_semiaxis(const Integrand& f, double tol,
                              double scale_hint = 1.0);

/// int_0^1 (1-t)^lambda t^{beta_exp-1} g(t) dt for Re(lambda) > -1,
/// beta_exp > 0 and g smooth on [0,1].  The algebraic endpoint factors are
/// absorbed into quadrature weights; the oscillatory factor (1-t)^{i Im l}
/// rides along with g.
QuadResult integrate_jacobi_endpoint(const Integrand& g, Complex lambda,
                                     double beta_exp, double tol);

/// Hadamard finite part: analytic continuation in mu of
/// int_0^inf F(r) r^{mu-1} dr by Taylor subtraction of F near 0.
/// For mu within kIntTol of {0,-1,...,-taylor_order} throws PoleHitError
/// unless allow_integer_pole is set, in which case the constant term of the
/// continuation (split at r = 1) is returned.
QuadResult finite_part_semiaxis(const Integrand& F, double mu,
                                int taylor_order, double tol,
                                bool allow_integer_pole = false,
                                double split = 1.0);

enum class Region { All, ConePositive };

/// Brute-force n-dimensional evaluation of
///   int phi(x) [P(x)^lambda] x^gamma dx
/// over the orthant (Region::All, no power) or over {P>0}^+ via bipolar
/// coordinates (never by indicator rejection).
QuadResult orthant_oracle(const TestFunction& phi, const Signature& sig,
                          Region region, std::optional<Complex> lambda,
                          double tol);

}  // namespace wdist
