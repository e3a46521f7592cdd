#pragma once

#include <span>
#include <vector>

#include "wdist/core.hpp"

namespace wdist {

/// One term c * prod_i x_i^{2 a_i} * exp(-|x|^2/sigma^2).  Only even powers
/// appear, so every represented function is even in each coordinate.
struct Term {
  Complex coeff{0.0, 0.0};
  std::vector<int> exponents;  // the a_i
  double sigma = 1.0;
};

/// A finite sum of Gaussian-monomial terms.  The algebra is closed under the
/// Bessel operators B_{gamma_i} and hence under L_B.
class TestFunction {
public:
  TestFunction() = default;
  TestFunction(int axes, std::vector<Term> terms);

  static TestFunction gaussian(int axes, double sigma = 1.0,
                               Complex coeff = 1.0);
  static TestFunction monomial_gaussian(std::vector<int> exponents,
                                        double sigma = 1.0,
                                        Complex coeff = 1.0);

  int axes() const { return axes_; }
  const std::vector<Term>& terms() const { return terms_; }

  Complex evaluate(std::span<const double> x) const;
  Complex at_origin() const;

  TestFunction operator+(const TestFunction& other) const;
  TestFunction scaled(Complex factor) const;

private:
  int axes_ = 0;
  std::vector<Term> terms_;
};

/// Exact image of phi under the Bessel operator
/// B_gamma = d^2/dx_i^2 + (gamma/x_i) d/dx_i on the given axis.
TestFunction apply_bessel(const TestFunction& phi, int axis, double gamma_i);

/// L_B phi = sum_{i<p} B_{gamma'_i} phi - sum_{i>=p} B_{gamma''_i} phi.
TestFunction apply_LB(const TestFunction& phi, const Signature& sig);
TestFunction apply_LB_pow(const TestFunction& phi, const Signature& sig, int k);

/// psi_1(u, v) = psi(r, s) with u = r^2, v = s^2:
/// sum of c * u^A * v^B * exp(-(u+v)/sigma^2).
struct PsiTerm {
  Complex coeff{0.0, 0.0};
  int pow_u = 0;  // A = |a'|
  int pow_v = 0;  // B = |a''|
  double sigma = 1.0;
};

struct PsiProfile {
  std::vector<PsiTerm> terms;

  Complex eval_uv(double u, double v) const;
  Complex eval_rs(double r, double s) const { return eval_uv(r * r, s * s); }
};

/// Exact bipolar reduction psi(r,s) = 1/2 iint phi(r w', s w'') w^gamma dS dS,
/// term by term via dirichlet_monomial.
PsiProfile psi_profile(const TestFunction& phi, const Signature& sig);

Complex phi_at_origin(const TestFunction& phi);

}  // namespace wdist
