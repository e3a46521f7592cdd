#include "wdist/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "wdist/specfun.hpp"

namespace wdist {

namespace {

// Merge terms with equal (exponents, sigma) keys and drop coefficients below
// 1e-15 of the largest; k-fold L_B iteration grows term counts otherwise.
std::vector<Term> consolidate(std::vector<Term> terms) {
  std::map<std::pair<std::vector<int>, double>, Complex> acc;
  for (auto& t : terms) acc[{t.exponents, t.sigma}] += t.coeff;
  double max_abs = 0.0;
  for (auto& [key, c] : acc) max_abs = std::max(max_abs, std::abs(c));
  std::vector<Term> out;
  for (auto& [key, c] : acc) {
    if (std::abs(c) <= 1e-15 * max_abs) continue;
    out.push_back({c, key.first, key.second});
  }
  return out;
}

}  // namespace

TestFunction::TestFunction(int axes, std::vector<Term> terms) : axes_(axes) {
  if (axes < 1) throw DomainError("TestFunction: axes < 1");
  for (auto& t : terms) {
    if (static_cast<int>(t.exponents.size()) != axes)
      throw DomainError("TestFunction: exponent list must have one entry per axis");
    for (int a : t.exponents)
      if (a < 0) throw DomainError("TestFunction: negative exponent");
    if (!(t.sigma > 0.0)) throw DomainError("TestFunction: sigma must be > 0");
  }
  terms_ = consolidate(std::move(terms));
}

TestFunction TestFunction::gaussian(int axes, double sigma, Complex coeff) {
  return TestFunction(axes, {Term{coeff, std::vector<int>(axes, 0), sigma}});
}

TestFunction TestFunction::monomial_gaussian(std::vector<int> exponents,
                                             double sigma, Complex coeff) {
  const int axes = static_cast<int>(exponents.size());
  return TestFunction(axes, {Term{coeff, std::move(exponents), sigma}});
}

Complex TestFunction::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != axes_)
    throw DomainError("TestFunction::evaluate: point dimension mismatch");
  double norm2 = 0.0;
  for (double xi : x) norm2 += xi * xi;
  Complex sum = 0.0;
  for (const auto& t : terms_) {
    double mono = 1.0;
    for (int i = 0; i < axes_; ++i)
      for (int j = 0; j < t.exponents[i]; ++j) mono *= x[i] * x[i];
    sum += t.coeff * mono * std::exp(-norm2 / (t.sigma * t.sigma));
  }
  return sum;
}

Complex TestFunction::at_origin() const {
  Complex sum = 0.0;
  for (const auto& t : terms_) {
    bool all_zero = true;
    for (int a : t.exponents) all_zero = all_zero && (a == 0);
    if (all_zero) sum += t.coeff;
  }
  return sum;
}

TestFunction TestFunction::operator+(const TestFunction& other) const {
  if (axes_ != other.axes_) throw DomainError("TestFunction: axes mismatch");
  std::vector<Term> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return TestFunction(axes_, std::move(all));
}

TestFunction TestFunction::scaled(Complex factor) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.coeff *= factor;
  return TestFunction(axes_, std::move(out));
}

TestFunction apply_bessel(const TestFunction& phi, int axis, double gamma_i) {
  if (axis < 0 || axis >= phi.axes())
    throw DomainError("apply_bessel: axis out of range");
  // In s = x_i^2 a factor u(s) = s^a e^{-s/sigma^2} maps to
  // (2+2*gamma) u'(s) + 4 s u''(s), giving
  //   s^{a-1}: 2a (2a + gamma - 1)
  //   s^a:     -(2 + 2*gamma + 8a)/sigma^2
  //   s^{a+1}: 4/sigma^4
  std::vector<Term> out;
  for (const auto& t : phi.terms()) {
    const int a = t.exponents[axis];
    const double s2 = t.sigma * t.sigma;
    if (a >= 1) {
      Term lower = t;
      lower.exponents[axis] = a - 1;
      lower.coeff *= 2.0 * a * (2.0 * a + gamma_i - 1.0);
      out.push_back(std::move(lower));
    }
    Term same = t;
    same.coeff *= -(2.0 + 2.0 * gamma_i + 8.0 * a) / s2;
    out.push_back(std::move(same));
    Term upper = t;
    upper.exponents[axis] = a + 1;
    upper.coeff *= 4.0 / (s2 * s2);
    out.push_back(std::move(upper));
  }
  return TestFunction(phi.axes(), std::move(out));
}

TestFunction apply_LB(const TestFunction& phi, const Signature& sig) {
  if (phi.axes() != sig.n())
    throw DomainError("apply_LB: phi axes must equal p+q");
  std::vector<Term> all;
  for (int i = 0; i < sig.n(); ++i) {
    TestFunction bi = apply_bessel(phi, i, sig.gamma_at(i));
    const Complex sign = (i < sig.p) ? 1.0 : -1.0;
    for (auto t : bi.terms()) {
      t.coeff *= sign;
      all.push_back(std::move(t));
    }
  }
  return TestFunction(phi.axes(), std::move(all));
}

TestFunction apply_LB_pow(const TestFunction& phi, const Signature& sig,
                          int k) {
  if (k < 0) throw DomainError("apply_LB_pow: k < 0");
  TestFunction out = phi;
  for (int i = 0; i < k; ++i) out = apply_LB(out, sig);
  return out;
}

Complex PsiProfile::eval_uv(double u, double v) const {
  Complex sum = 0.0;
  for (const auto& t : terms) {
    sum += t.coeff * std::pow(u, t.pow_u) * std::pow(v, t.pow_v) *
           std::exp(-(u + v) / (t.sigma * t.sigma));
  }
  return sum;
}

PsiProfile psi_profile(const TestFunction& phi, const Signature& sig) {
  if (phi.axes() != sig.n())
    throw DomainError("psi_profile: phi axes must equal p+q");
  // Distinct exponent patterns with equal (|a'|, |a''|, sigma) collapse to one
  // profile term, which keeps the k-fold L_B growth polynomial downstream.
  std::map<std::tuple<int, int, double>, Complex> acc;
  for (const auto& t : phi.terms()) {
    std::span<const int> a(t.exponents);
    const auto a_plus = a.subspan(0, sig.p);
    const auto a_minus = a.subspan(sig.p, sig.q);
    const double dp = dirichlet_monomial(sig.p, a_plus, sig.gamma_plus);
    const double dq = dirichlet_monomial(sig.q, a_minus, sig.gamma_minus);
    int A = 0, B = 0;
    for (int e : a_plus) A += e;
    for (int e : a_minus) B += e;
    acc[{A, B, t.sigma}] += 0.5 * t.coeff * dp * dq;
  }
  PsiProfile prof;
  for (const auto& [key, c] : acc)
    prof.terms.push_back({c, std::get<0>(key), std::get<1>(key),
                          std::get<2>(key)});
  return prof;
}

Complex phi_at_origin(const TestFunction& phi) { return phi.at_origin(); }

}  // namespace wdist
