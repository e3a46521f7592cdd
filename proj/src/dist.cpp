#include "wdist/dist.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wdist/specfun.hpp"

namespace wdist {

const char* to_string(TheoremTag t) {
  switch (t) {
    case TheoremTag::T1: return "T1";
    case TheoremTag::T2: return "T2";
    case TheoremTag::T3: return "T3";
    case TheoremTag::Regular: return "Regular";
    default: return "UnsupportedCase";
  }
}

namespace {

// One radial factor c * v^power * exp(-v/sigma^2).
struct RadialTerm {
  Complex coeff{0.0, 0.0};
  double power = 0.0;
  double sigma = 1.0;
};

// d/dv of c v^m e^{-v/sigma^2} = c m v^{m-1} e - (c/sigma^2) v^m e.
std::vector<RadialTerm> differentiate(const std::vector<RadialTerm>& in) {
  std::vector<RadialTerm> out;
  out.reserve(2 * in.size());
  for (const auto& t : in) {
    if (t.power != 0.0)
      out.push_back({t.coeff * t.power, t.power - 1.0, t.sigma});
    out.push_back({-t.coeff / (t.sigma * t.sigma), t.power, t.sigma});
  }
  return out;
}

double relative_or_absolute(Complex formula, Complex oracle) {
  const double diff = std::abs(formula - oracle);
  return std::abs(formula) > 1.0 ? diff / std::abs(formula) : diff;
}

double max_sigma_of(const TestFunction& phi) {
  double s = 1.0;
  for (const auto& t : phi.terms()) s = std::max(s, t.sigma);
  return s;
}

Complex gamma_product(const Signature& sig) {
  GammaQuotient gq;
  for (int i = 0; i < sig.n(); ++i)
    gq.numerator_args.push_back((sig.gamma_at(i) + 1.0) / 2.0);
  return gq.evaluate();
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::vector<double> pole_locations(const Signature& sig, double reach) {
  std::vector<double> poles;
  const double half = sig.total_weight() / 2.0;
  for (int k = 1; k <= static_cast<int>(reach) + 2; ++k)
    poles.push_back(-static_cast<double>(k));
  for (int k = 0; -half - k >= -reach - 2.0; ++k) poles.push_back(-half - k);
  return poles;
}

}  // namespace

PairingResult pair_delta(const Signature& sig, DeltaVariant variant, int k,
                         const TestFunction& phi, double tol) {
  if (k < 0) throw DomainError("pair_delta: k < 0");
  const PsiProfile prof = psi_profile(phi, sig);
  const double alpha = sig.p_weight() / 2.0;
  const double beta = sig.q_weight() / 2.0;

  // Assemble the outer integrand sum_j e_j u^{nu_j - 1} e^{-2u/sigma^2}:
  // inner factor v^{B+beta-1} e^{-v/sigma^2} differentiated k times, taken at
  // v = u against u^{A+alpha-1} e^{-u/sigma^2}.  OuterS swaps the roles and
  // carries (-1)^k.
  std::vector<RadialTerm> integrand;
  for (const auto& pt : prof.terms) {
    const double inner_pow = (variant == DeltaVariant::OuterR)
                                 ? pt.pow_v + beta - 1.0
                                 : pt.pow_u + alpha - 1.0;
    const double outer_pow = (variant == DeltaVariant::OuterR)
                                 ? pt.pow_u + alpha - 1.0
                                 : pt.pow_v + beta - 1.0;
    std::vector<RadialTerm> inner{{pt.coeff, inner_pow, pt.sigma}};
    for (int j = 0; j < k; ++j) inner = differentiate(inner);
    for (const auto& t : inner) {
      // nu - 1 = outer_pow + t.power; combined decay e^{-2u/sigma^2}
      integrand.push_back({0.5 * t.coeff, outer_pow + t.power, t.sigma});
    }
  }
  const Complex sign = (variant == DeltaVariant::OuterS && (k % 2) == 1)
                           ? Complex(-1.0, 0.0)
                           : Complex(1.0, 0.0);

  PairingResult result;
  const bool convergent = k + kIntTol < (sig.total_weight() - 2.0) / 2.0;
  if (convergent) {
    auto f = [&](double u) -> Complex {
      Complex sum = 0.0;
      for (const auto& t : integrand)
        sum += t.coeff * std::pow(u, t.power) *
               std::exp(-2.0 * u / (t.sigma * t.sigma));
      return sum;
    };
    const double s = max_sigma_of(phi);
    QuadResult qr = integrate_semiaxis(f, tol, 0.5 * s * s);
    result.value = sign * qr.value;
    result.abs_error_estimate = qr.abs_error;
  } else {
    Complex total = 0.0;
    double err = 0.0;
    for (const auto& t : integrand) {
      const double mu = t.power + 1.0;
      const double sig2 = t.sigma * t.sigma;
      const int order =
          std::max(0, static_cast<int>(std::ceil(-mu + kIntTol))) + 5;
      auto F = [sig2](double u) -> Complex {
        return std::exp(-2.0 * u / sig2);
      };
      QuadResult qr = finite_part_semiaxis(F, mu, order, tol,
                                           /*allow_integer_pole=*/true);
      total += t.coeff * qr.value;
      err += std::abs(t.coeff) * qr.abs_error;
    }
    result.value = sign * total;
    result.abs_error_estimate = err;
  }
  result.converged = result.abs_error_estimate <= tol;
  return result;
}

Complex pair_delta_origin(const Signature& sig, int k,
                          const TestFunction& phi) {
  return apply_LB_pow(phi, sig, k).at_origin();
}

PairingResult pair_plambda_direct(const Signature& sig, Complex lambda,
                                  const TestFunction& phi, double tol) {
  if (!(lambda.real() > -1.0))
    throw DomainError("pair_plambda_direct: requires Re(lambda) > -1");
  const PsiProfile prof = psi_profile(phi, sig);
  const double alpha = sig.p_weight() / 2.0;
  const double beta = sig.q_weight() / 2.0;

  // With v = u t the radial u-integral of each profile term is a Gamma
  // function, leaving one smooth Jacobi-weighted integral per term:
  //   1/2 c Gamma(s) sigma^{2s} int_0^1 (1-t)^lambda t^{B+beta-1} (1+t)^{-s} dt
  // where s = lambda + alpha + beta + A + B.
  PairingResult result;
  const double nterms = static_cast<double>(prof.terms.size());
  for (const auto& pt : prof.terms) {
    const Complex s = lambda + alpha + beta +
                      static_cast<double>(pt.pow_u + pt.pow_v);
    const Complex pref = 0.5 * pt.coeff * gammafn(s) *
                         std::exp(s * 2.0 * std::log(pt.sigma));
    auto g = [&](double t) -> Complex {
      return std::exp(-s * std::log1p(t));
    };
    const double inner_tol =
        tol / (nterms * std::max(1.0, std::abs(pref)));
    QuadResult inner =
        integrate_jacobi_endpoint(g, lambda, pt.pow_v + beta, inner_tol);
    result.value += pref * inner.value;
    result.abs_error_estimate += std::abs(pref) * inner.abs_error;
  }
  result.converged = result.abs_error_estimate <= tol;
  return result;
}

PairingResult pair_plambda_continued(const Signature& sig, Complex lambda,
                                     const TestFunction& phi, double tol,
                                     int forced_k) {
  const double half = sig.total_weight() / 2.0;
  for (double p : pole_locations(sig, std::abs(lambda.real()) + half)) {
    if (std::abs(lambda - p) < kPoleGuard)
      throw PoleProximityError("pair_plambda_continued: lambda within guard of pole at " +
                               std::to_string(p));
  }
  int k = forced_k;
  if (k < 0) {
    k = 0;
    while (lambda.real() + k <= -0.5) ++k;
  }
  const TestFunction phi_k = apply_LB_pow(phi, sig, k);
  PairingResult shifted =
      pair_plambda_direct(sig, lambda + static_cast<double>(k), phi_k, tol);
  Complex denom = 1.0;
  for (int j = 1; j <= k; ++j)
    denom *= 4.0 * (lambda + static_cast<double>(j)) *
             (lambda + half + static_cast<double>(j - 1));
  PairingResult result;
  result.value = shifted.value / denom;
  result.abs_error_estimate = shifted.abs_error_estimate / std::abs(denom);
  result.converged = shifted.converged;
  return result;
}

Complex richardson_limit(const std::function<Complex(double)>& f, double base,
                         int points, double* err_estimate) {
  if (points < 2) throw DomainError("richardson_limit: need >= 2 points");
  std::vector<double> eps(points);
  std::vector<Complex> val(points);
  for (int i = 0; i < points; ++i) {
    eps[i] = base / std::pow(2.0, i);
    val[i] = f(eps[i]);
  }
  // Neville extrapolation to eps = 0.
  Complex prev = val[points - 1];
  for (int level = 1; level < points; ++level) {
    for (int i = points - 1; i >= level; --i) {
      val[i] = val[i] + (val[i] - val[i - 1]) * eps[i] /
                            (eps[i - level] - eps[i]);
    }
    if (level == points - 1 && err_estimate)
      *err_estimate = std::abs(val[points - 1] - prev);
    prev = val[points - 1];
  }
  return val[points - 1];
}

namespace {

Complex simple_pole_oracle(const Signature& sig, double pole,
                           const TestFunction& phi, double tol,
                           double* err = nullptr) {
  // eps/2 (F(pole+eps) - F(pole-eps)) = c_{-1} + O(eps^2): the symmetric
  // difference cancels every even term, so extrapolating in eps^2 converges
  // despite the neighbouring poles only 1/2 away.  The smallest sample stays
  // outside the continuation pole guard.
  auto g = [&](double eps2) -> Complex {
    const double eps = std::sqrt(eps2);
    const Complex plus =
        pair_plambda_continued(sig, Complex(pole + eps, 0.0), phi, tol).value;
    const Complex minus =
        pair_plambda_continued(sig, Complex(pole - eps, 0.0), phi, tol).value;
    return 0.5 * eps * (plus - minus);
  };
  return richardson_limit(g, 0.01, 4, err);
}

}  // namespace

ResidueReport residue_first_series(const Signature& sig, int k,
                                   const TestFunction& phi, double tol) {
  if (k < 1) throw DomainError("residue_first_series: k >= 1 required");
  ResidueReport rep;
  rep.pole = Complex(-static_cast<double>(k), 0.0);
  const double tot = sig.total_weight();
  if (is_integer(tot) && classify_parity(tot).cls == Parity::EvenInteger &&
      k + kIntTol >= tot / 2.0) {
    // Collision with the second series: the double-pole handler owns it.
    rep.theorem = TheoremTag::UnsupportedCase;
    return rep;
  }
  rep.theorem = TheoremTag::T1;
  const PairingResult delta =
      pair_delta(sig, DeltaVariant::OuterR, k - 1, phi, tol);
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^{k-1}
  rep.formula_value = sign / factorial(k - 1) * delta.value;
  rep.oracle_value = simple_pole_oracle(sig, -static_cast<double>(k), phi, tol);
  rep.discrepancy = relative_or_absolute(rep.formula_value, rep.oracle_value);
  return rep;
}

ResidueReport residue_second_series(const Signature& sig, int k,
                                    const TestFunction& phi, double tol) {
  if (k < 0) throw DomainError("residue_second_series: k >= 0 required");
  ResidueReport rep;
  const double half = sig.total_weight() / 2.0;
  rep.pole = Complex(-half - k, 0.0);
  const Parity tot_cls = classify_parity(sig.total_weight()).cls;
  if (tot_cls == Parity::EvenInteger) {
    // These poles collide with the first series; the double-pole handler owns them.
    rep.theorem = TheoremTag::UnsupportedCase;
    return rep;
  }
  const Parity p_cls = classify_parity(sig.p_weight()).cls;
  const Parity q_cls = classify_parity(sig.q_weight()).cls;
  if (p_cls == Parity::EvenInteger) {
    rep.theorem = TheoremTag::Regular;
    rep.formula_value = 0.0;
    rep.oracle_value = simple_pole_oracle(sig, -half - k, phi, tol);
    rep.discrepancy = relative_or_absolute(rep.formula_value, rep.oracle_value);
    return rep;
  }
  if (q_cls != Parity::EvenInteger) {
    rep.theorem = TheoremTag::UnsupportedCase;
    return rep;
  }
  rep.theorem = TheoremTag::T2;
  const int q_half = static_cast<int>(std::round(sig.q_weight())) / 2;
  const double sign = (q_half % 2 == 0) ? 1.0 : -1.0;
  GammaQuotient gq;
  for (int i = 0; i < sig.n(); ++i)
    gq.numerator_args.push_back((sig.gamma_at(i) + 1.0) / 2.0);
  gq.denominator_args.push_back(half + k);
  gq.prefactor = sign / (std::ldexp(1.0, sig.n() + 2 * k) * factorial(k));
  rep.formula_value = gq.evaluate() * pair_delta_origin(sig, k, phi);
  rep.oracle_value = simple_pole_oracle(sig, -half - k, phi, tol);
  rep.discrepancy = relative_or_absolute(rep.formula_value, rep.oracle_value);
  return rep;
}

LaurentExpansion laurent_circle_fit(
    Complex center, double radius, int M,
    const std::function<Complex(Complex)>& evaluator) {
  if (M < 6) throw DomainError("laurent_circle_fit: M >= 6 required");
  if (!(radius > 0.0)) throw DomainError("laurent_circle_fit: radius <= 0");
  std::vector<Complex> samples(M);
  for (int m = 0; m < M; ++m) {
    const double th = 2.0 * M_PI * m / M;
    samples[m] = evaluator(center + radius * Complex(std::cos(th), std::sin(th)));
  }
  // Raw DFT modes d_j = (1/M) sum f_m e^{-i j theta_m}; mode j corresponds to
  // Laurent order j (mod M), with j = M-2, M-1 read as -2, -1.
  std::vector<Complex> modes(M);
  for (int j = 0; j < M; ++j) {
    Complex sum = 0.0;
    for (int m = 0; m < M; ++m) {
      const double th = 2.0 * M_PI * j * m / M;
      sum += samples[m] * Complex(std::cos(th), -std::sin(th));
    }
    modes[j] = sum / static_cast<double>(M);
  }
  const Complex c_m2 = modes[M - 2] * (radius * radius);
  const Complex c_m1 = modes[M - 1] * radius;
  const Complex c_0 = modes[0];

  const double leading =
      std::max({std::abs(modes[M - 2]), std::abs(modes[M - 1]),
                std::abs(modes[0])});
  double trailing = 0.0;
  for (int j = 3; j <= M - 3; ++j) trailing += std::abs(modes[j]);
  if (leading > 0.0 && trailing > 0.1 * leading)
    throw IllConditionedError("laurent_circle_fit: trailing-mode energy " +
                              std::to_string(trailing / leading));

  LaurentExpansion exp;
  exp.pole = center;
  exp.c_minus2 = c_m2;
  exp.c_minus1 = c_m1;
  exp.c_0 = c_0;
  // Aliasing estimate from the decay of the high analytic modes.
  double err = 0.0;
  for (int j = 3; j <= M - 3; ++j)
    err += std::abs(modes[j]) * std::pow(radius, 2.0);
  exp.coeff_error = err + 1e-12 * leading;
  const double floor = 10.0 * exp.coeff_error;
  if (std::abs(c_m2) > std::max(floor, 1e-10))
    exp.order = 2;
  else if (std::abs(c_m1) > std::max(floor, 1e-10))
    exp.order = 1;
  else
    exp.order = 0;
  return exp;
}

LaurentReport laurent_double_pole(const Signature& sig, int k,
                                  const TestFunction& phi, double tol) {
  if (k < 0) throw DomainError("laurent_double_pole: k >= 0 required");
  LaurentReport rep;
  const double tot = sig.total_weight();
  const double half = tot / 2.0;
  const Complex pole(-half - k, 0.0);
  rep.formula.pole = pole;
  rep.fitted.pole = pole;
  rep.residue.pole = pole;
  if (classify_parity(tot).cls != Parity::EvenInteger) {
    rep.theorem = TheoremTag::UnsupportedCase;
    rep.residue.theorem = TheoremTag::UnsupportedCase;
    return rep;
  }
  const Parity p_cls = classify_parity(sig.p_weight()).cls;
  const Parity q_cls = classify_parity(sig.q_weight()).cls;
  const bool both_even =
      p_cls == Parity::EvenInteger && q_cls == Parity::EvenInteger;
  const bool both_odd =
      p_cls == Parity::OddInteger && q_cls == Parity::OddInteger;
  const bool both_frac =
      p_cls == Parity::NonInteger && q_cls == Parity::NonInteger;
  if (!(both_even || both_odd || both_frac)) {
    rep.theorem = TheoremTag::UnsupportedCase;
    rep.residue.theorem = TheoremTag::UnsupportedCase;
    return rep;
  }
  rep.theorem = TheoremTag::T3;
  rep.residue.theorem = TheoremTag::T3;

  // Base expansion at lambda = -h for phi_k = L_B^k phi, then exact transport
  // down k Green steps F(lambda) = F'(lambda+1) / [4(lambda+1)(lambda+h)].
  // The constant term of Phi(lambda,0) at -h covers all three parity branches:
  //   alpha0 = phi_k(0) prodGamma (-1)^{h-1}
  //            [sin(pi a)(psi(h)-psi(a)) - pi cos(pi a)] / (2^n pi Gamma(h)),
  // a = (p+|gamma'|)/2; for even a only the cosine survives, for half-integer
  // a only the digamma difference does.
  const int half_int = static_cast<int>(std::round(half));
  const double a = sig.p_weight() / 2.0;
  const double sin_pa = std::sin(M_PI * a);
  const double cos_pa = std::cos(M_PI * a);
  const double sign_h = (half_int % 2 == 1) ? 1.0 : -1.0;  // (-1)^{h-1}
  const Complex gprod = gamma_product(sig);
  const double gamma_h = gammafn(half);
  const double two_n = std::ldexp(1.0, -sig.n());

  const TestFunction phi_k = apply_LB_pow(phi, sig, k);
  const Complex origin_k = phi_k.at_origin();
  const PairingResult delta_term =
      pair_delta(sig, DeltaVariant::OuterR, half_int - 1, phi_k, tol);

  const Complex alpha0 = origin_k * gprod * sign_h * two_n *
                         (sin_pa * (digamma(half) - digamma(a)) -
                          M_PI * cos_pa) /
                         (M_PI * gamma_h);
  Complex c2 = sign_h * sin_pa * gprod * two_n / (M_PI * gamma_h) * origin_k;
  Complex c1 = sign_h * delta_term.value / gamma_h + alpha0;
  double cerr = delta_term.abs_error_estimate / gamma_h;
  for (int j = 1; j <= k; ++j) {
    const double d = 4.0 * j * (half + j - 1.0);   // D(-h-j)
    const double dp = -4.0 * (half + 2.0 * j - 1.0);  // D'(-h-j)
    c1 = c1 / d - c2 * dp / (d * d);
    c2 = c2 / d;
    cerr /= d;
  }
  rep.formula.c_minus2 = c2;
  rep.formula.c_minus1 = c1;
  rep.formula.order = both_even ? 1 : 2;
  rep.formula.coeff_error = cerr;

  // Oracle: sample the continued pairing on a circle and invert.
  auto evaluator = [&](Complex lambda) -> Complex {
    return pair_plambda_continued(sig, lambda, phi, tol).value;
  };
  double rho = 0.1;
  try {
    rep.fitted = laurent_circle_fit(pole, rho, 8, evaluator);
  } catch (const IllConditionedError&) {
    rho *= 0.5;
    rep.fitted = laurent_circle_fit(pole, rho, 8, evaluator);
  }

  rep.residue.formula_value = rep.formula.c_minus1;
  rep.residue.oracle_value = rep.fitted.c_minus1;
  rep.residue.discrepancy =
      relative_or_absolute(rep.residue.formula_value, rep.residue.oracle_value);
  return rep;
}

}  // namespace wdist
