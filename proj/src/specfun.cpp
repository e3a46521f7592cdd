#include "wdist/specfun.hpp"

#include <cmath>

namespace wdist {

namespace {

bool near_nonpositive_integer(double x) {
  return x <= kIntTol && is_integer(x);
}

}  // namespace

double gammafn(double x) {
  if (near_nonpositive_integer(x))
    throw PoleError("gammafn: pole at non-positive integer x=" +
                    std::to_string(x));
  return std::tgamma(x);
}

Complex gammafn(Complex z) {
  if (std::abs(z.imag()) <= kIntTol && near_nonpositive_integer(z.real()))
    throw PoleError("gammafn: pole at non-positive integer z=" +
                    std::to_string(z.real()));
  // Lanczos, g = 7, n = 9.
  static const double kLanczos[] = {
      0.99999999999980993,      676.5203681218851,    -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,  12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) = pi / (sin(pi z) Gamma(1-z)).
    return M_PI / (std::sin(M_PI * z) * gammafn(1.0 - z));
  }
  const Complex zm = z - 1.0;
  Complex x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (zm + static_cast<double>(i));
  const Complex t = zm + 7.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, zm + 0.5) * std::exp(-t) * x;
}

double log_abs_gamma(double x) {
  if (near_nonpositive_integer(x))
    throw PoleError("log_abs_gamma: pole at non-positive integer x=" +
                    std::to_string(x));
  return std::lgamma(x);
}

int gamma_sign(double x) {
  if (x > 0.0) return 1;
  // Gamma alternates sign between consecutive negative integers:
  // negative on (-1,0), positive on (-2,-1), ...
  const long long f = static_cast<long long>(std::floor(x));
  return (f % 2 == 0) ? 1 : -1;
}

double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: requires x > 0");
  double result = 0.0;
  // Shift into the asymptotic regime.
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  // psi(x) ~ ln x - 1/(2x) - sum B_{2n}/(2n x^{2n})
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  static const double coeff[] = {
      1.0 / 12.0,     -1.0 / 120.0,    1.0 / 252.0,      -1.0 / 240.0,
      1.0 / 132.0,    -691.0 / 32760.0, 1.0 / 12.0};
  double power = inv2;
  for (double c : coeff) {
    series += c * power;
    power *= inv2;
  }
  result += std::log(x) - 0.5 * inv - series;
  return result;
}

double reflection_check(double x) {
  if (is_integer(x)) throw DomainError("reflection_check: integer x");
  return gammafn(1.0 - x) * gammafn(x) * std::sin(M_PI * x) / M_PI;
}

double sphere_measure(int dim, std::span<const double> gamma_part) {
  if (dim < 1) throw DomainError("sphere_measure: dim < 1");
  if (static_cast<int>(gamma_part.size()) != dim)
    throw DomainError("sphere_measure: gamma_part size mismatch");
  GammaQuotient gq;
  double abs_g = 0.0;
  for (double g : gamma_part) {
    gq.numerator_args.push_back((g + 1.0) / 2.0);
    abs_g += g;
  }
  gq.denominator_args.push_back((dim + abs_g) / 2.0);
  gq.prefactor = std::ldexp(1.0, -(dim - 1));
  return gq.evaluate().real();
}

double dirichlet_monomial(int dim, std::span<const int> exponents,
                          std::span<const double> gamma_part) {
  if (dim < 1) throw DomainError("dirichlet_monomial: dim < 1");
  if (static_cast<int>(exponents.size()) != dim ||
      static_cast<int>(gamma_part.size()) != dim)
    throw DomainError("dirichlet_monomial: size mismatch");
  GammaQuotient gq;
  double abs_g = 0.0;
  long long abs_a = 0;
  for (int i = 0; i < dim; ++i) {
    if (exponents[i] < 0)
      throw DomainError("dirichlet_monomial: negative exponent");
    gq.numerator_args.push_back(exponents[i] + (gamma_part[i] + 1.0) / 2.0);
    abs_g += gamma_part[i];
    abs_a += exponents[i];
  }
  gq.denominator_args.push_back((dim + 2.0 * abs_a + abs_g) / 2.0);
  gq.prefactor = std::ldexp(1.0, -(dim - 1));
  return gq.evaluate().real();
}

Complex GammaQuotient::evaluate() const {
  double log_sum = 0.0;
  int sign = 1;
  for (double x : numerator_args) {
    log_sum += log_abs_gamma(x);  // throws PoleError at numerator poles
    sign *= gamma_sign(x);
  }
  for (double x : denominator_args) {
    if (near_nonpositive_integer(x)) return Complex(0.0, 0.0);
    log_sum -= std::lgamma(x);
    sign *= gamma_sign(x);
  }
  return prefactor * (sign * std::exp(log_sum));
}

}  // namespace wdist
