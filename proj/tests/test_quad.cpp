#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wdist/quad.hpp"
#include "wdist/specfun.hpp"

using namespace wdist;

TEST_CASE("integrate_interval on smooth integrands") {
  auto cube = [](double x) { return Complex(x * x * x, 0.0); };
  QuadResult r = integrate_interval(cube, 0.0, 2.0, 1e-12);
  CHECK(r.value.real() == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(r.abs_error <= 1e-10);

  auto osc = [](double x) { return Complex(std::cos(10.0 * x), std::sin(x)); };
  QuadResult o = integrate_interval(osc, 0.0, M_PI, 1e-12);
  CHECK(o.value.real() == doctest::Approx(std::sin(10.0 * M_PI) / 10.0)
                              .epsilon(1e-10));
  CHECK(o.value.imag() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gauss_jacobi01 reproduces Beta moments") {
  // The n-point rule integrates (1-t)^a t^b * poly(deg <= 2n-1) exactly.
  for (auto [a, b] : {std::pair{0.0, 0.0}, {1.5, 0.5}, {-0.3, 2.0}}) {
    const Rule01& rule = gauss_jacobi01(12, a, b);
    REQUIRE(rule.nodes.size() == 12);
    double mass = 0.0, first = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      mass += rule.weights[i];
      first += rule.weights[i] * rule.nodes[i];
    }
    const double beta0 =
        gammafn(a + 1.0) * gammafn(b + 1.0) / gammafn(a + b + 2.0);
    const double beta1 =
        gammafn(a + 1.0) * gammafn(b + 2.0) / gammafn(a + b + 3.0);
    CHECK(mass == doctest::Approx(beta0).epsilon(1e-13));
    CHECK(first == doctest::Approx(beta1).epsilon(1e-13));
  }
}

TEST_CASE("integrate_semiaxis on Gaussian-decay integrands") {
  auto g = [](double s) { return Complex(std::exp(-s * s), 0.0); };
  QuadResult r = integrate_semiaxis(g, 1e-12);
  CHECK(r.value.real() ==
        doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-12));

  auto g2 = [](double s) { return Complex(s * s * std::exp(-s * s), 0.0); };
  QuadResult r2 = integrate_semiaxis(g2, 1e-12);
  CHECK(r2.value.real() ==
        doctest::Approx(std::sqrt(M_PI) / 4.0).epsilon(1e-12));

  // wide profile handled through the scale hint
  auto wide = [](double s) {
    return Complex(std::exp(-s * s / 25.0), 0.0);
  };
  QuadResult r3 = integrate_semiaxis(wide, 1e-11, 5.0);
  CHECK(r3.value.real() ==
        doctest::Approx(5.0 * std::sqrt(M_PI) / 2.0).epsilon(1e-11));
}

TEST_CASE("integrate_jacobi_endpoint reproduces Beta values") {
  auto one = [](double) { return Complex(1.0, 0.0); };
  // int_0^1 (1-t)^{3/2} t^{1/2} dt = B(5/2, 3/2)
  QuadResult r = integrate_jacobi_endpoint(one, Complex(1.5, 0.0), 1.5, 1e-12);
  CHECK(r.value.real() ==
        doctest::Approx(0.1963495408493620774).epsilon(1e-12));

  std::mt19937 rng(31);
  std::uniform_real_distribution<double> re(-0.9, 3.0);
  std::uniform_real_distribution<double> im(-2.0, 2.0);
  std::uniform_real_distribution<double> be(0.2, 4.0);
  for (int i = 0; i < 200; ++i) {
    const Complex lam(re(rng), im(rng));
    const double beta_exp = be(rng);
    const Complex expect = gammafn(lam + 1.0) * gammafn(Complex(beta_exp)) /
                           gammafn(lam + beta_exp + 1.0);
    QuadResult q = integrate_jacobi_endpoint(one, lam, beta_exp, 1e-12);
    CHECK(std::abs(q.value - expect) <=
          1e-10 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("finite_part_semiaxis matches convergent integrals") {
  auto gauss = [](double r) { return Complex(std::exp(-r * r), 0.0); };
  // int_0^inf e^{-r^2} r^{mu-1} dr = Gamma(mu/2)/2
  QuadResult a = finite_part_semiaxis(gauss, 0.5, 2, 1e-11);
  CHECK(a.value.real() ==
        doctest::Approx(0.5 * gammafn(0.25)).epsilon(1e-10));
  QuadResult b = finite_part_semiaxis(gauss, 3.0, 2, 1e-11);
  CHECK(b.value.real() ==
        doctest::Approx(0.5 * gammafn(1.5)).epsilon(1e-10));
}

TEST_CASE("finite_part_semiaxis continues through negative mu") {
  auto gauss = [](double r) { return Complex(std::exp(-r * r), 0.0); };
  // Gamma(-0.25)/2 and Gamma(-1.25)/2
  QuadResult a = finite_part_semiaxis(gauss, -0.5, 4, 1e-11);
  CHECK(a.value.real() ==
        doctest::Approx(-2.4508334049303552903).epsilon(1e-9));
  QuadResult b = finite_part_semiaxis(gauss, -2.5, 6, 1e-11);
  CHECK(b.value.real() ==
        doctest::Approx(1.9606667239442842322).epsilon(1e-9));
}

TEST_CASE("finite_part_semiaxis is invariant under the split point") {
  auto f = [](double r) { return Complex((1.0 + r) * std::exp(-r), 0.0); };
  QuadResult a = finite_part_semiaxis(f, -1.5, 4, 1e-11, false, 1.0);
  QuadResult b = finite_part_semiaxis(f, -1.5, 4, 1e-11, false, 2.5);
  CHECK(std::abs(a.value - b.value) < 1e-9);
}

TEST_CASE("finite_part_semiaxis at integer poles") {
  auto f = [](double r) { return Complex(std::exp(-2.0 * r), 0.0); };
  CHECK_THROWS_AS(finite_part_semiaxis(f, 0.0, 3, 1e-11), PoleHitError);
  // Constant term of 2^{-mu} Gamma(mu) at mu = 0 (split at r = 1):
  // -euler_gamma - log 2.
  QuadResult r = finite_part_semiaxis(f, 0.0, 3, 1e-11, true);
  CHECK(r.value.real() ==
        doctest::Approx(-1.27036284546147817).epsilon(1e-9));
}

TEST_CASE("orthant_oracle over the full orthant: Gaussian closed form") {
  // int_{x>0} e^{-|x|^2} x^gamma dx = prod Gamma((g_i+1)/2)/2
  Signature sig(2, 2, {0.5, 0.5}, {1.0, 1.0});
  TestFunction phi = TestFunction::gaussian(4);
  double expect = 1.0;
  for (double g : {0.5, 0.5, 1.0, 1.0}) expect *= 0.5 * gammafn((g + 1.0) / 2.0);
  QuadResult r = orthant_oracle(phi, sig, Region::All, std::nullopt, 1e-10);
  CHECK(r.value.real() == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("orthant_oracle over the positive cone matches reference values") {
  Signature sig(2, 2, {1.0, 1.0}, {1.0, 1.0});
  TestFunction phi = TestFunction::gaussian(4);
  QuadResult r1 =
      orthant_oracle(phi, sig, Region::ConePositive, Complex(1.0, 0.0), 1e-10);
  CHECK(r1.value.real() == doctest::Approx(3.0 / 64.0).epsilon(1e-8));
  QuadResult r0 =
      orthant_oracle(phi, sig, Region::ConePositive, Complex(0.0, 0.0), 1e-10);
  CHECK(r0.value.real() == doctest::Approx(1.0 / 32.0).epsilon(1e-8));
  QuadResult rh = orthant_oracle(phi, sig, Region::ConePositive,
                                 Complex(0.5, 0.0), 1e-10);
  CHECK(rh.value.real() ==
        doctest::Approx(0.034618239275498359908).epsilon(1e-8));
}
