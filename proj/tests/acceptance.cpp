// Acceptance gate: ten numbered criteria, one pass/fail line each.
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wdist/dist.hpp"
#include "wdist/quad.hpp"
#include "wdist/specfun.hpp"

using namespace wdist;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const char* what, bool ok, double seconds,
            double budget_s, const std::string& detail = "") {
  const bool in_budget = seconds <= budget_s;
  const bool pass = ok && in_budget;
  if (!pass) ++g_failures;
  std::printf("[%s] %2d. %s (%.1fs/%.0fs)%s%s\n", pass ? "PASS" : "FAIL", idx,
              what, seconds, budget_s, detail.empty() ? "" : " -- ",
              detail.c_str());
  std::fflush(stdout);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

double rel_diff(Complex a, Complex b) {
  return std::abs(a - b) / std::max(1e-30, std::abs(b));
}

// Direct quarter-sphere quadrature of prod omega_i^{2 a_i + gamma_i} in
// angular coordinates, independent of the Gamma closed form.
double sphere_monomial_quadrature(const std::vector<int>& a,
                                  const std::vector<double>& g) {
  const auto pw = [](double c, double e) { return std::pow(c, e); };
  if (a.size() == 2) {
    auto f = [&](double t) {
      return Complex(pw(std::cos(t), 2 * a[0] + g[0]) *
                         pw(std::sin(t), 2 * a[1] + g[1]),
                     0.0);
    };
    return integrate_interval(f, 0.0, M_PI / 2.0, 1e-12).value.real();
  }
  auto outer = [&](double t) {
    auto inner = [&](double ph) {
      return Complex(pw(std::cos(t), 2 * a[0] + g[0]) *
                         pw(std::sin(t) * std::cos(ph), 2 * a[1] + g[1]) *
                         pw(std::sin(t) * std::sin(ph), 2 * a[2] + g[2]) *
                         std::sin(t),
                     0.0);
    };
    return integrate_interval(inner, 0.0, M_PI / 2.0, 1e-12).value;
  };
  return integrate_interval(outer, 0.0, M_PI / 2.0, 1e-11).value.real();
}

TestFunction random_testfn(std::mt19937& rng, int axes) {
  std::uniform_int_distribution<int> expo(0, 2);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_real_distribution<double> width(0.7, 1.4);
  std::vector<Term> terms;
  for (int t = 0; t < 2; ++t) {
    Term term;
    term.coeff = Complex(coeff(rng), 0.0);
    for (int i = 0; i < axes; ++i) term.exponents.push_back(expo(rng));
    term.sigma = width(rng);
    terms.push_back(std::move(term));
  }
  return TestFunction(axes, std::move(terms));
}

void criterion_1() {
  Timer timer;
  bool ok = true;
  std::string detail;
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> xs(-10.0, 10.0);
  int tested = 0;
  while (tested < 1000) {
    const double x = xs(rng);
    if (std::abs(x - std::round(x)) < 1e-3) continue;
    if (std::abs(reflection_check(x) - 1.0) > 1e-12) {
      ok = false;
      detail = "reflection identity broke at x=" + std::to_string(x);
      break;
    }
    ++tested;
  }
  std::uniform_int_distribution<int> dims(2, 3);
  std::uniform_int_distribution<int> as(0, 3);
  std::uniform_real_distribution<double> gs(0.2, 3.0);
  for (int i = 0; ok && i < 50; ++i) {
    const int dim = dims(rng);
    std::vector<int> a(dim);
    std::vector<double> g(dim);
    for (int j = 0; j < dim; ++j) {
      a[j] = as(rng);
      g[j] = gs(rng);
    }
    const double closed = dirichlet_monomial(dim, a, g);
    const double direct = sphere_monomial_quadrature(a, g);
    if (std::abs(closed - direct) > 1e-8 * std::abs(direct)) {
      ok = false;
      detail = "dirichlet_monomial off by " +
               std::to_string(std::abs(closed - direct) / std::abs(direct));
    }
  }
  report(1, "special-function layer vs quadrature", ok, timer.seconds(), 10.0,
         detail);
}

void criterion_2() {
  Timer timer;
  bool ok = true;
  std::mt19937 rng(202);
  std::uniform_real_distribution<double> pts(0.3, 1.5);
  std::uniform_real_distribution<double> gam(0.3, 2.5);
  const double h = 1e-4;
  for (int inst = 0; ok && inst < 20; ++inst) {
    TestFunction phi = random_testfn(rng, 4);
    const int axis = inst % 4;
    const double gamma_i = gam(rng);
    TestFunction bphi = apply_bessel(phi, axis, gamma_i);
    Signature sig(2, 2, {gam(rng), gam(rng)}, {gam(rng), gam(rng)});
    TestFunction lphi = apply_LB(phi, sig);
    for (int t = 0; ok && t < 20; ++t) {
      std::vector<double> x{pts(rng), pts(rng), pts(rng), pts(rng)};
      // single-axis operator
      {
        std::vector<double> xp = x, xm = x;
        xp[axis] += h;
        xm[axis] -= h;
        const Complex d2 =
            (phi.evaluate(xp) - 2.0 * phi.evaluate(x) + phi.evaluate(xm)) /
            (h * h);
        const Complex d1 = (phi.evaluate(xp) - phi.evaluate(xm)) / (2.0 * h);
        ok = std::abs(bphi.evaluate(x) - (d2 + gamma_i / x[axis] * d1)) < 1e-6;
      }
      // full signed sum
      if (ok) {
        Complex fd = 0.0;
        for (int i = 0; i < 4; ++i) {
          std::vector<double> xp = x, xm = x;
          xp[i] += h;
          xm[i] -= h;
          const Complex d2 =
              (phi.evaluate(xp) - 2.0 * phi.evaluate(x) + phi.evaluate(xm)) /
              (h * h);
          const Complex d1 = (phi.evaluate(xp) - phi.evaluate(xm)) / (2.0 * h);
          const Complex b = d2 + sig.gamma_at(i) / x[i] * d1;
          fd += (i < 2) ? b : -b;
        }
        ok = std::abs(lphi.evaluate(x) - fd) < 1e-6;
      }
    }
  }
  report(2, "Bessel algebra vs finite differences", ok, timer.seconds(), 10.0);
}

void criterion_3() {
  Timer timer;
  bool ok = true;
  std::string detail;
  Signature sig(2, 2, {0.5, 0.5}, {1.0, 1.0});
  const double half = sig.total_weight() / 2.0;
  std::mt19937 rng(303);
  std::uniform_real_distribution<double> pos(0.4, 1.6);
  auto P = [](const std::vector<double>& x) {
    return x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3];
  };
  const double h = 1e-4;
  for (double lambda : {1.2, 1.5, 2.0, 2.7, 3.2}) {
    int done = 0;
    while (ok && done < 50) {
      std::vector<double> x{pos(rng), pos(rng), pos(rng), pos(rng)};
      if (P(x) < 0.5) continue;  // stay well inside the cone
      ++done;
      auto f = [&](const std::vector<double>& y) {
        return std::pow(P(y), lambda + 1.0);
      };
      double lb = 0.0;
      for (int i = 0; i < 4; ++i) {
        std::vector<double> xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double d2 = (f(xp) - 2.0 * f(x) + f(xm)) / (h * h);
        const double d1 = (f(xp) - f(xm)) / (2.0 * h);
        const double b = d2 + sig.gamma_at(i) / x[i] * d1;
        lb += (i < 2) ? b : -b;
      }
      const double rhs =
          4.0 * (lambda + 1.0) * (lambda + half) * std::pow(P(x), lambda);
      if (std::abs(lb - rhs) > 1e-5 * std::abs(rhs)) {
        ok = false;
        detail = "identity off by " +
                 std::to_string(std::abs(lb - rhs) / std::abs(rhs));
      }
    }
  }
  report(3, "Green operator identity on P^lambda", ok, timer.seconds(), 5.0,
         detail);
}

void criterion_4() {
  Timer timer;
  bool ok = true;
  std::string detail;
  const Signature sigs[] = {Signature(2, 2, {1.0, 1.0}, {1.0, 1.0}),
                            Signature(2, 2, {0.5, 0.5}, {1.0, 1.0})};
  const Complex lambdas[] = {{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {1.0, 1.0}};
  for (const Signature& sig : sigs) {
    const TestFunction phis[] = {
        TestFunction::gaussian(4),
        TestFunction::monomial_gaussian({1, 0, 0, 0}),
        TestFunction::monomial_gaussian({0, 0, 1, 1}, 1.2)};
    for (const TestFunction& phi : phis) {
      for (const Complex& lam : lambdas) {
        const Complex fast = pair_plambda_direct(sig, lam, phi, 1e-10).value;
        const Complex slow =
            orthant_oracle(phi, sig, Region::ConePositive, lam, 1e-9).value;
        const double d = rel_diff(fast, slow);
        if (d > 1e-6) {
          ok = false;
          detail = "mismatch " + std::to_string(d) + " at Re lambda " +
                   std::to_string(lam.real());
        }
      }
    }
  }
  report(4, "bipolar pairing vs n-dimensional oracle", ok, timer.seconds(),
         120.0, detail);
}

void criterion_5() {
  Timer timer;
  bool ok = true;
  std::string detail;
  Signature sig(2, 2, {0.5, 0.5}, {1.0, 1.0});
  TestFunction phi = TestFunction::gaussian(4) +
                     TestFunction::monomial_gaussian({0, 1, 0, 0}, 1.1, 0.5);
  std::mt19937 rng(505);
  std::uniform_real_distribution<double> res(0.05, 3.0);
  std::uniform_real_distribution<double> ims(-1.5, 1.5);
  for (int i = 0; ok && i < 100; ++i) {
    const Complex lam(res(rng), ims(rng));
    const Complex direct = pair_plambda_direct(sig, lam, phi, 1e-10).value;
    const Complex once = pair_plambda_continued(sig, lam, phi, 1e-10, 1).value;
    const double d = rel_diff(once, direct);
    if (d > 1e-6) {
      ok = false;
      detail = "recursion off by " + std::to_string(d);
    }
  }
  report(5, "Green recursion identity", ok, timer.seconds(), 120.0, detail);
}

void criterion_6() {
  Timer timer;
  bool ok = true;
  std::string detail;
  const Signature sigs[] = {Signature(2, 2, {1.0, 1.0}, {1.0, 1.0}),
                            Signature(2, 2, {0.5, 0.5}, {1.0, 1.0})};
  TestFunction phi = TestFunction::gaussian(4) +
                     TestFunction::monomial_gaussian({1, 0, 0, 0}, 1.0, 0.25);
  for (const Signature& sig : sigs) {
    for (int k = 0; 2.0 * k < sig.total_weight() - 2.0; ++k) {
      const Complex a = pair_delta(sig, DeltaVariant::OuterR, k, phi, 1e-10).value;
      const Complex b = pair_delta(sig, DeltaVariant::OuterS, k, phi, 1e-10).value;
      const double d = rel_diff(a, b);
      if (d > 1e-7) {
        ok = false;
        detail = "k=" + std::to_string(k) + " differ by " + std::to_string(d);
      }
    }
  }
  report(6, "delta regularizations coincide", ok, timer.seconds(), 30.0,
         detail);
}

void criterion_7() {
  Timer timer;
  bool ok = true;
  std::string detail;
  Signature sig(2, 2, {0.5, 0.5}, {1.0, 1.0});
  TestFunction phi = TestFunction::gaussian(4);
  for (int k : {1, 2}) {
    ResidueReport r = residue_first_series(sig, k, phi, 1e-9);
    const double d = rel_diff(r.formula_value, r.oracle_value);
    if (r.theorem != TheoremTag::T1 || d > 1e-3) {
      ok = false;
      detail = "k=" + std::to_string(k) + " rel diff " + std::to_string(d);
    }
  }
  report(7, "first-series residues (T1) vs extrapolated limits", ok, timer.seconds(),
         120.0, detail);
}

void criterion_8() {
  Timer timer;
  bool ok = true;
  std::string detail;
  Signature sig(2, 2, {0.5, 0.5}, {1.0, 1.0});
  TestFunction phi = TestFunction::gaussian(4);
  for (int k : {0, 1}) {
    ResidueReport r = residue_second_series(sig, k, phi, 1e-9);
    const double d = rel_diff(r.formula_value, r.oracle_value);
    if (r.theorem != TheoremTag::T2 || d > 1e-3) {
      ok = false;
      detail = "k=" + std::to_string(k) + " rel diff " + std::to_string(d);
    }
  }
  // even p + |gamma'| with a colliding pole: the router hands the pole to the
  // double-pole (Both-series) handler and the simple pole survives there
  Signature even(2, 2, {1.0, 1.0}, {1.0, 1.0});
  auto poles = pole_series(even, 1);
  bool both_tagged = false;
  for (const Pole& p : poles)
    if (std::abs(p.location.real() + 4.0) < 1e-12)
      both_tagged = p.series == SeriesTag::Both;
  ResidueReport declined = residue_second_series(even, 0, phi, 1e-9);
  LaurentReport owner = laurent_double_pole(even, 0, phi, 1e-9);
  if (!both_tagged || declined.theorem != TheoremTag::UnsupportedCase ||
      owner.theorem != TheoremTag::T3 || owner.formula.order != 1) {
    ok = false;
    detail = "router misdirected the collision pole";
  }
  report(8, "second-series residues (T2) and parity routing", ok, timer.seconds(),
         120.0, detail);
}

void criterion_9() {
  Timer timer;
  bool ok = true;
  std::string detail;
  Signature odd(2, 2, {0.5, 0.5}, {0.5, 0.5});
  TestFunction phi = TestFunction::gaussian(4);
  LaurentReport r = laurent_double_pole(odd, 0, phi, 1e-9);
  const double c2_ref =
      -std::pow(gammafn(0.75), 4.0) / (32.0 * M_PI);  // times phi(0) = 1
  if (rel_diff(r.fitted.c_minus2, Complex(c2_ref, 0.0)) > 1e-3) {
    ok = false;
    detail = "c_minus2 fit off";
  }
  if (rel_diff(r.fitted.c_minus1, r.formula.c_minus1) > 5e-3) {
    ok = false;
    detail = "c_minus1 digamma formula off";
  }
  Signature even(2, 2, {1.0, 1.0}, {1.0, 1.0});
  LaurentReport s = laurent_double_pole(even, 0, phi, 1e-9);
  if (!(std::abs(s.fitted.c_minus2) < 1e-3 * std::abs(s.fitted.c_minus1))) {
    ok = false;
    detail = "simple-pole branch shows a spurious double pole";
  }
  report(9, "double-pole Laurent coefficients (T3)", ok, timer.seconds(), 180.0,
         detail);
}

void criterion_10() {
  Timer timer;
  bool ok = true;
  std::string detail;
  const fs::path dir =
      fs::temp_directory_path() / ("wdist_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path cfg = dir / "verify.json";
  {
    std::ofstream out(cfg);
    out << R"({
      "signature": {"p": 2, "q": 2, "gamma_plus": [0.5, 0.5], "gamma_minus": [1.0, 1.0]},
      "test_function": [{"coeff": 1.0, "exponents": [0, 0, 0, 0], "sigma": 1.0}],
      "job": "verify",
      "params": {"kmax": 2}
    })";
  }
  auto run = [&](const fs::path& out) {
    const std::string cmd = std::string(WDIST_BIN) + " verify --config " +
                            cfg.string() + " --threads 4 --output " +
                            out.string() + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  const fs::path out1 = dir / "report1.json";
  const fs::path out2 = dir / "report2.json";
  const int c1 = run(out1);
  const int c2 = run(out2);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string r1 = slurp(out1);
  const std::string r2 = slurp(out2);
  if (c1 != 0 || c2 != 0) {
    ok = false;
    detail = "verify exited " + std::to_string(c1) + "/" + std::to_string(c2);
  } else if (r1.empty() || r1 != r2) {
    ok = false;
    detail = "reports differ between runs";
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  report(10, "byte-identical verify reports", ok, timer.seconds(), 60.0,
         detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
