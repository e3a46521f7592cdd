#include "wdist/quad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "wdist/specfun.hpp"

namespace wdist {

namespace {

// ---------------------------------------------------------------------------
// Gauss rules via Golub-Welsch on the Jacobi recurrence.
// ---------------------------------------------------------------------------

// QL with implicit shifts on a symmetric tridiagonal matrix (d diagonal,
// e off-diagonal, e[i] couples i and i+1).  z accumulates the first row of
// the eigenvector matrix; weights come out as mu0 * z^2.
void tridiag_eigen_first_row(std::vector<double>& d, std::vector<double>& e,
                             std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  e.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-15 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60)
          throw NoConvergenceError("gauss rule: tridiagonal QL stalled");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  e.pop_back();
}

Rule01 make_gauss_jacobi01(int n, double a, double b) {
  if (n < 1 || a <= -1.0 || b <= -1.0)
    throw DomainError("gauss_jacobi01: invalid parameters");
  std::vector<double> d(n), e(n > 1 ? n - 1 : 0), z(n, 0.0);
  z[0] = 1.0;
  const double apb = a + b;
  d[0] = (b - a) / (apb + 2.0);
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + apb;
    d[k] = (b * b - a * a) / (t * (t + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) /
             ((2.0 + apb) * (2.0 + apb) * (3.0 + apb));
    } else {
      const double t = 2.0 * k + apb;
      beta = 4.0 * k * (k + a) * (k + b) * (k + apb) /
             (t * t * (t + 1.0) * (t - 1.0));
    }
    e[k - 1] = std::sqrt(beta);
  }
  tridiag_eigen_first_row(d, e, z);
  // mu0 = int_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
  const double log_mu0 = (apb + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                         std::lgamma(b + 1.0) - std::lgamma(apb + 2.0);
  const double mu0 = std::exp(log_mu0);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return d[i] < d[j]; });

  Rule01 rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Map [-1,1] to [0,1]: weight (1-t)^a t^b picks up 2^{-(a+b+1)}.
  const double wscale = std::exp(-(apb + 1.0) * std::log(2.0)) * mu0;
  for (int i = 0; i < n; ++i) {
    const int j = order[i];
    rule.nodes[i] = 0.5 * (1.0 + d[j]);
    rule.weights[i] = wscale * z[j] * z[j];
  }
  return rule;
}

}  // namespace

const Rule01& gauss_jacobi01(int n, double a, double b) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<Rule01>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, a, b}];
  if (!slot) slot = std::make_unique<Rule01>(make_gauss_jacobi01(n, a, b));
  return *slot;
}

namespace {

Complex apply_rule(const Rule01& rule, const Integrand& f, double a, double b) {
  const double len = b - a;
  Complex sum = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(a + len * rule.nodes[i]);
  return len * sum;
}

struct AdaptState {
  int subdivisions = 0;
  double abs_error = 0.0;
};

Complex adapt_interval(const Integrand& f, double a, double b, double tol,
                       int depth, AdaptState& st) {
  const Rule01& lo = gauss_jacobi01(15, 0.0, 0.0);
  const Rule01& hi = gauss_jacobi01(31, 0.0, 0.0);
  const Complex coarse = apply_rule(lo, f, a, b);
  const Complex fine = apply_rule(hi, f, a, b);
  const double err = std::abs(fine - coarse);
  // The relative floor stops subdivision once the requested tolerance falls
  // below what double precision can resolve on this panel.
  if (err <= tol || err <= 1e-14 * std::abs(fine) || depth >= 48) {
    st.abs_error += err;
    return fine;
  }
  if (++st.subdivisions > kMaxSubdiv)
    throw NoConvergenceError("integrate_interval: subdivision limit reached");
  const double m = 0.5 * (a + b);
  return adapt_interval(f, a, m, 0.5 * tol, depth + 1, st) +
         adapt_interval(f, m, b, 0.5 * tol, depth + 1, st);
}

}  // namespace

QuadResult integrate_interval(const Integrand& f, double a, double b,
                              double tol) {
  AdaptState st;
  QuadResult res;
  res.value = adapt_interval(f, a, b, tol, 0, st);
  res.abs_error = st.abs_error;
  res.subdivisions = st.subdivisions;
  return res;
}

QuadResult integrate_semiaxis(const Integrand& f, double tol,
                              double scale_hint) {
  if (!(scale_hint > 0.0)) throw DomainError("integrate_semiaxis: bad scale");
  AdaptState st;
  Complex total = 0.0;
  double a = 0.0;
  double len = scale_hint;
  int quiet = 0;
  for (int panel = 0; panel < 64; ++panel) {
    const double b = a + len;
    const Complex piece = adapt_interval(f, a, b, 0.25 * tol, 0, st);
    total += piece;
    if (std::abs(piece) < 0.01 * tol ||
        std::abs(piece) <= 1e-15 * std::abs(total)) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
    a = b;
    len *= 2.0;
  }
  QuadResult res;
  res.value = total;
  res.abs_error = st.abs_error;
  res.subdivisions = st.subdivisions;
  if (quiet < 2)
    throw NoConvergenceError("integrate_semiaxis: tail did not settle");
  return res;
}

QuadResult integrate_jacobi_endpoint(const Integrand& g, Complex lambda,
                                     double beta_exp, double tol) {
  if (!(lambda.real() > -1.0))
    throw DomainError("integrate_jacobi_endpoint: Re(lambda) <= -1 diverges");
  if (!(beta_exp > 0.0))
    throw DomainError("integrate_jacobi_endpoint: beta_exp must be > 0");

  QuadResult res;

  // Left half [0, 1/2]: absorb t^{beta-1} into the rule; (1-t)^lambda is
  // smooth here.
  {
    const double scale = std::exp(-beta_exp * std::log(2.0));  // (1/2)^beta
    auto left = [&](int order) {
      const Rule01& rule = gauss_jacobi01(order, 0.0, beta_exp - 1.0);
      Complex sum = 0.0;
      for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const double tau = rule.nodes[i];
        const double t = 0.5 * tau;
        sum += rule.weights[i] * std::exp(lambda * std::log1p(-t)) * g(t);
      }
      return scale * sum;
    };
    const Complex lo = left(40);
    const Complex hi = left(60);
    res.value += hi;
    res.abs_error += std::abs(hi - lo);
  }

  // Right half [1/2, 1]: substitute 1-t = e^{-w}; the endpoint factor
  // becomes a smooth damped exponential e^{-(lambda+1) w}.
  {
    AdaptState st;
    auto integrand = [&](double w) -> Complex {
      const double emw = std::exp(-w);
      const double t = 1.0 - emw;
      return std::exp(-(lambda + 1.0) * w) *
             std::exp((beta_exp - 1.0) * std::log(t)) * g(t);
    };
    double a = std::log(2.0);
    double len = 1.0;
    Complex total = 0.0;
    int quiet = 0;
    for (int panel = 0; panel < 64; ++panel) {
      const Complex piece = adapt_interval(integrand, a, a + len, 0.25 * tol, 0, st);
      total += piece;
      if (std::abs(piece) < 0.01 * tol ||
          std::abs(piece) <= 1e-15 * std::abs(total)) {
        if (++quiet >= 2) break;
      } else {
        quiet = 0;
      }
      a += len;
      len *= 2.0;
    }
    if (quiet < 2)
      throw NoConvergenceError("integrate_jacobi_endpoint: tail did not settle");
    res.value += total;
    res.abs_error += st.abs_error;
    res.subdivisions += st.subdivisions;
  }
  return res;
}

namespace {

// Monomial coefficients of the Chebyshev interpolant of F on [0, r0], fitted
// at exactly count+1 nodes.  Truncating a higher-degree interpolant to a
// monomial prefix is badly conditioned; keeping the degree equal to the node
// count makes the conversion exact and leaves only the interpolation error,
// which for the entire integrands used here shrinks like (r0/4)^{count+1-i}
// in the i-th coefficient.
std::vector<Complex> taylor_coefficients(const Integrand& F, double r0,
                                         int count) {
  const int M = count + 1;
  std::vector<Complex> samples(M);
  for (int j = 0; j < M; ++j) {
    const double y = std::cos(M_PI * (j + 0.5) / M);
    samples[j] = F(r0 * 0.5 * (y + 1.0));
  }
  std::vector<Complex> cheb(M);
  for (int k = 0; k < M; ++k) {
    Complex sum = 0.0;
    for (int j = 0; j < M; ++j)
      sum += samples[j] * std::cos(M_PI * k * (j + 0.5) / M);
    cheb[k] = sum * (2.0 / M);
  }
  cheb[0] *= 0.5;

  // Accumulate monomial coefficients of sum_k cheb_k T_k(2x/r0 - 1).
  const int nc = M;
  std::vector<Complex> mono(nc, 0.0);
  std::vector<Complex> tkm1(nc, 0.0), tk(nc, 0.0), tnext(nc, 0.0);
  tkm1[0] = 1.0;  // T_0
  const double s = 2.0 / r0;
  for (int i = 0; i < nc; ++i) mono[i] += cheb[0] * tkm1[i];
  if (M > 1) {
    tk[0] = -1.0;  // T_1 = 2x/r0 - 1
    tk[1] = s;
    for (int i = 0; i < nc; ++i) mono[i] += cheb[1] * tk[i];
    for (int k = 2; k < M; ++k) {
      // T_{k} = 2 (2x/r0 - 1) T_{k-1} - T_{k-2}
      std::fill(tnext.begin(), tnext.end(), Complex(0.0));
      for (int i = 0; i < nc; ++i) {
        tnext[i] += -2.0 * tk[i] - tkm1[i];
        if (i + 1 < nc) tnext[i + 1] += 2.0 * s * tk[i];
      }
      for (int i = 0; i < nc; ++i) mono[i] += cheb[k] * tnext[i];
      tkm1 = tk;
      tk = tnext;
    }
  }
  return mono;
}

}  // namespace

QuadResult finite_part_semiaxis(const Integrand& F, double mu, int taylor_order,
                                double tol, bool allow_integer_pole,
                                double split) {
  if (taylor_order < 0) throw DomainError("finite_part_semiaxis: order < 0");
  if (!(split > 0.0)) throw DomainError("finite_part_semiaxis: bad split");
  if (!(mu > -taylor_order - 1.0))
    throw DomainError("finite_part_semiaxis: mu too negative for order");
  for (int i = 0; i <= taylor_order; ++i) {
    if (std::abs(mu + i) <= kIntTol && !allow_integer_pole)
      throw PoleHitError("finite_part_semiaxis: mu lands on subtracted pole");
  }

  // Fit a few degrees past the pole-subtraction order J and subtract the
  // whole interpolant: the spare degrees push the fit error out of the
  // low-order coefficients, which carry the delta0^{mu+i} amplification.
  const int J = taylor_order;
  const int fit_degree = J + 7;
  std::vector<Complex> a = taylor_coefficients(F, 0.5 * split, fit_degree);

  QuadResult res;

  // [delta0, split]: integrate (F - T) r^{mu-1}; the part below delta0 is
  // O(a_last delta0^{mu+deg+1}) and goes into the error estimate.
  const double delta0 = 0.05 * split;
  auto regularized = [&](double r) -> Complex {
    Complex taylor = 0.0;
    double rp = 1.0;
    for (const Complex& ai : a) {
      taylor += ai * rp;
      rp *= r;
    }
    return (F(r) - taylor) * std::pow(r, mu - 1.0);
  };
  {
    QuadResult part = integrate_interval(regularized, delta0, split, 0.25 * tol);
    res.value += part.value;
    res.abs_error += part.abs_error;
    res.subdivisions += part.subdivisions;
    res.abs_error += std::abs(a.back()) *
                     std::pow(delta0, mu + fit_degree + 1.0) /
                     (mu + fit_degree + 1.0);
  }

  // Continued moments of the subtracted polynomial on [0, split].
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    const double e = mu + i;
    if (std::abs(e) <= kIntTol) {
      res.value += a[i] * std::log(split);  // constant term of the pole
    } else {
      res.value += a[i] * std::pow(split, e) / e;
    }
  }

  // [split, inf): ordinary integral.
  {
    AdaptState st;
    auto tail = [&](double r) -> Complex {
      return F(r) * std::pow(r, mu - 1.0);
    };
    double lo = split;
    double len = split;
    Complex total = 0.0;
    int quiet = 0;
    for (int panel = 0; panel < 64; ++panel) {
      const Complex piece = adapt_interval(tail, lo, lo + len, 0.25 * tol, 0, st);
      total += piece;
      if (std::abs(piece) < 0.01 * tol) {
        if (++quiet >= 2) break;
      } else {
        quiet = 0;
      }
      lo += len;
      len *= 2.0;
    }
    if (quiet < 2)
      throw NoConvergenceError("finite_part_semiaxis: tail did not settle");
    res.value += total;
    res.abs_error += st.abs_error;
    res.subdivisions += st.subdivisions;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Orthant oracle.
// ---------------------------------------------------------------------------

namespace {

struct AngularNode {
  std::vector<double> omega;
  double weight = 0.0;
};

// Quadrature for int_{S_d^+} F(omega) omega^gamma dS via the repeated
// splitting omega = (sqrt(c), sqrt(1-c) eta), each level contributing
//   1/2 int_0^1 c^{(g1-1)/2} (1-c)^{(d-1+|g_rest|)/2 - 1} [...] dc
// with the algebraic factors absorbed into a Gauss-Jacobi rule.
std::vector<AngularNode> sphere_nodes(std::span<const double> gamma, int m) {
  const int d = static_cast<int>(gamma.size());
  std::vector<AngularNode> nodes;
  nodes.push_back({{}, 1.0});
  for (int level = 0; level < d - 1; ++level) {
    double rest = 0.0;
    for (int i = level + 1; i < d; ++i) rest += gamma[i];
    const double a = (d - level - 1 + rest) / 2.0 - 1.0;
    const double b = (gamma[level] - 1.0) / 2.0;
    const Rule01& rule = gauss_jacobi01(m, a, b);
    std::vector<AngularNode> next;
    next.reserve(nodes.size() * rule.nodes.size());
    for (const auto& node : nodes) {
      for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const double c = rule.nodes[i];
        AngularNode child = node;
        child.omega.push_back(std::sqrt(c));  // converted to coordinates below
        child.weight = node.weight * 0.5 * rule.weights[i];
        next.push_back(std::move(child));
      }
    }
    nodes = std::move(next);
  }
  // Convert the stored c-square-roots into actual coordinates:
  // omega_k = sqrt(c_k) * prod_{j<k} sqrt(1-c_j), last = prod sqrt(1-c_j).
  for (auto& node : nodes) {
    std::vector<double> omega(d);
    double residual = 1.0;
    for (int k = 0; k < d - 1; ++k) {
      const double sc = node.omega[k];
      omega[k] = sc * residual;
      residual *= std::sqrt(std::max(0.0, 1.0 - sc * sc));
    }
    omega[d - 1] = residual;
    node.omega = std::move(omega);
  }
  return nodes;
}

double max_sigma(const TestFunction& phi) {
  double s = 0.0;
  for (const auto& t : phi.terms()) s = std::max(s, t.sigma);
  return s > 0.0 ? s : 1.0;
}

}  // namespace

QuadResult orthant_oracle(const TestFunction& phi, const Signature& sig,
                          Region region, std::optional<Complex> lambda,
                          double tol) {
  if (phi.axes() != sig.n())
    throw DomainError("orthant_oracle: phi axes must equal p+q");
  const double R =
      max_sigma(phi) * std::sqrt(std::log(1.0 / std::min(tol, 1e-6)) + 30.0);

  if (region == Region::All) {
    if (lambda)
      throw DomainError("orthant_oracle: P^lambda requires the cone region");
    const int n = sig.n();
    const int m = n <= 4 ? 40 : 20;
    // Tensor product with the weight x^{gamma_i} absorbed per axis.
    std::vector<const Rule01*> rules(n);
    double prefac = 1.0;
    for (int i = 0; i < n; ++i) {
      rules[i] = &gauss_jacobi01(m, 0.0, sig.gamma_at(i));
      prefac *= std::pow(R, sig.gamma_at(i) + 1.0);
    }
    std::vector<int> idx(n, 0);
    std::vector<double> x(n);
    Complex sum = 0.0;
    while (true) {
      double w = 1.0;
      for (int i = 0; i < n; ++i) {
        x[i] = R * rules[i]->nodes[idx[i]];
        w *= rules[i]->weights[idx[i]];
      }
      sum += w * phi.evaluate(x);
      int axis = n - 1;
      while (axis >= 0 && ++idx[axis] == m) idx[axis--] = 0;
      if (axis < 0) break;
    }
    QuadResult res;
    res.value = prefac * sum;
    res.abs_error = tol;  // fixed-order tensor rule; nominal estimate
    return res;
  }

  const Complex lam = lambda.value_or(Complex(0.0, 0.0));
  if (lam.real() < 0.0)
    throw DomainError("orthant_oracle: requires Re(lambda) >= 0");

  const int m_ang = 32;
  const auto nodes_p = sphere_nodes(sig.gamma_plus, m_ang);
  const auto nodes_q = sphere_nodes(sig.gamma_minus, m_ang);

  std::vector<double> x(sig.n());
  auto angular = [&](double r, double s) -> Complex {
    Complex sum = 0.0;
    for (const auto& np : nodes_p) {
      for (int i = 0; i < sig.p; ++i) x[i] = r * np.omega[i];
      for (const auto& nq : nodes_q) {
        for (int i = 0; i < sig.q; ++i) x[sig.p + i] = s * nq.omega[i];
        sum += np.weight * nq.weight * phi.evaluate(x);
      }
    }
    return sum;
  };

  // (P^l, phi) = int_0^R r^{n+|g|-1+2 Re l ...} [theta integral] dr with
  // s = r sin(theta); the factor (r^2 cos^2 theta)^lambda stays explicit.
  const double radial_pow = sig.total_weight() - 1.0;
  const double s_pow = sig.q_weight() - 1.0;
  AdaptState st;
  auto inner = [&](double r) -> Complex {
    auto theta_integrand = [&](double th) -> Complex {
      const double t = std::sin(th);
      const double c = std::cos(th);
      Complex power = 1.0;
      if (lambda)
        power = std::exp(lam * std::log(r * r * c * c));
      return power * std::pow(t, s_pow) * c * angular(r, r * t);
    };
    const Complex th_int =
        adapt_interval(theta_integrand, 0.0, 0.5 * M_PI, 0.25 * tol, 0, st);
    return std::pow(r, radial_pow) * th_int;
  };
  QuadResult res;
  Complex total = 0.0;
  double lo = 0.0;
  const int radial_panels = 8;
  for (int i = 0; i < radial_panels; ++i) {
    const double hi = R * (i + 1) / radial_panels;
    total += adapt_interval(inner, lo, hi, 0.25 * tol, 0, st);
    lo = hi;
  }
  res.value = total;
  res.abs_error = st.abs_error;
  res.subdivisions = st.subdivisions;
  return res;
}

}  // namespace wdist
