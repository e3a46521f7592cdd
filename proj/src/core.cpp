#include "wdist/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wdist {

ParityClass classify_parity(double v) {
  if (!std::isfinite(v)) throw DomainError("classify_parity: non-finite value");
  ParityClass pc;
  pc.value = v;
  const double r = std::round(v);
  if (std::abs(v - r) <= kIntTol) {
    const long long i = static_cast<long long>(r);
    pc.cls = (i % 2 == 0) ? Parity::EvenInteger : Parity::OddInteger;
  } else {
    pc.cls = Parity::NonInteger;
  }
  return pc;
}

Signature::Signature(int p_, int q_, std::vector<double> gp,
                     std::vector<double> gm)
    : p(p_), q(q_), gamma_plus(std::move(gp)), gamma_minus(std::move(gm)) {
  if (p <= 1 || q <= 1)
    throw DomainError("Signature: requires p > 1 and q > 1");
  if (static_cast<int>(gamma_plus.size()) != p)
    throw DomainError("Signature: gamma_plus must have p entries");
  if (static_cast<int>(gamma_minus.size()) != q)
    throw DomainError("Signature: gamma_minus must have q entries");
  for (double g : gamma_plus)
    if (!(g > 0.0)) throw DomainError("Signature: every gamma_i must be > 0");
  for (double g : gamma_minus)
    if (!(g > 0.0)) throw DomainError("Signature: every gamma_i must be > 0");
}

double Signature::abs_gamma_plus() const {
  return std::accumulate(gamma_plus.begin(), gamma_plus.end(), 0.0);
}

double Signature::abs_gamma_minus() const {
  return std::accumulate(gamma_minus.begin(), gamma_minus.end(), 0.0);
}

double Signature::gamma_at(int axis) const {
  if (axis < 0 || axis >= n()) throw DomainError("gamma_at: axis out of range");
  return axis < p ? gamma_plus[axis] : gamma_minus[axis - p];
}

std::vector<Pole> pole_series(const Signature& sig, int lambda_max_k) {
  if (lambda_max_k < 0) throw DomainError("pole_series: lambda_max_k < 0");
  std::vector<Pole> out;
  const double half = sig.total_weight() / 2.0;
  // First series: negative integers.  Mark the ones that also belong to the
  // second series as Both.
  auto in_second = [&](double v) {
    const double k2 = -v - half;
    return k2 >= -kIntTol && is_integer(k2);
  };
  for (int k = 1; k <= lambda_max_k; ++k) {
    const double loc = -static_cast<double>(k);
    out.push_back({Complex(loc, 0.0),
                   in_second(loc) ? SeriesTag::Both : SeriesTag::First});
  }
  for (int k = 0; k <= lambda_max_k; ++k) {
    const double loc = -half - k;
    const bool integral = is_integer(loc) && loc <= -1.0 + kIntTol;
    // Skip duplicates already emitted through the first-series loop.
    if (integral && -loc <= lambda_max_k + kIntTol) continue;
    out.push_back({Complex(loc, 0.0),
                   integral ? SeriesTag::Both : SeriesTag::Second});
  }
  std::sort(out.begin(), out.end(), [](const Pole& a, const Pole& b) {
    return a.location.real() > b.location.real();
  });
  return out;
}

const char* to_string(Parity p) {
  switch (p) {
    case Parity::EvenInteger: return "EvenInteger";
    case Parity::OddInteger: return "OddInteger";
    default: return "NonInteger";
  }
}

const char* to_string(SeriesTag s) {
  switch (s) {
    case SeriesTag::First: return "First";
    case SeriesTag::Second: return "Second";
    default: return "Both";
  }
}

}  // namespace wdist
