#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace wdist {

using Complex = std::complex<double>;

// A real is treated as an integer iff within this distance of one.  Parity of
// p+|gamma'| etc. selects which theorem applies, so the rule must be
// deterministic for user-supplied decimal gamma.
inline constexpr double kIntTol = 1e-9;

// Continued evaluation refuses lambda closer than this to any pole.
inline constexpr double kPoleGuard = 0.02;

class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

class PoleError : public std::runtime_error {
public:
  explicit PoleError(const std::string& msg) : std::runtime_error(msg) {}
};

class PoleHitError : public std::runtime_error {
public:
  explicit PoleHitError(const std::string& msg) : std::runtime_error(msg) {}
};

class PoleProximityError : public std::runtime_error {
public:
  explicit PoleProximityError(const std::string& msg)
      : std::runtime_error(msg) {}
};

class NoConvergenceError : public std::runtime_error {
public:
  explicit NoConvergenceError(const std::string& msg)
      : std::runtime_error(msg) {}
};

class IllConditionedError : public std::runtime_error {
public:
  explicit IllConditionedError(const std::string& msg)
      : std::runtime_error(msg) {}
};

class UnsupportedCaseError : public std::runtime_error {
public:
  explicit UnsupportedCaseError(const std::string& msg)
      : std::runtime_error(msg) {}
};

enum class Parity { EvenInteger, OddInteger, NonInteger };

struct ParityClass {
  double value = 0.0;
  Parity cls = Parity::NonInteger;
};

ParityClass classify_parity(double v);

inline bool is_integer(double v) {
  return std::abs(v - std::round(v)) <= kIntTol;
}

/// Shape of the quadratic form P = x_1^2+...+x_p^2 - x_{p+1}^2-...-x_{p+q}^2
/// together with the weight multi-index gamma = (gamma', gamma'').
struct Signature {
  int p = 0;
  int q = 0;
  std::vector<double> gamma_plus;   // gamma', length p
  std::vector<double> gamma_minus;  // gamma'', length q

  Signature(int p_, int q_, std::vector<double> gp, std::vector<double> gm);

  int n() const { return p + q; }
  double abs_gamma_plus() const;
  double abs_gamma_minus() const;
  double abs_gamma() const { return abs_gamma_plus() + abs_gamma_minus(); }
  // p+|gamma'|, q+|gamma''|, n+|gamma|
  double p_weight() const { return p + abs_gamma_plus(); }
  double q_weight() const { return q + abs_gamma_minus(); }
  double total_weight() const { return n() + abs_gamma(); }
  double gamma_at(int axis) const;  // axis in [0, n)
};

struct PairingResult {
  Complex value{0.0, 0.0};
  double abs_error_estimate = 0.0;
  bool converged = false;
};

struct LaurentExpansion {
  Complex pole{0.0, 0.0};
  int order = 0;  // 0, 1 or 2
  Complex c_minus2{0.0, 0.0};
  Complex c_minus1{0.0, 0.0};
  Complex c_0{0.0, 0.0};
  double coeff_error = 0.0;
};

enum class SeriesTag { First, Second, Both };

struct Pole {
  Complex location{0.0, 0.0};
  SeriesTag series = SeriesTag::First;
};

// Candidate poles lambda = -k (k = 1..k_max, First) and
// lambda = -(n+|gamma|)/2 - k (k = 0..k_max, Second).  A second-series pole
// that is also a negative integer lies in both series and is tagged Both.
std::vector<Pole> pole_series(const Signature& sig, int lambda_max_k);

const char* to_string(Parity p);
const char* to_string(SeriesTag s);

}  // namespace wdist
