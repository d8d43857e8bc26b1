#ifndef TDESIGN_BOUND_HPP
#define TDESIGN_BOUND_HPP

#include "tdesign/scalar.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <string>

namespace tdesign {

/// Milnor's count of isolated common real roots of polynomials of degree at
/// most `degree` in `num_vars` variables: degree * (2 degree - 1)^(num_vars - 1).
inline BigInt milnor_bound(unsigned degree, unsigned num_vars) {
  if (degree < 1 || num_vars < 1) throw InputError("milnor_bound: degree and num_vars must be positive");
  return BigInt(degree) * boost::multiprecision::pow(BigInt(2 * degree - 1), num_vars - 1);
}

inline BigInt factorial(std::uint64_t m) {
  BigInt r = 1;
  for (std::uint64_t i = 2; i <= m; ++i) r *= i;
  return r;
}

struct BoundReport {
  unsigned t = 0;
  unsigned d = 0;
  std::uint64_t n = 0;
  unsigned t_prime = 2;
  std::uint64_t k = 0;  // (d+1)(n-d-1), clamped at 0
  BigInt lhs;           // t' (2t'-1)^(k-1); 1 when k = 0
  BigInt rhs;           // (n-d-1)!; 1 when n <= d+1
  bool holds = true;
};

inline std::size_t decimal_digits(const BigInt& v) {
  std::string s = v.str();
  return s.size() - (s.front() == '-' ? 1 : 0);
}

/// Evaluates t'(2t'-1)^(k-1) >= (n-d-1)! exactly. A rigid n-point t-design on
/// S^d can only exist when `holds`. For n <= d+1 both sides are 1.
inline BoundReport theorem_check(unsigned t, unsigned d, std::uint64_t n) {
  if (t < 1 || d < 1) throw InputError("theorem_check: t and d must be positive");
  BoundReport r;
  r.t = t;
  r.d = d;
  r.n = n;
  r.t_prime = std::max(t, 2u);
  const std::uint64_t free = n > d + 1 ? n - d - 1 : 0;
  r.k = static_cast<std::uint64_t>(d + 1) * free;
  if (r.k > 0xffffffffULL) throw InputError("theorem_check: n too large");
  r.lhs = r.k == 0 ? BigInt(1) : milnor_bound(r.t_prime, static_cast<unsigned>(r.k));
  r.rhs = factorial(free);
  r.holds = r.lhs >= r.rhs;
  return r;
}

struct MaxFeasible {
  std::uint64_t n = 0;           // largest n >= d+2 with the inequality holding
  std::uint64_t scan_stop = 0;    // n at which the scan terminated
  BoundReport at_max;
};

/// Scans n upward from d+2 with incremental products. Stops at the first
/// failure n0 with n0-d-1 > (2t'-1)^(d+1): past that point the factorial side
/// gains more per step than the power side, so no later n can hold.
inline MaxFeasible max_feasible_n(unsigned t, unsigned d) {
  if (t < 1 || d < 1) throw InputError("max_feasible_n: t and d must be positive");
  const unsigned tp = std::max(t, 2u);
  const BigInt per_step = boost::multiprecision::pow(BigInt(2 * tp - 1), d + 1);

  std::uint64_t n = d + 2;
  BigInt lhs = milnor_bound(tp, d + 1);  // k = d+1
  BigInt rhs = 1;                        // 1!
  MaxFeasible out;
  for (;; ++n) {
    const std::uint64_t free = n - d - 1;
    if (n > d + 2) {
      lhs *= per_step;
      rhs *= free;
    }
    if (lhs >= rhs) {
      out.n = n;
    } else if (BigInt(free) > per_step) {
      out.scan_stop = n;
      break;
    }
  }
  out.at_max = theorem_check(t, d, out.n);
  return out;
}

inline nlohmann::ordered_json to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["t"] = r.t;
  j["d"] = r.d;
  j["n"] = r.n;
  j["t_prime"] = r.t_prime;
  j["k"] = r.k;
  j["lhs"] = r.lhs.str();
  j["rhs"] = r.rhs.str();
  j["lhs_digits"] = decimal_digits(r.lhs);
  j["rhs_digits"] = decimal_digits(r.rhs);
  j["holds"] = r.holds;
  return j;
}

}  // namespace tdesign

#endif  // TDESIGN_BOUND_HPP
