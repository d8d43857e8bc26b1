#ifndef TDESIGN_MOMENTS_HPP
#define TDESIGN_MOMENTS_HPP

#include "tdesign/scalar.hpp"

#include <algorithm>
#include <compare>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace tdesign {

/// Exponent multi-index over the d+1 ambient coordinates.
class Monomial {
public:
  Monomial() = default;
  explicit Monomial(std::vector<unsigned> exponents) : exponents_(std::move(exponents)) {}

  static Monomial zero(std::size_t dim) { return Monomial(std::vector<unsigned>(dim, 0)); }

  const std::vector<unsigned>& exponents() const { return exponents_; }
  std::size_t dimension() const { return exponents_.size(); }
  unsigned degree() const { return std::accumulate(exponents_.begin(), exponents_.end(), 0u); }
  unsigned operator[](std::size_t i) const { return exponents_[i]; }

  bool all_even() const {
    return std::all_of(exponents_.begin(), exponents_.end(), [](unsigned e) { return e % 2 == 0; });
  }

  template <class Scalar>
  Scalar evaluate(std::span<const Scalar> point) const {
    if (point.size() != exponents_.size())
      throw InputError("monomial dimension " + std::to_string(exponents_.size()) +
                       " does not match point dimension " + std::to_string(point.size()));
    Scalar value(1);
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
      if (exponents_[i] != 0) value *= ipow(point[i], exponents_[i]);
    }
    return value;
  }

  /// Comma-separated exponents, e.g. "2,0,0".
  std::string key() const {
    std::string s;
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(exponents_[i]);
    }
    return s;
  }

  /// Graded lexicographic: total degree first, then lexicographic exponents.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    return a.exponents_ <=> b.exponents_;
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;

private:
  std::vector<unsigned> exponents_;
};

namespace detail {

inline void enumerate_fixed_degree(std::size_t dim, unsigned remaining, std::size_t pos,
                                   std::vector<unsigned>& current, std::vector<Monomial>& out) {
  if (pos + 1 == dim) {
    current[pos] = remaining;
    out.emplace_back(current);
    return;
  }
  for (unsigned e = 0; e <= remaining; ++e) {
    current[pos] = e;
    enumerate_fixed_degree(dim, remaining - e, pos + 1, current, out);
  }
}

}  // namespace detail

/// All multi-indices of total degree <= max_degree in graded lex order.
inline std::vector<Monomial> enumerate_monomials(std::size_t ambient_dim, unsigned max_degree) {
  std::vector<Monomial> out;
  if (ambient_dim == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<unsigned> current(ambient_dim, 0);
  for (unsigned deg = 0; deg <= max_degree; ++deg)
    detail::enumerate_fixed_degree(ambient_dim, deg, 0, current, out);
  return out;
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Normalized moment of x^alpha over S^d (ambient_dim = d+1):
///   0 if any exponent is odd, otherwise
///   prod_i (alpha_i - 1)!! / prod_{j < |alpha|/2} (d + 1 + 2j).
inline Rational sphere_moment(const Monomial& alpha, std::size_t ambient_dim) {
  if (ambient_dim < 1 || alpha.dimension() != ambient_dim)
    throw InputError("monomial has " + std::to_string(alpha.dimension()) +
                     " exponents but ambient dimension is " + std::to_string(ambient_dim));
  if (!alpha.all_even()) return Rational(0);
  BigInt numerator = 1;
  for (unsigned e : alpha.exponents()) {
    for (unsigned f = e; f >= 3; f -= 2) numerator *= (f - 1);
  }
  BigInt denominator = 1;
  const unsigned half = alpha.degree() / 2;
  for (unsigned j = 0; j < half; ++j) denominator *= static_cast<unsigned>(ambient_dim) + 2 * j;
  return Rational(numerator, denominator);
}

}  // namespace tdesign

#endif  // TDESIGN_MOMENTS_HPP
