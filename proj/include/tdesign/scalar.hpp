#ifndef TDESIGN_SCALAR_HPP
#define TDESIGN_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace tdesign {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class ScalarMode { Exact, Float };

/// Raised for malformed input: bad files, dimension mismatches, invalid
/// parameters. The message names the offending field.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

template <class Scalar>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr ScalarMode mode = ScalarMode::Exact;
  static constexpr bool exact = true;
};

template <>
struct scalar_traits<double> {
  static constexpr ScalarMode mode = ScalarMode::Float;
  static constexpr bool exact = false;
};

template <class Scalar>
inline constexpr bool is_exact_v = scalar_traits<Scalar>::exact;

inline std::string_view mode_name(ScalarMode m) {
  return m == ScalarMode::Exact ? "exact" : "float";
}

template <class Scalar>
Scalar from_rational(const Rational& q) {
  if constexpr (is_exact_v<Scalar>) {
    return q;
  } else {
    return q.template convert_to<double>();
  }
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

template <class Scalar>
Scalar abs_value(const Scalar& x) {
  if constexpr (is_exact_v<Scalar>) {
    return x < 0 ? Scalar(-x) : x;
  } else {
    return std::fabs(x);
  }
}

/// Integer power by repeated multiplication; exact for rationals.
template <class Scalar>
Scalar ipow(const Scalar& base, unsigned exponent) {
  Scalar result(1);
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

namespace detail {

// Decimal digits only; boost would read a leading 0 as an octal prefix.
inline BigInt parse_decimal_integer(const std::string& s) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) negative = s[pos++] == '-';
  if (pos == s.size() || s.find_first_not_of("0123456789", pos) != std::string::npos)
    throw std::invalid_argument(s);
  while (pos + 1 < s.size() && s[pos] == '0') ++pos;
  BigInt v(s.substr(pos));
  return negative ? BigInt(-v) : v;
}

}  // namespace detail

/// Parses "p/q" or an integer "p" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(detail::parse_decimal_integer(s));
    BigInt d = detail::parse_decimal_integer(s.substr(slash + 1));
    if (d == 0) throw InputError("zero denominator in rational '" + s + "'");
    return Rational(detail::parse_decimal_integer(s.substr(0, slash)), d);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("malformed rational '" + s + "'");
  }
}

/// Parses a decimal literal ("0.25", "-1e-3", "7") as an exact rational of
/// its written value, not of its binary approximation.
inline Rational parse_decimal_exact(std::string_view text) {
  std::string s(text);
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) negative = s[pos++] == '-';
  std::string digits;
  long long scale = 0;
  bool seen_dot = false;
  bool any = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      any = true;
      if (seen_dot) --scale;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any) throw InputError("malformed decimal '" + s + "'");
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw InputError("malformed decimal '" + s + "'");
    long long e = 0;
    std::string_view rest(s.data() + pos + 1, s.size() - pos - 1);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), e);
    if (ec != std::errc() || ptr != rest.data() + rest.size())
      throw InputError("malformed decimal '" + s + "'");
    scale += e;
  }
  BigInt mantissa = detail::parse_decimal_integer(digits);
  if (negative) mantissa = -mantissa;
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::llabs(scale)));
  return scale >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
}

inline std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

/// Shortest decimal text that round-trips to the same double.
inline std::string to_string(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

inline Rational double_to_rational_shortest(double x) {
  if (!std::isfinite(x)) throw InputError("non-finite coordinate cannot be made exact");
  return parse_decimal_exact(to_string(x));
}

}  // namespace tdesign

#endif  // TDESIGN_SCALAR_HPP
