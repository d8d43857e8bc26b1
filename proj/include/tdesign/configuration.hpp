#ifndef TDESIGN_CONFIGURATION_HPP
#define TDESIGN_CONFIGURATION_HPP

#include "tdesign/scalar.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tdesign {

template <class Scalar>
using Point = std::vector<Scalar>;

/// n points on S^d, stored as coordinate vectors of length d+1.
template <class Scalar>
struct Configuration {
  static constexpr ScalarMode mode = scalar_traits<Scalar>::mode;

  int dimension_d = 0;
  std::vector<Point<Scalar>> points;
  std::vector<std::string> labels;  // empty or one per point

  std::size_t size() const { return points.size(); }
  std::size_t ambient_dim() const { return static_cast<std::size_t>(dimension_d) + 1; }
  std::span<const Scalar> point(std::size_t i) const { return points[i]; }
};

using ExactConfiguration = Configuration<Rational>;
using FloatConfiguration = Configuration<double>;
using PointConfiguration = std::variant<ExactConfiguration, FloatConfiguration>;

inline constexpr double kUnitNormTolerance = 1e-12;

template <class Scalar>
Scalar squared_norm(std::span<const Scalar> v) {
  Scalar s(0);
  for (const auto& x : v) s += x * x;
  return s;
}

/// Throws InputError unless every point has length d+1 and unit norm.
template <class Scalar>
void validate(const Configuration<Scalar>& x) {
  if (x.dimension_d < 0) throw InputError("dimension_d must be non-negative");
  if (x.points.empty()) throw InputError("points: configuration must contain at least one point");
  if (!x.labels.empty() && x.labels.size() != x.points.size())
    throw InputError("labels: expected " + std::to_string(x.points.size()) + " entries, got " +
                     std::to_string(x.labels.size()));
  for (std::size_t i = 0; i < x.points.size(); ++i) {
    const auto& p = x.points[i];
    if (p.size() != x.ambient_dim())
      throw InputError("points[" + std::to_string(i) + "]: expected " +
                       std::to_string(x.ambient_dim()) + " coordinates, got " +
                       std::to_string(p.size()));
    Scalar n2 = squared_norm<Scalar>(p);
    if constexpr (is_exact_v<Scalar>) {
      if (n2 != 1)
        throw InputError("points[" + std::to_string(i) + "]: squared norm is " + to_string(n2) +
                         ", not exactly 1");
    } else {
      if (!std::isfinite(n2) || std::fabs(n2 - 1.0) > kUnitNormTolerance)
        throw InputError("points[" + std::to_string(i) + "]: squared norm " + to_string(n2) +
                         " is not within 1e-12 of 1");
    }
  }
}

inline FloatConfiguration to_float(const ExactConfiguration& x) {
  FloatConfiguration out;
  out.dimension_d = x.dimension_d;
  out.labels = x.labels;
  out.points.reserve(x.size());
  for (const auto& p : x.points) {
    Point<double> q;
    q.reserve(p.size());
    for (const auto& c : p) q.push_back(to_double(c));
    out.points.push_back(std::move(q));
  }
  return out;
}

inline FloatConfiguration to_float(const FloatConfiguration& x) { return x; }

/// Each double is replaced by the rational value of its shortest decimal
/// representation (0.6 becomes 3/5); the result must be exactly unit-norm.
inline ExactConfiguration to_exact(const FloatConfiguration& x) {
  ExactConfiguration out;
  out.dimension_d = x.dimension_d;
  out.labels = x.labels;
  for (const auto& p : x.points) {
    Point<Rational> q;
    for (double c : p) q.push_back(double_to_rational_shortest(c));
    out.points.push_back(std::move(q));
  }
  validate(out);
  return out;
}

inline ExactConfiguration to_exact(const ExactConfiguration& x) { return x; }

inline ScalarMode mode_of(const PointConfiguration& x) {
  return std::holds_alternative<ExactConfiguration>(x) ? ScalarMode::Exact : ScalarMode::Float;
}

// ---- JSON ----------------------------------------------------------------

template <class Scalar>
nlohmann::ordered_json to_json(const Configuration<Scalar>& x) {
  nlohmann::ordered_json j;
  j["dimension_d"] = x.dimension_d;
  j["mode"] = std::string(mode_name(Configuration<Scalar>::mode));
  auto pts = nlohmann::ordered_json::array();
  for (const auto& p : x.points) {
    auto row = nlohmann::ordered_json::array();
    for (const auto& c : p) {
      if constexpr (is_exact_v<Scalar>)
        row.push_back(to_string(c));
      else
        row.push_back(c);
    }
    pts.push_back(std::move(row));
  }
  j["points"] = std::move(pts);
  if (!x.labels.empty()) j["labels"] = x.labels;
  return j;
}

inline nlohmann::ordered_json to_json(const PointConfiguration& x) {
  return std::visit([](const auto& c) { return to_json(c); }, x);
}

namespace detail {

template <class Scalar, class Json>
Configuration<Scalar> parse_points(const Json& j, int d) {
  Configuration<Scalar> out;
  out.dimension_d = d;
  const auto& pts = j.at("points");
  if (!pts.is_array()) throw InputError("points: expected an array of arrays");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& row = pts[i];
    const std::string where = "points[" + std::to_string(i) + "]";
    if (!row.is_array()) throw InputError(where + ": expected an array");
    Point<Scalar> p;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& v = row[c];
      const std::string at = where + "[" + std::to_string(c) + "]";
      if constexpr (is_exact_v<Scalar>) {
        if (v.is_string()) {
          try {
            p.push_back(parse_rational(v.template get<std::string>()));
          } catch (const InputError& e) {
            throw InputError(at + ": " + e.what());
          }
        } else if (v.is_number_integer()) {
          p.push_back(Rational(v.template get<long long>()));
        } else {
          throw InputError(at + ": exact mode expects a rational string \"p/q\" or integer");
        }
      } else {
        if (!v.is_number()) throw InputError(at + ": float mode expects a number");
        p.push_back(v.template get<double>());
      }
    }
    out.points.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

/// Parses the configuration document. Mixed-mode entries are rejected.
template <class Json>
PointConfiguration configuration_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("configuration: expected a JSON object");
  if (!j.contains("dimension_d") || !j["dimension_d"].is_number_integer())
    throw InputError("dimension_d: missing or not an integer");
  if (!j.contains("mode") || !j["mode"].is_string())
    throw InputError("mode: missing or not a string");
  if (!j.contains("points")) throw InputError("points: missing");
  const int d = j["dimension_d"].template get<int>();
  const std::string mode = j["mode"].template get<std::string>();
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) throw InputError("labels: expected an array of strings");
    for (const auto& l : j["labels"]) {
      if (!l.is_string()) throw InputError("labels: expected an array of strings");
      labels.push_back(l.template get<std::string>());
    }
  }
  PointConfiguration out;
  if (mode == "exact") {
    auto c = detail::parse_points<Rational>(j, d);
    c.labels = std::move(labels);
    validate(c);
    out = std::move(c);
  } else if (mode == "float") {
    auto c = detail::parse_points<double>(j, d);
    c.labels = std::move(labels);
    validate(c);
    out = std::move(c);
  } else {
    throw InputError("mode: expected \"exact\" or \"float\", got \"" + mode + "\"");
  }
  return out;
}

inline PointConfiguration parse_configuration(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("configuration: invalid JSON: ") + e.what());
  }
  return configuration_from_json(j);
}

/// Returns a copy with points permuted: result[i] = x[order[i]].
template <class Scalar>
Configuration<Scalar> permuted(const Configuration<Scalar>& x, std::span<const std::size_t> order) {
  Configuration<Scalar> out;
  out.dimension_d = x.dimension_d;
  for (std::size_t i : order) {
    out.points.push_back(x.points.at(i));
    if (!x.labels.empty()) out.labels.push_back(x.labels.at(i));
  }
  return out;
}

}  // namespace tdesign

#endif  // TDESIGN_CONFIGURATION_HPP
