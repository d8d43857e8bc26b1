#ifndef TDESIGN_DESIGN_HPP
#define TDESIGN_DESIGN_HPP

#include "tdesign/configuration.hpp"
#include "tdesign/moments.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tdesign {

inline constexpr double kDefaultDesignTolerance = 1e-9;

enum class DesignVerdict { IsDesign, NotDesign };

inline std::string_view verdict_name(DesignVerdict v) {
  return v == DesignVerdict::IsDesign ? "IS_DESIGN" : "NOT_DESIGN";
}

template <class Scalar>
struct DesignReport {
  unsigned t = 0;
  std::vector<std::pair<Monomial, Scalar>> residuals;  // graded lex order
  Scalar max_abs_residual{0};
  DesignVerdict verdict = DesignVerdict::IsDesign;
  double tolerance = kDefaultDesignTolerance;  // ignored in exact mode

  bool is_design() const { return verdict == DesignVerdict::IsDesign; }
};

/// (1/n) sum_i x^alpha(v_i) - normalized sphere moment of x^alpha.
template <class Scalar>
Scalar weyl_residual(const Configuration<Scalar>& x, const Monomial& alpha) {
  if (alpha.dimension() != x.ambient_dim())
    throw InputError("monomial has " + std::to_string(alpha.dimension()) +
                     " exponents, configuration lives in dimension " +
                     std::to_string(x.ambient_dim()));
  Scalar sum(0);
  for (const auto& p : x.points) sum += alpha.evaluate<Scalar>(p);
  return sum / Scalar(static_cast<long long>(x.size())) -
         from_rational<Scalar>(sphere_moment(alpha, x.ambient_dim()));
}

template <class Scalar>
DesignReport<Scalar> verify_design(const Configuration<Scalar>& x, unsigned t,
                                   double tolerance = kDefaultDesignTolerance) {
  if (t < 1) throw InputError("t must be at least 1");
  DesignReport<Scalar> report;
  report.t = t;
  report.tolerance = tolerance;
  for (auto& alpha : enumerate_monomials(x.ambient_dim(), t)) {
    if (alpha.degree() == 0) continue;
    Scalar r = weyl_residual(x, alpha);
    Scalar a = abs_value(r);
    if (a > report.max_abs_residual) report.max_abs_residual = a;
    report.residuals.emplace_back(std::move(alpha), std::move(r));
  }
  bool ok;
  if constexpr (is_exact_v<Scalar>)
    ok = report.max_abs_residual == 0;
  else
    ok = report.max_abs_residual <= tolerance;
  report.verdict = ok ? DesignVerdict::IsDesign : DesignVerdict::NotDesign;
  return report;
}

template <class Scalar>
nlohmann::ordered_json to_json(const DesignReport<Scalar>& r) {
  auto scalar = [](const Scalar& v) -> nlohmann::ordered_json {
    if constexpr (is_exact_v<Scalar>)
      return to_string(v);
    else
      return v;
  };
  nlohmann::ordered_json j;
  j["t"] = r.t;
  j["mode"] = std::string(mode_name(scalar_traits<Scalar>::mode));
  j["verdict"] = std::string(verdict_name(r.verdict));
  j["max_abs_residual"] = scalar(r.max_abs_residual);
  if constexpr (is_exact_v<Scalar>)
    j["tolerance"] = nullptr;
  else
    j["tolerance"] = r.tolerance;
  nlohmann::ordered_json res = nlohmann::ordered_json::object();
  for (const auto& [m, v] : r.residuals) res[m.key()] = scalar(v);
  j["residuals"] = std::move(res);
  return j;
}

// ---- classical configurations ---------------------------------------------

struct Polygon { int n; };
struct Simplex { int d; };
struct CrossPolytope { int d; };
struct Hypercube { int d; };
struct Icosahedron {};

using Family = std::variant<Polygon, Simplex, CrossPolytope, Hypercube, Icosahedron>;

namespace detail {

// cos/sin of 2*pi*k/n, exact at multiples of a quarter turn.
inline std::pair<double, double> unit_angle(long long k, long long n) {
  k %= n;
  if ((4 * k) % n == 0) {
    switch ((4 * k) / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(a), std::sin(a)};
}

inline void normalize(Point<double>& p) {
  double s = 0;
  for (double c : p) s += c * c;
  s = std::sqrt(s);
  for (double& c : p) c /= s;
}

}  // namespace detail

/// Regular n-gon on S^1 starting at (1, 0).
inline FloatConfiguration generate(const Polygon& f) {
  if (f.n < 1) throw InputError("polygon: n must be positive");
  FloatConfiguration x;
  x.dimension_d = 1;
  for (int k = 0; k < f.n; ++k) {
    auto [c, s] = detail::unit_angle(k, f.n);
    x.points.push_back({c, s});
  }
  return x;
}

/// Regular simplex: d+2 vertices on S^d, spanned by the Helmert basis of the
/// sum-zero hyperplane in R^{d+2}.
inline FloatConfiguration generate(const Simplex& f) {
  if (f.d < 1) throw InputError("simplex: d must be positive");
  const int m = f.d + 2;  // vertex count
  const double scale = std::sqrt(static_cast<double>(m) / static_cast<double>(m - 1));
  FloatConfiguration x;
  x.dimension_d = f.d;
  for (int i = 0; i < m; ++i) {
    Point<double> p(static_cast<std::size_t>(f.d + 1), 0.0);
    for (int k = 1; k <= f.d + 1; ++k) {
      const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
      double h = 0.0;
      if (i < k)
        h = 1.0 / norm;
      else if (i == k)
        h = -static_cast<double>(k) / norm;
      p[static_cast<std::size_t>(k - 1)] = h * scale;
    }
    detail::normalize(p);
    x.points.push_back(std::move(p));
  }
  return x;
}

/// The 2(d+1) points +-e_i, exact; ordered e_1, -e_1, e_2, -e_2, ...
inline ExactConfiguration generate(const CrossPolytope& f) {
  if (f.d < 1) throw InputError("cross-polytope: d must be positive");
  ExactConfiguration x;
  x.dimension_d = f.d;
  const auto dim = static_cast<std::size_t>(f.d + 1);
  for (std::size_t i = 0; i < dim; ++i) {
    for (int sign : {1, -1}) {
      Point<Rational> p(dim, Rational(0));
      p[i] = sign;
      x.points.push_back(std::move(p));
    }
  }
  return x;
}

/// The 2^{d+1} points (+-1, ..., +-1)/sqrt(d+1).
inline FloatConfiguration generate(const Hypercube& f) {
  if (f.d < 1) throw InputError("hypercube: d must be positive");
  if (f.d > 24) throw InputError("hypercube: d too large");
  const auto dim = static_cast<std::size_t>(f.d + 1);
  const double c = 1.0 / std::sqrt(static_cast<double>(dim));
  FloatConfiguration x;
  x.dimension_d = f.d;
  for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
    Point<double> p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = (mask >> (dim - 1 - i)) & 1U ? -c : c;
    x.points.push_back(std::move(p));
  }
  return x;
}

/// 12 vertices: cyclic permutations of (0, +-1, +-phi), normalized.
inline FloatConfiguration generate(const Icosahedron&) {
  const double phi = std::numbers::phi;
  FloatConfiguration x;
  x.dimension_d = 2;
  for (int cyc = 0; cyc < 3; ++cyc) {
    for (double a : {1.0, -1.0}) {
      for (double b : {phi, -phi}) {
        Point<double> base{0.0, a, b};
        Point<double> p(3);
        for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>((i + cyc) % 3)] = base[static_cast<std::size_t>(i)];
        detail::normalize(p);
        x.points.push_back(std::move(p));
      }
    }
  }
  return x;
}

inline PointConfiguration generate(const Family& family) {
  return std::visit([](const auto& f) -> PointConfiguration { return generate(f); }, family);
}

// ---- orthogonal alignment -------------------------------------------------

/// Root-mean-square mismatch sqrt((1/n) sum |sigma v_i - w_i|^2) minimized
/// over orthogonal sigma (Procrustes; reflections allowed). Points are
/// matched by index.
template <class ScalarX, class ScalarY>
double orbit_distance(const Configuration<ScalarX>& x, const Configuration<ScalarY>& y) {
  if (x.size() != y.size() || x.dimension_d != y.dimension_d)
    throw InputError("orbit_distance: configurations differ in size or dimension");
  const auto n = static_cast<Eigen::Index>(x.size());
  const auto dim = static_cast<Eigen::Index>(x.ambient_dim());
  Eigen::MatrixXd a(dim, n), b(dim, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      a(c, i) = to_double(x.points[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]);
      b(c, i) = to_double(y.points[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]);
    }
  }
  const Eigen::MatrixXd m = b * a.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd sigma = svd.matrixU() * svd.matrixV().transpose();
  const double sq = (sigma * a - b).squaredNorm();
  return std::sqrt(sq / static_cast<double>(n));
}

}  // namespace tdesign

#endif  // TDESIGN_DESIGN_HPP
