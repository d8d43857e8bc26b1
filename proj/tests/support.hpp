// Test-only helpers: independent oracles and the configuration corpus.
#ifndef TDESIGN_TESTS_SUPPORT_HPP
#define TDESIGN_TESTS_SUPPORT_HPP

#include "tdesign/tdesign.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace tdesign::testing {

/// Uniform samples on S^{dim-1} from normalized Gaussians.
inline std::vector<std::vector<double>> sphere_samples(std::size_t dim, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> out(count, std::vector<double>(dim));
  for (auto& p : out) {
    double s = 0.0;
    do {
      s = 0.0;
      for (auto& c : p) {
        c = g(rng);
        s += c * c;
      }
    } while (s == 0.0);
    s = std::sqrt(s);
    for (auto& c : p) c /= s;
  }
  return out;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

inline MonteCarloEstimate monte_carlo_moment(const std::vector<std::vector<double>>& samples,
                                             const std::vector<unsigned>& exponents) {
  double sum = 0.0, sum2 = 0.0;
  for (const auto& p : samples) {
    double v = 1.0;
    for (std::size_t i = 0; i < exponents.size(); ++i) v *= std::pow(p[i], static_cast<int>(exponents[i]));
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

/// Haar-ish random orthogonal matrix via QR of a Gaussian matrix.
inline Eigen::MatrixXd random_orthogonal(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ();
}

inline FloatConfiguration transformed(const FloatConfiguration& x, const Eigen::MatrixXd& q) {
  FloatConfiguration y = x;
  for (auto& p : y.points) {
    Eigen::Map<Eigen::VectorXd> v(p.data(), static_cast<Eigen::Index>(p.size()));
    Eigen::VectorXd w = q * v;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = w(static_cast<Eigen::Index>(i));
  }
  return y;
}

/// {e1, u, -e1, -u} with u at angle theta.
inline FloatConfiguration antipodal_pairs(double theta = std::numbers::pi / 3) {
  FloatConfiguration x;
  x.dimension_d = 1;
  x.points = {{1.0, 0.0}, {-1.0, 0.0}, {std::cos(theta), std::sin(theta)}, {-std::cos(theta), -std::sin(theta)}};
  return x;
}

/// Three antipodal pairs on S^1 at angles 0, theta1, theta2.
inline FloatConfiguration three_antipodal_pairs(double theta1 = 1.0, double theta2 = 2.2) {
  FloatConfiguration x;
  x.dimension_d = 1;
  for (double a : {0.0, theta1, theta2}) {
    x.points.push_back({std::cos(a), std::sin(a)});
    x.points.push_back({-std::cos(a), -std::sin(a)});
  }
  return x;
}

struct CorpusEntry {
  std::string name;
  PointConfiguration configuration;
  unsigned t;
};

inline std::vector<CorpusEntry> corpus() {
  return {
      {"triangle", generate(Polygon{3}), 2},
      {"square", generate(Polygon{4}), 3},
      {"pentagon", generate(Polygon{5}), 4},
      {"cross-polytope-2", generate(CrossPolytope{2}), 3},
      {"cross-polytope-3", generate(CrossPolytope{3}), 3},
      {"simplex-2", generate(Simplex{2}), 2},
      {"hypercube-2", generate(Hypercube{2}), 3},
      {"icosahedron", generate(Icosahedron{}), 5},
      {"antipodal-pairs", antipodal_pairs(), 1},
      {"three-antipodal-pairs", three_antipodal_pairs(), 1},
  };
}

}  // namespace tdesign::testing

#endif  // TDESIGN_TESTS_SUPPORT_HPP
