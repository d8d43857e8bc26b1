#ifndef TDESIGN_RIGIDITY_HPP
#define TDESIGN_RIGIDITY_HPP

#include "tdesign/configuration.hpp"
#include "tdesign/design.hpp"
#include "tdesign/rank.hpp"
#include "tdesign/system.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace tdesign {

inline constexpr double kFlexConvergence = 1e-12;     // residual 2-norm
inline constexpr double kFlexMinDisplacement = 1e-6;  // max-coordinate deviation
inline constexpr double kWitnessDesignTolerance = 1e-10;
inline constexpr double kWitnessMinOrbitDistance = 1e-7;
inline constexpr unsigned kDefaultFlexIterations = 50;

/// Raised by certify when the input is not a t-design.
class NotADesignError : public InputError {
public:
  using InputError::InputError;
};

enum class RigidityStatus { PinnedIsolatedCertified, NotRigidFlexFound, Inconclusive };

inline std::string_view status_name(RigidityStatus s) {
  switch (s) {
    case RigidityStatus::PinnedIsolatedCertified: return "PINNED_ISOLATED_CERTIFIED";
    case RigidityStatus::NotRigidFlexFound: return "NOT_RIGID_FLEX_FOUND";
    default: return "INCONCLUSIVE";
  }
}

struct FlexOptions {
  std::vector<double> steps{1e-2, 1e-3, 1e-4};
  unsigned max_iterations = kDefaultFlexIterations;
};

struct FlexResult {
  bool converged = false;
  bool success = false;  // converged and displaced at least kFlexMinDisplacement
  Assignment<double> assignment;
  double residual_norm = std::numeric_limits<double>::infinity();
  double displacement = 0.0;  // max |assignment - start| over coordinates
  unsigned iterations = 0;
  double step = 0.0;          // schedule entry that produced this result
};

struct FlexWitness {
  FloatConfiguration configuration;  // input point order
  double max_design_residual = 0.0;
  double max_coordinate_deviation = 0.0;
  double orbit_distance = 0.0;
  std::size_t direction_index = 0;
  int direction_sign = 1;
};

struct RigidityCertificate {
  RigidityStatus status = RigidityStatus::Inconclusive;
  ScalarMode mode = ScalarMode::Float;
  std::size_t jacobian_rank = 0;
  std::size_t kernel_dimension = 0;
  std::size_t k = 0;
  std::size_t equations = 0;
  double rank_tolerance = kDefaultRankTolerance;
  bool near_rank_boundary = false;
  std::vector<std::size_t> permutation;
  std::vector<double> singular_values;
  std::optional<FlexWitness> witness;
  std::string note;
};

namespace detail {

inline double max_deviation(const Assignment<double>& a, const Assignment<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.values[i] - b.values[i]));
  return m;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline std::vector<double> normalized(std::vector<double> v) {
  const double n = norm2(v);
  for (double& x : v) x /= n;
  return v;
}

inline double min_pairwise_distance(const FloatConfiguration& x) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < x.ambient_dim(); ++c) {
        const double dlt = x.points[i][c] - x.points[j][c];
        s += dlt * dlt;
      }
      best = std::min(best, std::sqrt(s));
    }
  return best;
}

/// Undamped Gauss-Newton with minimum-norm least-squares steps.
inline FlexResult gauss_newton(const PolynomialSystem<double>& s, Assignment<double> a, unsigned max_iterations) {
  FlexResult r;
  for (unsigned it = 0;; ++it) {
    const std::vector<double> res = evaluate(s, a);
    r.residual_norm = norm2(res);
    r.iterations = it;
    if (!std::isfinite(r.residual_norm)) break;
    if (r.residual_norm <= kFlexConvergence) {
      r.converged = true;
      break;
    }
    if (it == max_iterations) break;
    const Eigen::MatrixXd j = to_eigen(jacobian(s, a));
    const Eigen::Map<const Eigen::VectorXd> rv(res.data(), static_cast<Eigen::Index>(res.size()));
    const Eigen::VectorXd step = j.completeOrthogonalDecomposition().solve(rv);
    for (std::size_t i = 0; i < a.size(); ++i) a.values[i] -= step(static_cast<Eigen::Index>(i));
  }
  r.assignment = std::move(a);
  return r;
}

}  // namespace detail

/// Searches for a nearby root along `direction` (unit norm, variable space),
/// trying each step size of the schedule until one lands on a distinct root.
/// Pins are constants of the system and never move.
inline FlexResult flex_search(const PolynomialSystem<double>& s, const std::vector<double>& direction,
                              const FlexOptions& options = {}) {
  if (direction.size() != s.variable_count())
    throw InputError("flex direction has " + std::to_string(direction.size()) +
                     " entries, system has " + std::to_string(s.variable_count()) + " variables");
  const double norm = detail::norm2(direction);
  if (!(norm > 0.0)) throw InputError("flex direction must be non-zero");
  if (std::fabs(norm - 1.0) > 1e-9) throw InputError("flex direction must have unit norm");
  if (options.steps.empty()) throw InputError("flex step schedule is empty");

  FlexResult last;
  for (double h : options.steps) {
    Assignment<double> start = s.origin;
    for (std::size_t i = 0; i < start.size(); ++i) start.values[i] += h * direction[i];
    FlexResult r = detail::gauss_newton(s, std::move(start), options.max_iterations);
    r.step = h;
    r.displacement = detail::max_deviation(r.assignment, s.origin);
    r.success = r.converged && r.displacement >= kFlexMinDisplacement;
    if (r.success) return r;
    last = std::move(r);
  }
  return last;
}

template <class Scalar>
FlexResult flex_search(const Configuration<Scalar>& x, unsigned t, const std::vector<double>& direction,
                       const FlexOptions& options = {}) {
  auto pins = select_pins(x);
  return flex_search(build_pinned_system(to_float(pins.configuration), t, pins.permutation), direction, options);
}

struct CertifyOptions {
  double design_tolerance = kDefaultDesignTolerance;
  double rank_tolerance = kDefaultRankTolerance;
  FlexOptions flex;
};

/// Kernel of the pinned Jacobian at the configuration's own coordinates.
template <class Scalar>
RankResult<Scalar> pinned_kernel(const PolynomialSystem<Scalar>& s, double rank_tolerance = kDefaultRankTolerance) {
  return matrix_rank(jacobian(s, s.origin), rank_tolerance);
}

/// Full-rank Jacobian at the pinned root certifies an isolated root. Otherwise
/// kernel directions are followed (both signs) looking for a distinct design
/// with identical pins, which refutes rigidity.
template <class Scalar>
RigidityCertificate certify(const Configuration<Scalar>& x, unsigned t, const CertifyOptions& options = {}) {
  validate(x);
  const auto report = verify_design(x, t, options.design_tolerance);
  if (!report.is_design())
    throw NotADesignError("configuration is not a " + std::to_string(t) +
                          "-design (max residual " + to_string(report.max_abs_residual) + ")");

  auto pins = select_pins(x);
  const auto system = build_pinned_system(pins.configuration, t, pins.permutation);
  const auto rank = pinned_kernel(system, options.rank_tolerance);

  RigidityCertificate cert;
  cert.mode = scalar_traits<Scalar>::mode;
  cert.k = system.variable_count();
  cert.equations = system.equation_count();
  cert.jacobian_rank = rank.rank;
  cert.kernel_dimension = rank.kernel_dimension();
  cert.rank_tolerance = options.rank_tolerance;
  cert.singular_values = rank.singular_values;
  cert.permutation = system.permutation;

  if (rank.rank == cert.k) {
    cert.status = RigidityStatus::PinnedIsolatedCertified;
    cert.note = "nonsingular pinned root";
    return cert;
  }

  if constexpr (!is_exact_v<Scalar>) {
    const double largest = rank.singular_values.empty() ? 0.0 : rank.singular_values.front();
    for (double sv : rank.singular_values) {
      const double ratio = largest > 0.0 ? sv / largest : 0.0;
      if (ratio >= options.rank_tolerance / 10.0 && ratio <= options.rank_tolerance * 10.0)
        cert.near_rank_boundary = true;
    }
    if (cert.near_rank_boundary) {
      cert.status = RigidityStatus::Inconclusive;
      cert.note = "singular value within a factor 10 of the rank threshold";
      return cert;
    }
  }

  const auto float_system = build_pinned_system(to_float(pins.configuration), t, pins.permutation);
  const FloatConfiguration xf = to_float(x);
  const double separation = detail::min_pairwise_distance(xf);

  for (std::size_t di = 0; di < rank.kernel.size(); ++di) {
    std::vector<double> dir;
    for (const auto& v : rank.kernel[di]) dir.push_back(to_double(v));
    dir = detail::normalized(std::move(dir));
    for (int sign : {1, -1}) {
      std::vector<double> signed_dir = dir;
      for (double& v : signed_dir) v *= sign;
      FlexResult fr = flex_search(float_system, signed_dir, options.flex);
      if (!fr.success) continue;

      FlexWitness w;
      w.configuration = float_system.configuration_in_input_order(fr.assignment);
      w.configuration.labels = x.labels;
      w.direction_index = di;
      w.direction_sign = sign;
      w.max_design_residual = verify_design(w.configuration, t, kWitnessDesignTolerance).max_abs_residual;
      double dev = 0.0;
      bool separated = true;
      for (std::size_t i = 0; i < xf.size(); ++i) {
        double s2 = 0.0;
        for (std::size_t c = 0; c < xf.ambient_dim(); ++c) {
          const double dlt = w.configuration.points[i][c] - xf.points[i][c];
          dev = std::max(dev, std::fabs(dlt));
          s2 += dlt * dlt;
        }
        if (xf.size() > 1 && std::sqrt(s2) >= separation / 2.0) separated = false;
      }
      w.max_coordinate_deviation = dev;
      w.orbit_distance = orbit_distance(xf, w.configuration);
      if (w.max_design_residual <= kWitnessDesignTolerance && dev >= kFlexMinDisplacement && separated &&
          w.orbit_distance > kWitnessMinOrbitDistance) {
        cert.status = RigidityStatus::NotRigidFlexFound;
        cert.note = "flex along kernel direction " + std::to_string(di);
        cert.witness = std::move(w);
        return cert;
      }
    }
  }
  cert.status = RigidityStatus::Inconclusive;
  cert.note = "singular pinned root, no flex found";
  return cert;
}

inline RigidityCertificate certify(const PointConfiguration& x, unsigned t, const CertifyOptions& options = {}) {
  return std::visit([&](const auto& c) { return certify(c, t, options); }, x);
}

inline nlohmann::ordered_json to_json(const FlexResult& r) {
  nlohmann::ordered_json j;
  j["converged"] = r.converged;
  j["success"] = r.success;
  j["residual_norm"] = r.residual_norm;
  j["displacement"] = r.displacement;
  j["iterations"] = r.iterations;
  j["step"] = r.step;
  j["assignment"] = r.assignment.values;
  return j;
}

inline nlohmann::ordered_json to_json(const RigidityCertificate& c) {
  nlohmann::ordered_json j;
  j["status"] = std::string(status_name(c.status));
  j["mode"] = std::string(mode_name(c.mode));
  j["k"] = c.k;
  j["equations"] = c.equations;
  j["jacobian_rank"] = c.jacobian_rank;
  j["kernel_dimension"] = c.kernel_dimension;
  if (c.mode == ScalarMode::Float) {
    j["rank_tolerance"] = c.rank_tolerance;
    j["singular_values"] = c.singular_values;
  } else {
    j["rank_tolerance"] = nullptr;
  }
  j["permutation"] = c.permutation;
  j["note"] = c.note;
  if (c.witness) {
    nlohmann::ordered_json w;
    w["configuration"] = to_json(c.witness->configuration);
    w["max_design_residual"] = c.witness->max_design_residual;
    w["max_coordinate_deviation"] = c.witness->max_coordinate_deviation;
    w["orbit_distance"] = c.witness->orbit_distance;
    w["direction_index"] = c.witness->direction_index;
    w["direction_sign"] = c.witness->direction_sign;
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

}  // namespace tdesign

#endif  // TDESIGN_RIGIDITY_HPP
