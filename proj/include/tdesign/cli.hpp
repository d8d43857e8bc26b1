#ifndef TDESIGN_CLI_HPP
#define TDESIGN_CLI_HPP

#include "tdesign/bound.hpp"
#include "tdesign/configuration.hpp"
#include "tdesign/design.hpp"
#include "tdesign/rigidity.hpp"
#include "tdesign/system.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace tdesign::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kInputError = 2 };

struct RunConfiguration {
  std::string subcommand;
  std::string input;
  std::string output;
  std::string export_path;
  std::string family;
  std::string direction = "auto";
  std::string t_range;
  std::string d_range;
  int t = 0;
  int d = 0;
  int family_n = 0;
  long long n = -1;
  double tolerance = kDefaultDesignTolerance;
  double rank_tolerance = kDefaultRankTolerance;
  bool force_exact = false;
  bool force_float = false;
  std::uint64_t seed = 1;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write output file '" + path + "'");
  out << text;
}

inline PointConfiguration load(const RunConfiguration& rc) {
  PointConfiguration x = parse_configuration(read_file(rc.input));
  if (rc.force_exact) {
    x = std::visit([](const auto& c) -> PointConfiguration { return to_exact(c); }, x);
  } else if (rc.force_float) {
    x = std::visit([](const auto& c) -> PointConfiguration { return to_float(c); }, x);
  }
  return x;
}

inline unsigned require_t(const RunConfiguration& rc) {
  if (rc.t < 1) throw InputError("--t: must be a positive integer");
  return static_cast<unsigned>(rc.t);
}

inline std::pair<int, int> parse_range(const std::string& text, const char* flag) {
  auto bad = [&] { return InputError(std::string(flag) + ": expected N or A:B, got '" + text + "'"); };
  try {
    std::size_t used = 0;
    auto colon = text.find(':');
    if (colon == std::string::npos) {
      int v = std::stoi(text, &used);
      if (used != text.size()) throw bad();
      return {v, v};
    }
    int a = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw bad();
    std::string rest = text.substr(colon + 1);
    int b = std::stoi(rest, &used);
    if (used != rest.size() || b < a) throw bad();
    return {a, b};
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw bad();
  }
}

inline void emit(std::ostream& out, const nlohmann::ordered_json& j) { out << j.dump() << '\n'; }

template <class Scalar>
double jacobian_fd_error(const PolynomialSystem<Scalar>& s, std::uint64_t seed) {
  const auto fs = build_pinned_system(to_float(s.configuration(s.origin)), s.t, s.permutation);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1e-2);
  Assignment<double> a = fs.origin;
  for (double& v : a.values) v += noise(rng);
  const auto analytic = jacobian(fs, a);
  double worst = 0.0;
  const double h = 1e-6;
  for (std::size_t c = 0; c < fs.variable_count(); ++c) {
    Assignment<double> plus = a, minus = a;
    plus.values[c] += h;
    minus.values[c] -= h;
    const auto rp = evaluate(fs, plus);
    const auto rm = evaluate(fs, minus);
    for (std::size_t r = 0; r < rp.size(); ++r)
      worst = std::max(worst, std::fabs((rp[r] - rm[r]) / (2 * h) - analytic(r, c)));
  }
  return worst;
}

inline int cmd_gen(const RunConfiguration& rc, std::ostream& out) {
  Family family;
  if (rc.family == "polygon") {
    family = Polygon{rc.family_n};
  } else if (rc.family == "simplex") {
    family = Simplex{rc.d};
  } else if (rc.family == "cross-polytope") {
    family = CrossPolytope{rc.d};
  } else if (rc.family == "hypercube") {
    family = Hypercube{rc.d};
  } else if (rc.family == "icosahedron") {
    family = Icosahedron{};
  } else {
    throw InputError("family: unknown family '" + rc.family +
                     "' (polygon, simplex, cross-polytope, hypercube, icosahedron)");
  }
  const PointConfiguration x = generate(family);
  const auto doc = to_json(x);
  if (rc.output.empty()) {
    emit(out, doc);
  } else {
    write_file(rc.output, doc.dump(2) + "\n");
    nlohmann::ordered_json j;
    j["output"] = rc.output;
    j["family"] = rc.family;
    j["points"] = std::visit([](const auto& c) { return c.size(); }, x);
    j["mode"] = std::string(mode_name(mode_of(x)));
    emit(out, j);
  }
  return kOk;
}

inline int cmd_verify(const RunConfiguration& rc, std::ostream& out) {
  const auto x = load(rc);
  const unsigned t = require_t(rc);
  return std::visit(
      [&](const auto& c) {
        const auto report = verify_design(c, t, rc.tolerance);
        emit(out, to_json(report));
        return report.is_design() ? kOk : kNegative;
      },
      x);
}

inline int cmd_system(const RunConfiguration& rc, std::ostream& out, std::ostream& err) {
  const auto x = load(rc);
  const unsigned t = require_t(rc);
  return std::visit(
      [&](const auto& c) {
        const auto s = build_system(c, t);
        if (!s.origin_is_design)
          err << "warning: configuration is not a " << t << "-design; system built anyway\n";
        const auto res = evaluate(s, s.origin);
        double worst = 0.0;
        for (const auto& r : res) worst = std::max(worst, std::fabs(to_double(r)));
        nlohmann::ordered_json j;
        j["d"] = s.d;
        j["n"] = s.n;
        j["t"] = s.t;
        j["mode"] = std::string(mode_name(std::decay_t<decltype(c)>::mode));
        j["k"] = s.variable_count();
        j["sphere_equations"] = s.sphere_equation_count;
        j["design_equations"] = s.design_monomials.size();
        j["equations"] = s.equation_count();
        j["max_degree"] = s.max_degree();
        j["permutation"] = s.permutation;
        j["origin_is_design"] = s.origin_is_design;
        j["origin_max_abs_residual"] = worst;
        j["seed"] = rc.seed;
        j["jacobian_fd_max_error"] = jacobian_fd_error(s, rc.seed);
        if (!rc.export_path.empty()) {
          write_file(rc.export_path, export_system(s));
          j["export"] = rc.export_path;
        }
        emit(out, j);
        return kOk;
      },
      x);
}

inline int cmd_rigidity(const RunConfiguration& rc, std::ostream& out) {
  const auto x = load(rc);
  CertifyOptions opt;
  opt.design_tolerance = rc.tolerance;
  opt.rank_tolerance = rc.rank_tolerance;
  emit(out, to_json(certify(x, require_t(rc), opt)));
  return kOk;
}

inline int cmd_flex(const RunConfiguration& rc, std::ostream& out) {
  const auto x = load(rc);
  const unsigned t = require_t(rc);
  return std::visit(
      [&](const auto& c) {
        auto pins = select_pins(c);
        const auto s = build_pinned_system(pins.configuration, t, pins.permutation);
        const auto fs = build_pinned_system(to_float(pins.configuration), t, pins.permutation);
        const auto kernel = pinned_kernel(s, rc.rank_tolerance);
        std::vector<std::vector<double>> dirs;
        for (const auto& v : kernel.kernel) {
          std::vector<double> dv;
          for (const auto& e : v) dv.push_back(to_double(e));
          dirs.push_back(tdesign::detail::normalized(std::move(dv)));
        }
        nlohmann::ordered_json j;
        j["k"] = s.variable_count();
        j["jacobian_rank"] = kernel.rank;
        j["kernel_dimension"] = kernel.kernel_dimension();
        std::vector<std::pair<std::size_t, int>> trials;
        if (rc.direction == "auto") {
          for (std::size_t i = 0; i < dirs.size(); ++i) {
            trials.emplace_back(i, 1);
            trials.emplace_back(i, -1);
          }
        } else {
          std::size_t idx = 0;
          try {
            std::size_t used = 0;
            idx = std::stoul(rc.direction, &used);
            if (used != rc.direction.size()) throw std::invalid_argument("");
          } catch (const std::exception&) {
            throw InputError("--direction: expected 'auto' or a kernel index, got '" + rc.direction + "'");
          }
          if (idx >= dirs.size())
            throw InputError("--direction: index " + std::to_string(idx) + " out of range (kernel dimension " +
                             std::to_string(dirs.size()) + ")");
          trials.emplace_back(idx, 1);
        }
        j["result"] = nullptr;
        for (auto [i, sign] : trials) {
          auto d = dirs[i];
          for (double& v : d) v *= sign;
          const FlexResult r = flex_search(fs, d);
          j["direction_index"] = i;
          j["direction_sign"] = sign;
          j["result"] = to_json(r);
          if (r.success) {
            j["witness"] = to_json(fs.configuration_in_input_order(r.assignment));
            break;
          }
        }
        emit(out, j);
        return kOk;
      },
      x);
}

inline int cmd_bound(const RunConfiguration& rc, std::ostream& out) {
  if (rc.t < 1 || rc.d < 1) throw InputError("--t and --d: must be positive integers");
  const auto t = static_cast<unsigned>(rc.t);
  const auto d = static_cast<unsigned>(rc.d);
  if (rc.n >= 0) {
    emit(out, to_json(theorem_check(t, d, static_cast<std::uint64_t>(rc.n))));
    return kOk;
  }
  const auto m = max_feasible_n(t, d);
  for (std::uint64_t n = d + 2; n <= m.n + 1; ++n) emit(out, to_json(theorem_check(t, d, n)));
  return kOk;
}

inline int cmd_max_n(const RunConfiguration& rc, std::ostream& out) {
  const auto [t0, t1] = parse_range(rc.t_range, "--t");
  const auto [d0, d1] = parse_range(rc.d_range, "--d");
  if (t0 < 1 || d0 < 1) throw InputError("--t and --d: must be positive");
  for (int t = t0; t <= t1; ++t) {
    for (int d = d0; d <= d1; ++d) {
      const auto m = max_feasible_n(static_cast<unsigned>(t), static_cast<unsigned>(d));
      nlohmann::ordered_json j;
      j["t"] = t;
      j["d"] = d;
      j["max_feasible_n"] = m.n;
      j["lhs_digits"] = decimal_digits(m.at_max.lhs);
      j["rhs_digits"] = decimal_digits(m.at_max.rhs);
      emit(out, j);
    }
  }
  return kOk;
}

}  // namespace detail

/// Entry point shared by the binary and the tests. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfiguration rc;
  CLI::App app{"Spherical t-design verification, rigidity certificates and root-count bounds", "tdesign"};
  app.require_subcommand(1, 1);

  auto add_mode = [&](CLI::App* sub) {
    auto* ex = sub->add_flag("--exact", rc.force_exact, "Convert input to exact rationals");
    auto* fl = sub->add_flag("--float", rc.force_float, "Convert input to double precision");
    ex->excludes(fl);
  };
  auto positive = CLI::PositiveNumber;

  auto* gen = app.add_subcommand("gen", "Write a classical configuration");
  gen->add_option("family", rc.family, "polygon | simplex | cross-polytope | hypercube | icosahedron")->required();
  gen->add_option("--n", rc.family_n, "Polygon vertex count");
  gen->add_option("--d", rc.d, "Sphere dimension");
  gen->add_option("-o,--output", rc.output, "Output path (default: standard output)");

  auto* verify = app.add_subcommand("verify", "Check the t-design property");
  verify->add_option("file", rc.input)->required();
  verify->add_option("--t", rc.t, "Strength")->required();
  verify->add_option("--tol", rc.tolerance, "Float tolerance")->check(positive);
  add_mode(verify);

  auto* system = app.add_subcommand("system", "Build the pinned polynomial system");
  system->add_option("file", rc.input)->required();
  system->add_option("--t", rc.t, "Strength")->required();
  system->add_option("--export", rc.export_path, "Write the system as text");
  system->add_option("--seed", rc.seed, "Seed for the finite-difference Jacobian check");
  add_mode(system);

  auto* rigidity = app.add_subcommand("rigidity", "Certify an isolated pinned root or find a flex");
  rigidity->add_option("file", rc.input)->required();
  rigidity->add_option("--t", rc.t, "Strength")->required();
  rigidity->add_option("--tol", rc.tolerance, "Design tolerance")->check(positive);
  rigidity->add_option("--rank-tol", rc.rank_tolerance, "Relative singular value threshold")->check(positive);
  add_mode(rigidity);

  auto* flex = app.add_subcommand("flex", "Run flex search along pinned Jacobian kernel directions");
  flex->add_option("file", rc.input)->required();
  flex->add_option("--t", rc.t, "Strength")->required();
  flex->add_option("--direction", rc.direction, "auto or a kernel basis index");
  flex->add_option("--rank-tol", rc.rank_tolerance, "Relative singular value threshold")->check(positive);
  add_mode(flex);

  auto* bound = app.add_subcommand("bound", "Evaluate the root-count inequality");
  bound->add_option("--t", rc.t)->required();
  bound->add_option("--d", rc.d)->required();
  bound->add_option("--n", rc.n, "Configuration size (default: table up to the first failure)");

  auto* maxn = app.add_subcommand("max-n", "Largest n allowed by the inequality");
  maxn->add_option("--t", rc.t_range, "N or A:B")->required();
  maxn->add_option("--d", rc.d_range, "N or A:B")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*gen) return detail::cmd_gen(rc, out);
    if (*verify) return detail::cmd_verify(rc, out);
    if (*system) return detail::cmd_system(rc, out, err);
    if (*rigidity) return detail::cmd_rigidity(rc, out);
    if (*flex) return detail::cmd_flex(rc, out);
    if (*bound) return detail::cmd_bound(rc, out);
    if (*maxn) return detail::cmd_max_n(rc, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace tdesign::cli

#endif  // TDESIGN_CLI_HPP
