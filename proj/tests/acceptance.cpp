// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include "support.hpp"
#include "tdesign/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

namespace tdesign {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool condition, const std::string& what) {
  if (!condition) {
    o.detail += (o.pass ? "" : "; ") + what;
    o.pass = false;
  }
}

Outcome moments_vs_monte_carlo() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim_pick(1, 5);
  std::vector<std::vector<std::vector<double>>> samples(6);
  int worst_dim = 0;
  double worst_z = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto dim = static_cast<std::size_t>(dim_pick(rng));
    std::vector<unsigned> e(dim, 0);
    std::uniform_int_distribution<int> half(0, 4);
    // random even index with total degree <= 8
    unsigned budget = static_cast<unsigned>(half(rng));
    std::uniform_int_distribution<std::size_t> slot(0, dim - 1);
    for (unsigned b = 0; b < budget; ++b) e[slot(rng)] += 2;
    if (samples[dim].empty()) samples[dim] = testing::sphere_samples(dim, 1'000'000, 77 + dim);
    const auto mc = testing::monte_carlo_moment(samples[dim], e);
    const double exact = to_double(sphere_moment(Monomial(e), dim));
    const double err = std::fabs(mc.mean - exact);
    const double z = mc.standard_error > 0 ? err / mc.standard_error : (err == 0 ? 0.0 : 1e300);
    if (z > worst_z) {
      worst_z = z;
      worst_dim = static_cast<int>(dim);
    }
    require(o, z <= 4.0, "moment " + Monomial(e).key() + " off by " + std::to_string(z) + " SE");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  require(o, secs < 60.0, "took " + std::to_string(secs) + " s");
  if (o.pass)
    o.detail = "20 indices, worst " + std::to_string(worst_z) + " SE (dim " + std::to_string(worst_dim) + "), " +
               std::to_string(secs) + " s";
  return o;
}

Outcome classical_designs() {
  Outcome o;
  for (int d = 2; d <= 5; ++d) {
    const auto x = generate(CrossPolytope{d});
    const auto r3 = verify_design(x, 3);
    require(o, r3.is_design(), "cross-polytope d=" + std::to_string(d) + " not a 3-design");
    std::vector<unsigned> e(static_cast<std::size_t>(d + 1), 0);
    e[0] = 4;
    const Rational r = weyl_residual(x, Monomial(e));
    // 1/(d+1) - 3/((d+1)(d+3)); equals 1/3 - 1/5 = 2/15 at d = 2
    const Rational expected = Rational(1, d + 1) - Rational(3, (d + 1) * (d + 3));
    require(o, r == expected, "cross-polytope d=" + std::to_string(d) + " residual " + to_string(r));
    if (d == 2) require(o, r == Rational(2, 15), "cross-polytope d=2 residual is not 2/15");
    require(o, !verify_design(x, 4).is_design(), "cross-polytope d=" + std::to_string(d) + " is a 4-design");
  }
  for (int t = 1; t <= 10; ++t) {
    const auto x = generate(Polygon{t + 1});
    require(o, verify_design(x, static_cast<unsigned>(t), 1e-9).is_design(),
            std::to_string(t + 1) + "-gon not a " + std::to_string(t) + "-design");
    const auto above = verify_design(x, static_cast<unsigned>(t + 1), 1e-9);
    require(o, !above.is_design() && above.max_abs_residual > 1e-3,
            std::to_string(t + 1) + "-gon counter-residual " + to_string(above.max_abs_residual));
  }
  require(o, verify_design(generate(Icosahedron{}), 5, 1e-9).is_design(), "icosahedron not a 5-design");
  if (o.pass) o.detail = "cross-polytopes d=2..5, polygons t=1..10, icosahedron";
  return o;
}

Outcome system_sanity() {
  Outcome o;
  for (const auto& entry : testing::corpus()) {
    std::visit(
        [&](const auto& c) {
          const auto s = build_system(c, entry.t);
          const std::size_t n = c.size(), d1 = c.ambient_dim();
          const auto res = evaluate(s, s.origin);
          for (const auto& r : res) {
            if constexpr (is_exact_v<std::decay_t<decltype(r)>>)
              require(o, r == 0, entry.name + ": non-zero exact residual");
            else
              require(o, std::fabs(r) <= 1e-9, entry.name + ": residual " + to_string(r));
          }
          const BigInt m = binomial(entry.t + static_cast<unsigned>(d1), static_cast<unsigned>(d1));
          require(o, BigInt(s.equation_count()) == BigInt(n - d1) + m - 1, entry.name + ": equation count");
          require(o, s.variable_count() == d1 * (n - d1), entry.name + ": variable count");
        },
        entry.configuration);
  }
  if (o.pass) o.detail = std::to_string(testing::corpus().size()) + " corpus systems";
  return o;
}

Outcome jacobian_finite_differences() {
  Outcome o;
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g(0.0, 0.05);
  double worst = 0.0;
  for (const auto& entry : testing::corpus()) {
    const FloatConfiguration x = std::visit([](const auto& c) { return to_float(c); }, entry.configuration);
    const auto s = build_system(x, entry.t);
    for (int trial = 0; trial < 10; ++trial) {
      Assignment<double> a = s.origin;
      for (double& v : a.values) v += g(rng);
      const auto an = jacobian(s, a);
      const double h = 1e-6;
      for (std::size_t c = 0; c < a.size(); ++c) {
        auto p = a, m = a;
        p.values[c] += h;
        m.values[c] -= h;
        const auto rp = evaluate(s, p), rm = evaluate(s, m);
        for (std::size_t r = 0; r < rp.size(); ++r)
          worst = std::max(worst, std::fabs((rp[r] - rm[r]) / (2 * h) - an(r, c)));
      }
    }
  }
  require(o, worst <= 1e-5, "max entry error " + to_string(worst));
  if (o.pass) o.detail = "max entry error " + to_string(worst);
  return o;
}

Outcome permutation_symmetry() {
  Outcome o;
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 0.1);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 20);
  std::size_t checks = 0;
  for (const auto& entry : testing::corpus()) {
    std::visit(
        [&](const auto& c) {
          using S = std::decay_t<decltype(c.points[0][0])>;
          const auto s = build_system(c, entry.t);
          const std::size_t blocks = s.free_points();
          Assignment<S> a = s.origin;
          for (auto& v : a.values) {
            if constexpr (is_exact_v<S>)
              v += Rational(num(rng), den(rng) * 100);
            else
              v += g(rng);
          }
          std::vector<std::size_t> tau(blocks);
          std::iota(tau.begin(), tau.end(), 0);
          for (int trial = 0; trial < 10; ++trial) {
            std::shuffle(tau.begin(), tau.end(), rng);
            const auto b = permute_blocks(a, tau, s.block_size());
            const auto ra = evaluate(s, a), rb = evaluate(s, b);
            for (std::size_t i = s.sphere_equation_count; i < ra.size(); ++i)
              require(o, ra[i] == rb[i], entry.name + ": g residual changed");
            std::vector<S> fa(ra.begin(), ra.begin() + static_cast<std::ptrdiff_t>(blocks));
            std::vector<S> fb(rb.begin(), rb.begin() + static_cast<std::ptrdiff_t>(blocks));
            std::sort(fa.begin(), fa.end());
            std::sort(fb.begin(), fb.end());
            require(o, fa == fb, entry.name + ": f multiset changed");
            ++checks;
          }
        },
        entry.configuration);
  }
  if (o.pass) o.detail = std::to_string(checks) + " permutations";
  return o;
}

Outcome rigidity_verdicts() {
  Outcome o;
  const auto tri = certify(generate(Polygon{3}), 2);
  require(o, tri.status == RigidityStatus::PinnedIsolatedCertified && tri.jacobian_rank == 2 && tri.k == 2,
          "triangle: " + std::string(status_name(tri.status)));

  const auto square = generate(Polygon{4});
  const auto sq = certify(square, 3);
  if (sq.status == RigidityStatus::PinnedIsolatedCertified) {
    require(o, sq.jacobian_rank == sq.k && !sq.witness, "square: certified without full rank");
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> dir(sq.k);
      double s = 0;
      for (double& v : dir) {
        v = g(rng);
        s += v * v;
      }
      for (double& v : dir) v /= std::sqrt(s);
      const auto r = flex_search(square, 3, dir);
      require(o, !r.success && r.displacement < 1e-9, "square: flex found despite full rank");
    }
  } else if (sq.status == RigidityStatus::NotRigidFlexFound) {
    require(o, sq.witness && sq.witness->max_design_residual <= 1e-10, "square: invalid witness");
  }

  const auto pairs = testing::antipodal_pairs();
  const auto ap = certify(pairs, 1);
  const std::string ap_status(status_name(ap.status));
  require(o, ap.status == RigidityStatus::NotRigidFlexFound,
          "antipodal pairs: " + ap_status + " (rank " + std::to_string(ap.jacobian_rank) + " of k=" +
              std::to_string(ap.k) + "; spanning pins fix the angle between pairs, root is nonsingular)");
  if (ap.witness) {
    const auto& w = *ap.witness;
    require(o, w.max_design_residual <= 1e-10, "antipodal pairs: witness residual");
    require(o, w.max_coordinate_deviation >= 1e-6, "antipodal pairs: displacement");
    for (std::size_t i = 0; i < pairs.ambient_dim(); ++i) {
      const auto idx = ap.permutation[i];
      require(o, w.configuration.points[idx] == pairs.points[idx], "antipodal pairs: pins moved");
    }
  }
  if (o.pass)
    o.detail = "triangle certified; square " + std::string(status_name(sq.status)) + "; antipodal pairs flex";
  return o;
}

BigInt naive_power_side(unsigned t, unsigned d, unsigned n) {
  const unsigned tp = std::max(t, 2u);
  BigInt v = tp;
  for (unsigned i = 1; i < (d + 1) * (n - d - 1); ++i) v *= 2 * tp - 1;
  return v;
}

BigInt naive_factorial_side(unsigned d, unsigned n) {
  BigInt v = 1;
  for (unsigned i = 2; i <= n - d - 1; ++i) v *= i;
  return v;
}

Outcome bound_arithmetic() {
  Outcome o;
  require(o, milnor_bound(2, 1) == 2 && milnor_bound(2, 4) == 54 && milnor_bound(3, 2) == 15, "milnor spot values");
  require(o, theorem_check(2, 1, 23).holds, "theorem_check(2,1,23) should hold");
  require(o, !theorem_check(2, 1, 24).holds, "theorem_check(2,1,24) should fail");
  const auto m = max_feasible_n(2, 1);
  require(o, m.n == 23, "max_feasible_n(2,1) = " + std::to_string(m.n));
  unsigned naive_best = 0;
  for (unsigned n = 3; n <= m.scan_stop + 50; ++n) {
    const bool holds = naive_power_side(2, 1, n) >= naive_factorial_side(1, n);
    if (holds) naive_best = n;
    const auto r = theorem_check(2, 1, n);
    require(o, r.lhs == naive_power_side(2, 1, n) && r.rhs == naive_factorial_side(1, n),
            "fast/naive mismatch at n=" + std::to_string(n));
  }
  require(o, naive_best == 23, "naive scan gives " + std::to_string(naive_best));
  // crossing: first failing n with n-d-1 > (2t'-1)^(d+1) = 9, then 50 more
  for (std::uint64_t n = m.scan_stop; n < m.scan_stop + 50; ++n)
    require(o, !theorem_check(2, 1, n).holds, "inequality holds again at n=" + std::to_string(n));
  if (o.pass) o.detail = "max_feasible_n(2,1)=23, failure persists n=" + std::to_string(m.scan_stop) + ".." +
                         std::to_string(m.scan_stop + 49);
  return o;
}

Outcome export_round_trip() {
  Outcome o;
  std::mt19937_64 rng(88);
  std::normal_distribution<double> g(0.0, 0.4);
  std::uniform_int_distribution<int> num(-60, 60), den(1, 50);
  for (const auto& entry : testing::corpus()) {
    std::visit(
        [&](const auto& c) {
          using S = std::decay_t<decltype(c.points[0][0])>;
          const auto s = build_system(c, entry.t);
          const auto back = import_system<S>(export_system(s));
          require(o, back.variables == s.equations.variables, entry.name + ": variables differ");
          for (int trial = 0; trial < 10; ++trial) {
            Assignment<S> a;
            for (std::size_t i = 0; i < s.variable_count(); ++i) {
              if constexpr (is_exact_v<S>)
                a.values.push_back(Rational(num(rng), den(rng)));
              else
                a.values.push_back(g(rng));
            }
            require(o, evaluate(s, a) == evaluate(back, a), entry.name + ": residuals differ after import");
          }
        },
        entry.configuration);
  }
  if (o.pass) o.detail = "10 assignments per corpus system, bitwise equal";
  return o;
}

Outcome cli_determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "tdesign_acceptance";
  std::filesystem::create_directories(dir);
  auto run = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return std::to_string(code) + "\n" + out.str();
  };
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  struct Gen { std::string name; std::vector<std::string> args; unsigned t; };
  const std::vector<Gen> gens{{"triangle", {"polygon", "--n", "3"}, 2},
                              {"square", {"polygon", "--n", "4"}, 3},
                              {"pentagon", {"polygon", "--n", "5"}, 4},
                              {"cross2", {"cross-polytope", "--d", "2"}, 3},
                              {"simplex2", {"simplex", "--d", "2"}, 2},
                              {"cube2", {"hypercube", "--d", "2"}, 3},
                              {"ico", {"icosahedron"}, 5}};
  std::size_t commands = 0;
  for (const auto& g : gens) {
    std::vector<std::string> base{"gen"};
    base.insert(base.end(), g.args.begin(), g.args.end());
    const auto f1 = dir / (g.name + "_1.json");
    const auto f2 = dir / (g.name + "_2.json");
    auto a1 = base, a2 = base;
    a1.insert(a1.end(), {"-o", f1.string()});
    a2.insert(a2.end(), {"-o", f2.string()});
    run(a1);
    run(a2);
    require(o, slurp(f1) == slurp(f2), g.name + ": gen output differs");
    require(o, run(base) == run(base), g.name + ": gen stdout differs");
    const std::string cfg = f1.string(), ts = std::to_string(g.t);
    const auto e1 = dir / (g.name + "_1.txt");
    const auto e2 = dir / (g.name + "_2.txt");
    const std::vector<std::vector<std::string>> cmds{
        {"verify", cfg, "--t", ts},
        {"verify", cfg, "--t", std::to_string(g.t + 1)},
        {"rigidity", cfg, "--t", ts},
        {"flex", cfg, "--t", "1"},
        {"system", cfg, "--t", ts, "--seed", "3"}};
    for (const auto& c : cmds) {
      require(o, run(c) == run(c), g.name + ": " + c[0] + " output differs");
      ++commands;
    }
    const std::string s1 = run({"system", cfg, "--t", ts, "--export", e1.string()});
    const std::string s2 = run({"system", cfg, "--t", ts, "--export", e2.string()});
    require(o, slurp(e1) == slurp(e2), g.name + ": exported system differs");
    commands += 3;
  }
  for (const auto& c : std::vector<std::vector<std::string>>{
           {"bound", "--t", "2", "--d", "1", "--n", "24"}, {"bound", "--t", "3", "--d", "1"},
           {"max-n", "--t", "1:3", "--d", "1:2"}}) {
    require(o, run(c) == run(c), c[0] + ": output differs");
    ++commands;
  }
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = std::to_string(commands) + " command pairs byte-identical";
  return o;
}

}  // namespace
}  // namespace tdesign

int main() {
  using namespace tdesign;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 moment correctness", moments_vs_monte_carlo},
      {"AC2 classical designs", classical_designs},
      {"AC3 system sanity", system_sanity},
      {"AC4 jacobian vs finite differences", jacobian_finite_differences},
      {"AC5 block permutation symmetry", permutation_symmetry},
      {"AC6 rigidity verdicts", rigidity_verdicts},
      {"AC7 bound arithmetic", bound_arithmetic},
      {"AC8 export round-trip", export_round_trip},
      {"AC9 CLI determinism", cli_determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
    failures += o.pass ? 0 : 1;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
