#ifndef TDESIGN_SYSTEM_HPP
#define TDESIGN_SYSTEM_HPP

#include "tdesign/configuration.hpp"
#include "tdesign/design.hpp"
#include "tdesign/matrix.hpp"
#include "tdesign/moments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tdesign {

// ---- pin selection ----------------------------------------------------------

template <class Scalar>
struct PinSelection {
  Configuration<Scalar> configuration;  // reordered, pins first
  std::vector<std::size_t> permutation; // new index -> original index
  std::size_t span_rank = 0;
};

inline constexpr double kSpanTolerance = 1e-9;

namespace detail {

inline std::vector<std::size_t> spanning_indices(const ExactConfiguration& x) {
  const std::size_t dim = x.ambient_dim();
  std::vector<std::vector<Rational>> basis;  // echelon rows
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < x.size() && basis.size() < dim; ++i) {
    std::vector<Rational> v = x.points[i];
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Rational f = v[pivots[b]];
      if (f == 0) continue;
      for (std::size_t c = 0; c < dim; ++c) v[c] -= f * basis[b][c];
    }
    auto it = std::find_if(v.begin(), v.end(), [](const Rational& q) { return q != 0; });
    if (it == v.end()) continue;
    const auto p = static_cast<std::size_t>(it - v.begin());
    const Rational lead = v[p];
    for (auto& c : v) c /= lead;
    basis.push_back(std::move(v));
    pivots.push_back(p);
    chosen.push_back(i);
  }
  return chosen;
}

inline std::vector<std::size_t> spanning_indices(const FloatConfiguration& x) {
  const std::size_t dim = x.ambient_dim();
  std::vector<std::vector<double>> basis;  // orthonormal
  std::vector<std::size_t> chosen;
  std::vector<bool> used(x.size(), false);
  while (basis.size() < dim) {
    double best = kSpanTolerance;
    std::size_t best_index = x.size();
    std::vector<double> best_residual;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (used[i]) continue;
      std::vector<double> v = x.points[i];
      for (const auto& b : basis) {
        double dot = 0;
        for (std::size_t c = 0; c < dim; ++c) dot += v[c] * b[c];
        for (std::size_t c = 0; c < dim; ++c) v[c] -= dot * b[c];
      }
      double norm = 0;
      for (double c : v) norm += c * c;
      norm = std::sqrt(norm);
      // ties (up to rounding) go to the lower index
      if (norm > best * (1.0 + 1e-12) + 1e-15) {
        best = norm;
        best_index = i;
        best_residual = std::move(v);
      }
    }
    if (best_index == x.size()) break;
    for (double& c : best_residual) c /= best;
    basis.push_back(std::move(best_residual));
    chosen.push_back(best_index);
    used[best_index] = true;
  }
  return chosen;
}

}  // namespace detail

/// Relabels x so that the first d+1 points contain a maximal linearly
/// independent subset of x. Pins keep their relative input order, as do the
/// remaining points.
template <class Scalar>
PinSelection<Scalar> select_pins(const Configuration<Scalar>& x) {
  const std::size_t dim = x.ambient_dim();
  if (x.size() < dim)
    throw InputError("select_pins: need at least d+1 = " + std::to_string(dim) +
                     " points, got " + std::to_string(x.size()));
  std::vector<std::size_t> spanning = detail::spanning_indices(x);
  std::vector<bool> is_pin(x.size(), false);
  for (std::size_t i : spanning) is_pin[i] = true;
  for (std::size_t i = 0, filled = spanning.size(); i < x.size() && filled < dim; ++i) {
    if (!is_pin[i]) {
      is_pin[i] = true;
      ++filled;
    }
  }
  PinSelection<Scalar> out;
  out.span_rank = spanning.size();
  for (std::size_t i = 0; i < x.size(); ++i)
    if (is_pin[i]) out.permutation.push_back(i);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!is_pin[i]) out.permutation.push_back(i);
  out.configuration = permuted(x, out.permutation);
  return out;
}

// ---- polynomials ------------------------------------------------------------

template <class Scalar>
struct Term {
  Scalar coefficient{0};
  std::vector<std::pair<std::size_t, unsigned>> powers;  // (variable, exponent), sorted by variable

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [v, e] : powers) d += e;
    return d;
  }
};

template <class Scalar>
struct Polynomial {
  std::vector<Term<Scalar>> terms;

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& t : terms) d = std::max(d, t.degree());
    return d;
  }
};

template <class Scalar>
struct Assignment {
  std::vector<Scalar> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Named variables plus equations; the part of a system that survives export.
template <class Scalar>
struct EquationSet {
  std::vector<std::string> variables;
  std::vector<Polynomial<Scalar>> equations;
};

namespace detail {

template <class Scalar>
Scalar term_value(const Term<Scalar>& term, std::span<const Scalar> values) {
  Scalar v = term.coefficient;
  for (const auto& [var, e] : term.powers) v *= ipow(values[var], e);
  return v;
}

template <class Scalar>
void check_layout(std::size_t expected, std::size_t got) {
  if (expected != got)
    throw InputError("assignment has " + std::to_string(got) + " values, system has " +
                     std::to_string(expected) + " variables");
}

}  // namespace detail

/// Residuals in equation order. Floating sums are accumulated over sorted
/// term values so that reordering terms never changes a result bit.
template <class Scalar>
std::vector<Scalar> evaluate(const EquationSet<Scalar>& eqs, const Assignment<Scalar>& a) {
  detail::check_layout<Scalar>(eqs.variables.size(), a.size());
  std::vector<Scalar> out;
  out.reserve(eqs.equations.size());
  std::vector<Scalar> parts;
  for (const auto& poly : eqs.equations) {
    parts.clear();
    for (const auto& term : poly.terms) parts.push_back(detail::term_value<Scalar>(term, a.values));
    if constexpr (!is_exact_v<Scalar>) std::sort(parts.begin(), parts.end());
    Scalar sum(0);
    for (const auto& p : parts) sum += p;
    out.push_back(std::move(sum));
  }
  return out;
}

/// Analytic Jacobian, rows in equation order, one column per variable.
template <class Scalar>
Matrix<Scalar> jacobian(const EquationSet<Scalar>& eqs, const Assignment<Scalar>& a) {
  detail::check_layout<Scalar>(eqs.variables.size(), a.size());
  Matrix<Scalar> j(eqs.equations.size(), eqs.variables.size());
  for (std::size_t r = 0; r < eqs.equations.size(); ++r) {
    for (const auto& term : eqs.equations[r].terms) {
      for (std::size_t k = 0; k < term.powers.size(); ++k) {
        const auto [var, e] = term.powers[k];
        Scalar v = term.coefficient * Scalar(static_cast<long long>(e));
        for (std::size_t o = 0; o < term.powers.size(); ++o) {
          const auto [ov, oe] = term.powers[o];
          v *= ipow(a.values[ov], o == k ? oe - 1 : oe);
        }
        j(r, var) += v;
      }
    }
  }
  return j;
}

// ---- the pinned design system ---------------------------------------------

/// Points 1..d+1 (after pin selection) are constants; points d+2..n carry the
/// variables x_{i,j}. Equations: f_i = |x_i|^2 - 1 for each free point, then
/// g_s = sum_all P_s - n * moment(P_s) for every monomial of degree 1..t.
template <class Scalar>
struct PolynomialSystem {
  int d = 0;
  std::size_t n = 0;
  unsigned t = 0;
  std::vector<Point<Scalar>> pinned;
  std::vector<std::size_t> permutation;  // system point index -> input index
  std::vector<Monomial> design_monomials;
  std::size_t sphere_equation_count = 0;
  EquationSet<Scalar> equations;
  Assignment<Scalar> origin;  // the originating configuration's own coordinates
  bool origin_is_design = true;

  std::size_t block_size() const { return static_cast<std::size_t>(d) + 1; }
  std::size_t free_points() const { return n - pinned.size(); }
  std::size_t variable_count() const { return equations.variables.size(); }
  std::size_t equation_count() const { return equations.equations.size(); }
  unsigned max_degree() const { return std::max(t, 2u); }

  /// Reassembles a configuration (in system order) from pins plus an assignment.
  Configuration<Scalar> configuration(const Assignment<Scalar>& a) const {
    detail::check_layout<Scalar>(variable_count(), a.size());
    Configuration<Scalar> c;
    c.dimension_d = d;
    c.points = pinned;
    for (std::size_t i = 0; i < free_points(); ++i) {
      auto first = a.values.begin() + static_cast<std::ptrdiff_t>(i * block_size());
      c.points.emplace_back(first, first + static_cast<std::ptrdiff_t>(block_size()));
    }
    return c;
  }

  /// The same, relabeled back to the input's point order.
  Configuration<Scalar> configuration_in_input_order(const Assignment<Scalar>& a) const {
    Configuration<Scalar> sys = configuration(a);
    Configuration<Scalar> out;
    out.dimension_d = d;
    out.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.points[permutation[i]] = std::move(sys.points[i]);
    return out;
  }
};

inline std::string variable_name(std::size_t point, std::size_t coordinate) {
  return "x_" + std::to_string(point) + "_" + std::to_string(coordinate);
}

/// Builds the system treating the first d+1 points of c as the pins, with
/// `permutation` recording where each of c's points came from.
template <class Scalar>
PolynomialSystem<Scalar> build_pinned_system(const Configuration<Scalar>& c, unsigned t,
                                             std::vector<std::size_t> permutation) {
  if (t < 1) throw InputError("t must be at least 1");
  validate(c);
  const std::size_t dim = c.ambient_dim();
  if (c.size() < dim)
    throw InputError("system: need at least d+1 = " + std::to_string(dim) + " points, got " +
                     std::to_string(c.size()));
  if (permutation.size() != c.size()) throw InputError("system: permutation size mismatch");

  PolynomialSystem<Scalar> s;
  s.d = c.dimension_d;
  s.n = c.size();
  s.t = t;
  s.permutation = std::move(permutation);
  s.pinned.assign(c.points.begin(), c.points.begin() + static_cast<std::ptrdiff_t>(dim));
  s.origin_is_design = verify_design(c, t).is_design();

  const std::size_t free = s.n - dim;
  for (std::size_t i = 0; i < free; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      s.equations.variables.push_back(variable_name(dim + 1 + i, j + 1));
      s.origin.values.push_back(c.points[dim + i][j]);
    }

  for (std::size_t i = 0; i < free; ++i) {
    Polynomial<Scalar> f;
    for (std::size_t j = 0; j < dim; ++j) f.terms.push_back({Scalar(1), {{i * dim + j, 2u}}});
    f.terms.push_back({Scalar(-1), {}});
    s.equations.equations.push_back(std::move(f));
  }
  s.sphere_equation_count = free;

  for (auto& alpha : enumerate_monomials(dim, t)) {
    if (alpha.degree() == 0) continue;
    Polynomial<Scalar> g;
    for (std::size_t i = 0; i < free; ++i) {
      Term<Scalar> term{Scalar(1), {}};
      for (std::size_t j = 0; j < dim; ++j)
        if (alpha[j] != 0) term.powers.emplace_back(i * dim + j, alpha[j]);
      g.terms.push_back(std::move(term));
    }
    Scalar constant(0);
    for (const auto& p : s.pinned) constant += alpha.evaluate<Scalar>(p);
    Rational n_moment = Rational(static_cast<long long>(s.n)) * sphere_moment(alpha, dim);
    constant -= from_rational<Scalar>(n_moment);
    g.terms.push_back({std::move(constant), {}});
    s.equations.equations.push_back(std::move(g));
    s.design_monomials.push_back(std::move(alpha));
  }
  return s;
}

/// Pins a spanning subset (select_pins), then builds the system.
template <class Scalar>
PolynomialSystem<Scalar> build_system(const Configuration<Scalar>& x, unsigned t) {
  if (t < 1) throw InputError("t must be at least 1");
  validate(x);
  auto pins = select_pins(x);
  return build_pinned_system(pins.configuration, t, std::move(pins.permutation));
}

template <class Scalar>
std::vector<Scalar> evaluate(const PolynomialSystem<Scalar>& s, const Assignment<Scalar>& a) {
  return evaluate(s.equations, a);
}

template <class Scalar>
Matrix<Scalar> jacobian(const PolynomialSystem<Scalar>& s, const Assignment<Scalar>& a) {
  return jacobian(s.equations, a);
}

/// Moves block tau[i] of the assignment to block position i.
template <class Scalar>
Assignment<Scalar> permute_blocks(const Assignment<Scalar>& a, std::span<const std::size_t> tau,
                                  std::size_t block_size) {
  if (tau.size() * block_size != a.size())
    throw InputError("permute_blocks: permutation does not match the assignment layout");
  Assignment<Scalar> out;
  out.values.reserve(a.size());
  for (std::size_t i : tau)
    for (std::size_t j = 0; j < block_size; ++j) out.values.push_back(a.values[i * block_size + j]);
  return out;
}

// ---- text export / import -------------------------------------------------

namespace detail {

template <class Scalar>
bool is_one(const Scalar& c) { return c == Scalar(1); }

template <class Scalar>
std::string format_polynomial(const Polynomial<Scalar>& p, const std::vector<std::string>& vars) {
  std::string out;
  bool first = true;
  for (const auto& term : p.terms) {
    if (term.coefficient == Scalar(0)) continue;
    const bool negative = term.coefficient < Scalar(0);
    const Scalar magnitude = negative ? Scalar(-term.coefficient) : term.coefficient;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string body;
    if (!is_one(magnitude) || term.powers.empty()) body = to_string(magnitude);
    for (const auto& [var, e] : term.powers) {
      if (!body.empty()) body += '*';
      body += vars[var];
      if (e != 1) body += "^" + std::to_string(e);
    }
    out += body;
  }
  return first ? std::string("0") : out;
}

template <class Scalar>
Scalar parse_coefficient(const std::string& tok) {
  if constexpr (is_exact_v<Scalar>) {
    if (tok.find_first_of(".eE") != std::string::npos) return parse_decimal_exact(tok);
    return parse_rational(tok);
  } else {
    if (tok.find('/') != std::string::npos) return to_double(parse_rational(tok));
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw InputError("malformed coefficient '" + tok + "'");
    return v;
  }
}

template <class Scalar>
Term<Scalar> parse_term(const std::string& body, bool negative,
                        const std::unordered_map<std::string, std::size_t>& index) {
  Term<Scalar> term{Scalar(negative ? -1 : 1), {}};
  std::stringstream ss(body);
  std::string factor;
  while (std::getline(ss, factor, '*')) {
    if (factor.empty()) throw InputError("empty factor in term '" + body + "'");
    if (factor[0] == 'x') {
      unsigned e = 1;
      std::string name = factor;
      if (auto caret = factor.find('^'); caret != std::string::npos) {
        name = factor.substr(0, caret);
        e = static_cast<unsigned>(std::stoul(factor.substr(caret + 1)));
      }
      auto it = index.find(name);
      if (it == index.end()) throw InputError("unknown variable '" + name + "'");
      term.powers.emplace_back(it->second, e);
    } else {
      term.coefficient *= parse_coefficient<Scalar>(factor);
    }
  }
  std::sort(term.powers.begin(), term.powers.end());
  return term;
}

}  // namespace detail

/// Header line "vars: x_i_j ..." then one expanded polynomial per line.
template <class Scalar>
std::string export_system(const EquationSet<Scalar>& eqs) {
  std::string out = "vars:";
  for (const auto& v : eqs.variables) out += " " + v;
  out += '\n';
  for (const auto& p : eqs.equations) out += detail::format_polynomial(p, eqs.variables) + '\n';
  return out;
}

template <class Scalar>
std::string export_system(const PolynomialSystem<Scalar>& s) {
  return export_system(s.equations);
}

template <class Scalar>
EquationSet<Scalar> import_system(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("vars:", 0) != 0)
    throw InputError("system text: first line must start with 'vars:'");
  EquationSet<Scalar> eqs;
  std::unordered_map<std::string, std::size_t> index;
  {
    std::istringstream header(line.substr(5));
    std::string v;
    while (header >> v) {
      index.emplace(v, eqs.variables.size());
      eqs.variables.push_back(v);
    }
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string tok;
    Polynomial<Scalar> poly;
    bool negative = false;
    bool expect_term = true;
    try {
      while (ls >> tok) {
        if (tok == "+" || tok == "-") {
          if (expect_term && !poly.terms.empty()) throw InputError("dangling sign");
          negative = tok == "-";
          expect_term = true;
          continue;
        }
        bool neg = negative;
        if (tok[0] == '-') {
          neg = !neg;
          tok.erase(0, 1);
        }
        if (tok == "0" && poly.terms.empty()) {
          expect_term = false;
          continue;
        }
        poly.terms.push_back(detail::parse_term<Scalar>(tok, neg, index));
        negative = false;
        expect_term = false;
      }
    } catch (const std::exception& e) {
      throw InputError("system text line " + std::to_string(line_no) + ": " + e.what());
    }
    eqs.equations.push_back(std::move(poly));
  }
  return eqs;
}

}  // namespace tdesign

#endif  // TDESIGN_SYSTEM_HPP
