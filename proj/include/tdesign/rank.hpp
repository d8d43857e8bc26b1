#ifndef TDESIGN_RANK_HPP
#define TDESIGN_RANK_HPP

#include "tdesign/matrix.hpp"
#include "tdesign/scalar.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <utility>
#include <vector>

namespace tdesign {

inline constexpr double kDefaultRankTolerance = 1e-8;

template <class Scalar>
struct RankResult {
  std::size_t rank = 0;
  std::vector<std::vector<Scalar>> kernel;  // basis of the right null space
  std::vector<double> singular_values;      // float mode only, descending
  double tolerance = kDefaultRankTolerance; // relative; ignored in exact mode

  std::size_t kernel_dimension() const { return kernel.size(); }
};

namespace detail {

inline std::vector<BigInt> integer_row(const Matrix<Rational>& m, std::size_t r) {
  BigInt l = 1;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const BigInt den = boost::multiprecision::denominator(m(r, c));
    l = l / boost::multiprecision::gcd(l, den) * den;
  }
  std::vector<BigInt> row(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c)
    row[c] = boost::multiprecision::numerator(m(r, c)) * (l / boost::multiprecision::denominator(m(r, c)));
  return row;
}

}  // namespace detail

/// Exact rank and rational kernel basis by fraction-free (Bareiss) elimination
/// with row pivoting on the integer-scaled matrix.
inline RankResult<Rational> matrix_rank(const Matrix<Rational>& m, double = kDefaultRankTolerance) {
  RankResult<Rational> out;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::vector<BigInt>> a;
  a.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) a.push_back(detail::integer_row(m, r));

  std::vector<std::size_t> pivot_cols;
  BigInt prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    pivot_cols.push_back(c);
    ++r;
  }
  out.rank = pivot_cols.size();

  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_cols) is_pivot[c] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> x(cols, Rational(0));
    x[f] = 1;
    for (std::size_t pr = out.rank; pr-- > 0;) {
      const std::size_t pc = pivot_cols[pr];
      Rational s = 0;
      for (std::size_t c = pc + 1; c < cols; ++c)
        if (x[c] != 0) s += Rational(a[pr][c]) * x[c];
      x[pc] = -s / Rational(a[pr][pc]);
    }
    out.kernel.push_back(std::move(x));
  }
  return out;
}

/// Singular values above tolerance * largest count toward the rank; the kernel
/// is spanned by the trailing right singular vectors.
inline RankResult<double> matrix_rank(const Matrix<double>& m, double tolerance = kDefaultRankTolerance) {
  RankResult<double> out;
  out.tolerance = tolerance;
  const std::size_t cols = m.cols();
  if (m.rows() == 0 || cols == 0) {
    for (std::size_t f = 0; f < cols; ++f) {
      std::vector<double> e(cols, 0.0);
      e[f] = 1.0;
      out.kernel.push_back(std::move(e));
    }
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double largest = sv.size() ? sv(0) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (largest > 0.0 && sv(i) > tolerance * largest) ++out.rank;
  const Eigen::MatrixXd& v = svd.matrixV();
  for (std::size_t c = out.rank; c < cols; ++c) {
    std::vector<double> k(cols);
    for (std::size_t i = 0; i < cols; ++i)
      k[i] = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    out.kernel.push_back(std::move(k));
  }
  return out;
}

}  // namespace tdesign

#endif  // TDESIGN_RANK_HPP
