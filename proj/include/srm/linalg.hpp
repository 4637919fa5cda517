#ifndef SRM_LINALG_HPP
#define SRM_LINALG_HPP

#include <gmpxx.h>

#include <Eigen/Core>
#include <Eigen/SVD>
#include <optional>
#include <span>
#include <vector>

namespace Eigen {
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 30,
    MulCost = 60
  };
};
}  // namespace Eigen

namespace srm {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RatMat = Mat<mpq_class>;
using RatVec = Vec<mpq_class>;

inline RatMat columns_to_matrix(const std::vector<std::vector<mpq_class>>& cols, int rows) {
  RatMat m(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < rows; ++i) m(i, static_cast<Eigen::Index>(j)) = cols[j][i];
  return m;
}

inline Eigen::MatrixXd to_double(const RatMat& m) {
  Eigen::MatrixXd d(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) d(i, j) = m(i, j).get_d();
  return d;
}

/// Row echelon form in place by exact elimination; returns the rank.
inline int exact_row_reduce(RatMat& a) {
  int rank = 0;
  for (Eigen::Index c = 0; c < a.cols() && rank < a.rows(); ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = rank; r < a.rows(); ++r)
      if (a(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank) a.row(piv).swap(a.row(rank));
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r == rank || a(r, c) == 0) continue;
      mpq_class f = a(r, c) / a(rank, c);
      for (Eigen::Index k = c; k < a.cols(); ++k) a(r, k) -= f * a(rank, k);
    }
    ++rank;
  }
  return rank;
}

inline int exact_rank(RatMat a) { return exact_row_reduce(a); }

inline mpq_class exact_det(RatMat a) {
  const Eigen::Index n = a.rows();
  mpq_class det = 1;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = c; r < n; ++r)
      if (a(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      a.row(piv).swap(a.row(c));
      det = -det;
    }
    det *= a(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (a(r, c) == 0) continue;
      mpq_class f = a(r, c) / a(c, c);
      for (Eigen::Index k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return det;
}

/// Inverse of a square nonsingular matrix, or nullopt when singular.
inline std::optional<RatMat> exact_inverse(const RatMat& a) {
  const Eigen::Index n = a.rows();
  RatMat aug(n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < 2 * n; ++j) aug(i, j) = j < n ? a(i, j) : mpq_class(i == j - n ? 1 : 0);
  if (exact_row_reduce(aug) < n) return std::nullopt;
  for (Eigen::Index i = 0; i < n; ++i)
    if (aug(i, i) == 0) return std::nullopt;
  RatMat inv(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) inv(i, j) = aug(i, n + j) / aug(i, i);
  return inv;
}

inline RatMat exact_product(const RatMat& a, const RatMat& b) {
  RatMat c(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      mpq_class s = 0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline RatMat exact_transpose(const RatMat& a) {
  RatMat t(a.cols(), a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

/// Basis of the right null space, one column per free variable.
inline RatMat exact_nullspace(RatMat a) {
  const Eigen::Index cols = a.cols();
  int rank = exact_row_reduce(a);
  std::vector<Eigen::Index> pivot_col(rank, -1);
  std::vector<bool> is_pivot(cols, false);
  for (int r = 0; r < rank; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      if (a(r, c) != 0) {
        pivot_col[r] = c;
        is_pivot[c] = true;
        break;
      }
  RatMat ns(cols, cols - rank);
  Eigen::Index k = 0;
  for (Eigen::Index f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    for (Eigen::Index i = 0; i < cols; ++i) ns(i, k) = 0;
    ns(f, k) = 1;
    for (int r = 0; r < rank; ++r) ns(pivot_col[r], k) = -a(r, f) / a(r, pivot_col[r]);
    ++k;
  }
  return ns;
}

/// Numerical rank: singular values above tol times the largest one.
template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.template cast<double>());
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol * s[0]) ++r;
  return r;
}

}  // namespace srm

#endif  // SRM_LINALG_HPP
