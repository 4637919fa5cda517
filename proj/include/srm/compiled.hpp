#ifndef SRM_COMPILED_HPP
#define SRM_COMPILED_HPP

#include <Eigen/Core>
#include <vector>

#include "srm/polynomial.hpp"
#include "srm/vector_field.hpp"

namespace srm {

/// Flattened polynomial for fast floating-point evaluation.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const Polynomial& p);

  int max_exponent() const { return max_exp_; }
  bool is_zero() const { return coef_.empty(); }

  /// powers(j, e) must hold x_j^e for e <= max_exponent().
  template <typename Scalar>
  Scalar eval(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& powers) const {
    Scalar s(0);
    const std::size_t n = static_cast<std::size_t>(nvars_);
    for (std::size_t t = 0; t < coef_.size(); ++t) {
      Scalar term(coef_[t]);
      const int* e = &exps_[t * n];
      for (std::size_t j = 0; j < n; ++j)
        if (e[j]) term *= powers(static_cast<Eigen::Index>(j), e[j]);
      s += term;
    }
    return s;
  }

 private:
  int nvars_ = 0;
  int max_exp_ = 0;
  std::vector<double> coef_;
  std::vector<int> exps_;
};

/// X_1..X_m with first derivatives, compiled for repeated evaluation.
class CompiledFamily {
 public:
  CompiledFamily() = default;
  explicit CompiledFamily(const std::vector<VectorField>& fields);

  int dim() const { return n_; }
  int m() const { return m_; }

  /// n x m matrix with column i = X_i(q).
  void fields(const Eigen::Ref<const Eigen::VectorXd>& q, Eigen::MatrixXd& X) const;
  /// Fields plus Jacobians: DX[i](k, j) = d_j X_i^k.
  void fields_and_jacobians(const Eigen::Ref<const Eigen::VectorXd>& q, Eigen::MatrixXd& X,
                            std::vector<Eigen::MatrixXd>& DX) const;
  Eigen::MatrixXd fields(const Eigen::Ref<const Eigen::VectorXd>& q) const {
    Eigen::MatrixXd X;
    fields(q, X);
    return X;
  }

 private:
  void power_table(const Eigen::Ref<const Eigen::VectorXd>& q) const;

  int n_ = 0, m_ = 0, max_exp_ = 0;
  struct Slot {
    int i, k, j;  // field, component, derivative variable
    CompiledPoly poly;
  };
  std::vector<Slot> comp_;  // nonzero components
  std::vector<Slot> grad_;  // nonzero partial derivatives
  mutable Eigen::MatrixXd powers_;
};

}  // namespace srm

#endif  // SRM_COMPILED_HPP
