#ifndef SRM_NILPOTENT_HPP
#define SRM_NILPOTENT_HPP

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "srm/frames.hpp"
#include "srm/linalg.hpp"
#include "srm/structure.hpp"

namespace srm {

/// Anisotropic dilation delta_lambda(x) = (lambda^{w_1} x_1, ..., lambda^{w_n} x_n).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> dilate(const Eigen::MatrixBase<Derived>& x,
                                                                  typename Derived::Scalar lambda,
                                                                  const Weights& w) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = std::pow(lambda, w[static_cast<std::size_t>(i)]) * x[i];
  return out;
}

/// Polynomial privileged coordinates z around p. Built from linearly
/// adapted coordinates y = A^{-1}(x - p), A = frame at p, followed by the
/// triangular polynomial correction z_j = y_j - sum_k h_{j,k}(y_1..y_{j-1}).
/// The inverse is polynomial as well.
struct PrivilegedChart {
  std::vector<Rational> base;
  Weights weights;
  RatMat frame_matrix;                      // A
  std::vector<Polynomial> to_privileged;    // z(x)
  std::vector<Polynomial> from_privileged;  // x(z)
  bool affine = true;                       // no polynomial correction was needed

  int dim() const { return static_cast<int>(base.size()); }
  Eigen::VectorXd to_z(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd to_x(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  /// |det A|: the Jacobian of x(z), which is constant.
  double jacobian() const;
};

/// Fields X_1..X_m pushed to privileged coordinates and truncated to their
/// weighted-homogeneous part of degree -1.
struct NilpotentApprox {
  PrivilegedChart chart;
  std::vector<VectorField> full_fields;  // X_i written in z, untruncated
  std::vector<VectorField> fields;       // hat X_i
  Polynomial density;                    // density of mu in z coordinates
  std::vector<int> growth;
  int Q = 0;

  const Weights& weights() const { return chart.weights; }
  int dim() const { return chart.dim(); }
  /// omega(d/dz_1, ..., d/dz_n) at the base point.
  double density_at_origin() const;
};

/// Weighted order of f at p: least s with X_{i_1}...X_{i_s} f (p) != 0.
/// Returns max_order + 1 when every word up to max_order vanishes.
int weighted_order_at(const std::vector<VectorField>& family, const Polynomial& f, std::span<const Rational> p,
                      int max_order);

PrivilegedChart privileged_chart(const SRStructure& s, const std::vector<Rational>& p, const AdaptedFrame& frame);
NilpotentApprox nilpotentize(const SRStructure& s, const PrivilegedChart& chart);
/// Adapted frame of maximal omega-volume at p.
AdaptedFrame max_volume_frame(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p);
/// Flag, frame, chart and truncation in one call. Uses the frame of maximal
/// omega-volume.
NilpotentApprox nilpotent_approximation(const SRStructure& s, const std::vector<Rational>& p);

/// Exact check that each component k of every hat X_i satisfies
/// hat X_i^k(delta_lambda z) = lambda^{w_k - 1} hat X_i^k(z), with lambda an
/// extra polynomial variable.
bool is_dilation_homogeneous(const std::vector<VectorField>& fields, const Weights& w);

/// The nilpotent approximation as a structure on T_pM (z coordinates) with
/// the constant density omega(d/dz)|_0.
SRStructure nilpotent_structure(const NilpotentApprox& approx, double box_halfwidth = 2.0);
/// Blow-up of the structure at scale eps in privileged coordinates:
/// fields eps (delta_{1/eps})_* X_i and density rho(delta_eps z). The unit
/// ball of this structure is delta_{1/eps} B(p, eps).
SRStructure blowup_structure(const NilpotentApprox& approx, const Rational& eps, double box_halfwidth = 2.0);

}  // namespace srm

#endif  // SRM_NILPOTENT_HPP
