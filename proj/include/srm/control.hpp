#ifndef SRM_CONTROL_HPP
#define SRM_CONTROL_HPP

#include <Eigen/Core>
#include <cstdint>

#include "srm/compiled.hpp"

namespace srm {

struct ControlOptions {
  int intervals = 32;  // K piecewise-constant pieces on [0, 1]
  int substeps = 4;    // RK4 steps per piece
  int starts = 16;
  int max_iterations = 80;
  double tol = 1e-9;
  std::uint64_t seed = 1;
};

struct ControlResult {
  bool converged = false;
  double length = 0;    // sum_k |u_k| / K
  double energy = 0;    // sum_k |u_k|^2 / K
  double residual = 0;  // |endpoint - target|
  Eigen::MatrixXd controls;  // m x K
};

/// Endpoint of q' = sum_i u_i(t) X_i(q), q(0) = p, for controls u (m x K).
Eigen::VectorXd control_endpoint(const CompiledFamily& fam, const Eigen::Ref<const Eigen::VectorXd>& p,
                                 const Eigen::MatrixXd& u, int substeps);

/// Energy-minimizing piecewise-constant control from p to q. Each start runs
/// the iteration u <- J^+ (q - F(u) + J u), the minimal-norm solution of the
/// linearized endpoint constraint; the shortest converged start wins.
ControlResult direct_control(const CompiledFamily& fam, const Eigen::Ref<const Eigen::VectorXd>& p,
                             const Eigen::Ref<const Eigen::VectorXd>& q, const ControlOptions& opts = {});

}  // namespace srm

#endif  // SRM_CONTROL_HPP
