#ifndef SRM_GEODESIC_HPP
#define SRM_GEODESIC_HPP

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "srm/compiled.hpp"
#include "srm/structure.hpp"

namespace srm {

/// Normal Hamiltonian H(q, lambda) = 1/2 sum_i <lambda, X_i(q)>^2 on T*R^n.
class HamiltonianSystem {
 public:
  explicit HamiltonianSystem(const std::vector<VectorField>& fields) : family_(fields) {}
  explicit HamiltonianSystem(const SRStructure& s) : family_(s.fields) {}

  int dim() const { return family_.dim(); }
  const CompiledFamily& family() const { return family_; }
  double hamiltonian(const Eigen::Ref<const Eigen::VectorXd>& q, const Eigen::Ref<const Eigen::VectorXd>& lambda) const;
  /// Control u_i = <lambda, X_i(q)>.
  Eigen::VectorXd control(const Eigen::Ref<const Eigen::VectorXd>& q, const Eigen::Ref<const Eigen::VectorXd>& lambda) const;
  /// y = (q, lambda), dy = (dH/dlambda, -dH/dq).
  void rhs(const Eigen::Ref<const Eigen::VectorXd>& y, Eigen::Ref<Eigen::VectorXd> dy) const;

 private:
  CompiledFamily family_;
  mutable Eigen::MatrixXd X_;
  mutable std::vector<Eigen::MatrixXd> DX_;
  mutable Eigen::VectorXd h_;
};

struct FlowOptions {
  double rtol = 1e-9;
  double atol = 1e-11;
  int max_steps = 20000;
  /// Integration aborts once |y| exceeds this.
  double blowup = 1e8;
};

struct FlowResult {
  Eigen::VectorXd q, lambda;
  std::vector<double> steps;  // accepted step sizes, reusable by flow_fixed
  bool ok = false;
};

/// Adaptive Dormand-Prince flow of the Hamiltonian system for time T. When
/// record_times is given (increasing, within [0, T]) the state at each of
/// those times is passed to on_record.
FlowResult flow_adaptive(const HamiltonianSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& q0,
                         const Eigen::Ref<const Eigen::VectorXd>& lambda0, double T, const FlowOptions& opts = {},
                         const std::vector<double>& record_times = {},
                         const std::function<void(std::size_t, const Eigen::VectorXd&)>& on_record = {});

/// Same scheme over a prescribed step schedule; smooth in the initial data,
/// which makes finite-difference Jacobians clean.
Eigen::VectorXd flow_fixed(const HamiltonianSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& q0,
                           const Eigen::Ref<const Eigen::VectorXd>& lambda0, const std::vector<double>& steps);

struct GeodesicPath {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> q;
  std::vector<Eigen::VectorXd> lambda;
  double length = 0;

  /// max |H(t) - H(0)| / H(0) along the recorded path (0 when H(0) = 0).
  double energy_drift(const HamiltonianSystem& sys) const;
};

/// Normal extremal from (p, lambda0) over [0, T] with a fixed number of
/// classical RK4 steps. Throws StepFailure when the state blows up.
GeodesicPath geodesic_shoot(const HamiltonianSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& p,
                            const Eigen::Ref<const Eigen::VectorXd>& lambda0, double T, int steps);

struct ShootOptions {
  int max_iterations = 40;
  double tol = 1e-8;      // absolute endpoint residual
  double fd_step = 1e-7;  // relative finite-difference step
  FlowOptions flow;
};

struct ShootResult {
  bool converged = false;
  Eigen::VectorXd covector;  // initial covector for unit time
  double length = 0;         // sqrt(2 H) of the converged extremal
  double residual = 0;
  int iterations = 0;
};

/// Levenberg-Marquardt on lambda0 -> exp_p(lambda0) - target, unit time.
ShootResult solve_shooting(const HamiltonianSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& p,
                           const Eigen::Ref<const Eigen::VectorXd>& target, const Eigen::Ref<const Eigen::VectorXd>& guess,
                           const ShootOptions& opts = {});

}  // namespace srm

#endif  // SRM_GEODESIC_HPP
