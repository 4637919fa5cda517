#include "srm/control.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "srm/random.hpp"

namespace srm {

namespace {

struct Integrator {
  const CompiledFamily& fam;
  int substeps;
  Eigen::MatrixXd X;
  Eigen::VectorXd k1, k2, k3, k4;

  // One piece of duration dt with constant control u, in place.
  void piece(Eigen::VectorXd& q, const Eigen::Ref<const Eigen::VectorXd>& u, double dt) {
    const double h = dt / substeps;
    for (int s = 0; s < substeps; ++s) {
      fam.fields(q, X);
      k1 = X * u;
      fam.fields(q + 0.5 * h * k1, X);
      k2 = X * u;
      fam.fields(q + 0.5 * h * k2, X);
      k3 = X * u;
      fam.fields(q + h * k3, X);
      k4 = X * u;
      q += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
  }
};

}  // namespace

Eigen::VectorXd control_endpoint(const CompiledFamily& fam, const Eigen::Ref<const Eigen::VectorXd>& p,
                                 const Eigen::MatrixXd& u, int substeps) {
  Integrator in{fam, substeps, {}, {}, {}, {}, {}};
  Eigen::VectorXd q = p;
  const double dt = 1.0 / static_cast<double>(u.cols());
  for (Eigen::Index k = 0; k < u.cols(); ++k) in.piece(q, u.col(k), dt);
  return q;
}

ControlResult direct_control(const CompiledFamily& fam, const Eigen::Ref<const Eigen::VectorXd>& p,
                             const Eigen::Ref<const Eigen::VectorXd>& q, const ControlOptions& opts) {
  const int n = fam.dim(), m = fam.m(), K = opts.intervals;
  const double dt = 1.0 / K;
  Integrator in{fam, opts.substeps, {}, {}, {}, {}, {}};

  // endpoint plus the states at every piece boundary
  std::vector<Eigen::VectorXd> states(K + 1);
  auto forward = [&](const Eigen::MatrixXd& u) {
    states[0] = p;
    for (int k = 0; k < K; ++k) {
      states[k + 1] = states[k];
      in.piece(states[k + 1], u.col(k), dt);
    }
    return states[K];
  };
  auto jacobian = [&](const Eigen::MatrixXd& u, const Eigen::VectorXd& F) {
    Eigen::MatrixXd J(n, m * K);
    for (int k = 0; k < K; ++k)
      for (int i = 0; i < m; ++i) {
        double d = 1e-7 * std::max(1.0, std::abs(u(i, k)));
        Eigen::MatrixXd up = u;
        up(i, k) += d;
        Eigen::VectorXd s = states[k];
        for (int l = k; l < K; ++l) in.piece(s, up.col(l), dt);
        J.col(k * m + i) = (s - F) / d;
      }
    return J;
  };

  ControlResult best;
  best.length = std::numeric_limits<double>::infinity();
  Rng root(opts.seed);
  const double gap = (q - p).norm();
  const double scale = gap + std::sqrt(gap) + 1e-3;
  for (int start = 0; start < opts.starts; ++start) {
    Rng rng = root.split(static_cast<std::uint64_t>(start));
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(m, K);
    if (start > 0) {
      // smooth random start: a few low Fourier modes per control
      for (int i = 0; i < m; ++i) {
        double a0 = scale * rng.normal(), a1 = scale * rng.normal(), b1 = scale * rng.normal();
        double a2 = scale * rng.normal() * 0.5, b2 = scale * rng.normal() * 0.5;
        for (int k = 0; k < K; ++k) {
          double t = 2 * M_PI * (k + 0.5) / K;
          u(i, k) = a0 + a1 * std::cos(t) + b1 * std::sin(t) + a2 * std::cos(2 * t) + b2 * std::sin(2 * t);
        }
      }
    }
    Eigen::VectorXd F = forward(u);
    double res = (F - q).norm();
    double prev_energy = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iterations; ++it) {
      Eigen::MatrixXd J = jacobian(u, F);
      Eigen::VectorXd uv = Eigen::Map<const Eigen::VectorXd>(u.data(), m * K);
      Eigen::VectorXd rhs = q - F + J * uv;
      Eigen::VectorXd target = J.completeOrthogonalDecomposition().solve(rhs);
      if (!target.allFinite()) break;
      double alpha = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 8; ++bt) {
        Eigen::VectorXd cand = uv + alpha * (target - uv);
        Eigen::MatrixXd uc = Eigen::Map<const Eigen::MatrixXd>(cand.data(), m, K);
        Eigen::VectorXd Fc = forward(uc);
        double rc = (Fc - q).norm();
        // accept while the constraint is not badly violated
        if (std::isfinite(rc) && (rc <= std::max(res, 10 * opts.tol) || rc < 0.5 * gap + opts.tol)) {
          u = uc;
          F = Fc;
          res = rc;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        forward(u);
        break;
      }
      double energy = u.squaredNorm() * dt;
      if (res < opts.tol && std::abs(prev_energy - energy) < 1e-12 * std::max(1.0, energy)) break;
      prev_energy = energy;
    }
    if (res >= 100 * opts.tol) continue;
    double length = 0;
    for (int k = 0; k < K; ++k) length += u.col(k).norm() * dt;
    if (length < best.length) {
      best.converged = true;
      best.length = length;
      best.energy = u.squaredNorm() * dt;
      best.residual = res;
      best.controls = u;
    }
  }
  if (!best.converged) best.length = std::numeric_limits<double>::infinity();
  return best;
}

}  // namespace srm
