#include "srm/geodesic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "srm/errors.hpp"

namespace srm {

double HamiltonianSystem::hamiltonian(const Eigen::Ref<const Eigen::VectorXd>& q,
                                      const Eigen::Ref<const Eigen::VectorXd>& lambda) const {
  return 0.5 * control(q, lambda).squaredNorm();
}

Eigen::VectorXd HamiltonianSystem::control(const Eigen::Ref<const Eigen::VectorXd>& q,
                                           const Eigen::Ref<const Eigen::VectorXd>& lambda) const {
  family_.fields(q, X_);
  return X_.transpose() * lambda;
}

void HamiltonianSystem::rhs(const Eigen::Ref<const Eigen::VectorXd>& y, Eigen::Ref<Eigen::VectorXd> dy) const {
  const int n = dim(), m = family_.m();
  family_.fields_and_jacobians(y.head(n), X_, DX_);
  const auto lambda = y.tail(n);
  h_.noalias() = X_.transpose() * lambda;
  dy.head(n).noalias() = X_ * h_;
  for (int j = 0; j < n; ++j) {
    double s = 0;
    for (int i = 0; i < m; ++i) s += h_[i] * DX_[i].col(j).dot(lambda);
    dy[n + j] = -s;
  }
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

struct Stepper {
  const HamiltonianSystem& sys;
  Eigen::VectorXd k1, k2, k3, k4, k5, k6, k7, tmp;

  explicit Stepper(const HamiltonianSystem& s) : sys(s) {
    const int d = 2 * s.dim();
    for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &tmp}) v->resize(d);
  }

  // Fifth-order step from y into out; returns the scaled error norm when
  // err_weights are requested.
  double step(const Eigen::VectorXd& y, double h, Eigen::VectorXd& out, bool with_error, double rtol = 0,
              double atol = 0) {
    sys.rhs(y, k1);
    tmp = y + h * a21 * k1;
    sys.rhs(tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    sys.rhs(tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    sys.rhs(tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    sys.rhs(tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    sys.rhs(tmp, k6);
    out = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    if (!with_error) return 0;
    sys.rhs(out, k7);
    double err = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(out[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    return err;
  }
};

}  // namespace

FlowResult flow_adaptive(const HamiltonianSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& q0,
                         const Eigen::Ref<const Eigen::VectorXd>& lambda0, double T, const FlowOptions& opts,
                         const std::vector<double>& record_times,
                         const std::function<void(std::size_t, const Eigen::VectorXd&)>& on_record) {
  const int n = sys.dim();
  FlowResult r;
  Eigen::VectorXd y(2 * n), next(2 * n), dy(2 * n);
  y << q0, lambda0;
  Stepper st(sys);
  std::size_t rec = 0;
  while (rec < record_times.size() && record_times[rec] <= 0) on_record(rec++, y);
  double t = 0;
  sys.rhs(y, dy);
  double h = T > 0 ? std::min(T, 0.05 / (1.0 + dy.lpNorm<Eigen::Infinity>())) : 0;
  int count = 0;
  while (t < T) {
    if (++count > opts.max_steps) return r;
    double target = rec < record_times.size() ? std::min(record_times[rec], T) : T;
    bool clipped = t + h >= target;
    double hh = clipped ? target - t : h;
    double err = st.step(y, hh, next, true, opts.rtol, opts.atol);
    if (!std::isfinite(err)) {
      h *= 0.25;
      if (h < 1e-14 * std::max(1.0, T)) return r;
      continue;
    }
    if (err <= 1.0) {
      t = clipped ? target : t + hh;
      y = next;
      r.steps.push_back(hh);
      if (y.lpNorm<Eigen::Infinity>() > opts.blowup) return r;
      while (rec < record_times.size() && record_times[rec] <= t) on_record(rec++, y);
    }
    double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (!(clipped && err <= 1.0)) h = hh * fac;
    if (h < 1e-14 * std::max(1.0, T)) return r;
  }
  r.q = y.head(n);
  r.lambda = y.tail(n);
  r.ok = true;
  return r;
}

Eigen::VectorXd flow_fixed(const HamiltonianSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& q0,
                           const Eigen::Ref<const Eigen::VectorXd>& lambda0, const std::vector<double>& steps) {
  const int n = sys.dim();
  Eigen::VectorXd y(2 * n), next(2 * n);
  y << q0, lambda0;
  Stepper st(sys);
  for (double h : steps) {
    st.step(y, h, next, false);
    y.swap(next);
  }
  return y;
}

double GeodesicPath::energy_drift(const HamiltonianSystem& sys) const {
  if (q.empty()) return 0;
  double h0 = sys.hamiltonian(q[0], lambda[0]);
  if (h0 == 0) return 0;
  double worst = 0;
  for (std::size_t i = 0; i < q.size(); ++i) worst = std::max(worst, std::abs(sys.hamiltonian(q[i], lambda[i]) - h0));
  return worst / h0;
}

GeodesicPath geodesic_shoot(const HamiltonianSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& p,
                            const Eigen::Ref<const Eigen::VectorXd>& lambda0, double T, int steps) {
  if (steps < 1) throw ValidationError("sr-distance.steps", "steps must be >= 1");
  const int n = sys.dim();
  GeodesicPath path;
  Eigen::VectorXd y(2 * n), k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n);
  y << p, lambda0;
  const double h = T / steps;
  auto push = [&](double t) {
    path.t.push_back(t);
    path.q.push_back(y.head(n));
    path.lambda.push_back(y.tail(n));
  };
  push(0);
  for (int s = 0; s < steps; ++s) {
    sys.rhs(y, k1);
    sys.rhs(y + 0.5 * h * k1, k2);
    sys.rhs(y + 0.5 * h * k2, k3);
    sys.rhs(y + h * k3, k4);
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!y.allFinite() || y.lpNorm<Eigen::Infinity>() > 1e12)
      throw StepFailure("extremal blew up at t = " + std::to_string((s + 1) * h));
    push((s + 1) * h);
  }
  path.length = std::sqrt(2.0 * sys.hamiltonian(p, lambda0)) * T;
  return path;
}

ShootResult solve_shooting(const HamiltonianSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& p,
                           const Eigen::Ref<const Eigen::VectorXd>& target, const Eigen::Ref<const Eigen::VectorXd>& guess,
                           const ShootOptions& opts) {
  const int n = sys.dim();
  ShootResult res;
  Eigen::VectorXd lam = guess;
  FlowResult fr = flow_adaptive(sys, p, lam, 1.0, opts.flow);
  if (!fr.ok) return res;
  Eigen::VectorXd F = fr.q - target;
  double cost = F.squaredNorm();
  double mu = 1e-4;
  Eigen::MatrixXd J(n, n);
  auto fd_jacobian = [&]() {
    for (int j = 0; j < n; ++j) {
      double d = opts.fd_step * std::max(1.0, std::abs(lam[j]));
      Eigen::VectorXd lp = lam;
      lp[j] += d;
      Eigen::VectorXd y = flow_fixed(sys, p, lp, fr.steps);
      J.col(j) = (y.head(n) - fr.q) / d;
    }
  };
  fd_jacobian();
  bool fresh = true;  // J is a finite-difference Jacobian rather than a Broyden update
  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it;
    if (std::sqrt(cost) < opts.tol) break;
    if (!J.allFinite()) return res;
    Eigen::MatrixXd JtJ = J.transpose() * J;
    Eigen::VectorXd g = J.transpose() * F;
    bool improved = false;
    for (int tries = 0; tries < 10; ++tries) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal().array() += mu * (JtJ.diagonal().array() + 1e-12);
      Eigen::VectorXd delta = A.ldlt().solve(-g);
      if (!delta.allFinite()) {
        mu *= 10;
        continue;
      }
      FlowResult fc = flow_adaptive(sys, p, lam + delta, 1.0, opts.flow);
      if (fc.ok) {
        Eigen::VectorXd Fc = fc.q - target;
        double cc = Fc.squaredNorm();
        if (cc < cost) {
          // Broyden rank-one update of the endpoint Jacobian
          J += ((Fc - F) - J * delta) * delta.transpose() / delta.squaredNorm();
          fresh = false;
          lam += delta;
          fr = std::move(fc);
          F = Fc;
          mu = std::max(mu / 10, 1e-12);
          improved = true;
          cost = cc;
          break;
        }
      }
      if (!fresh) break;
      mu *= 10;
    }
    if (!improved) {
      if (fresh) break;
      fd_jacobian();
      fresh = true;
    }
  }
  res.covector = lam;
  res.residual = std::sqrt(cost);
  res.converged = res.residual < opts.tol;
  res.length = std::sqrt(2.0 * sys.hamiltonian(p, lam));
  return res;
}

}  // namespace srm
