#include "srm/distance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <unordered_set>
#include <cmath>
#include <numeric>

#include "srm/flag.hpp"
#include "srm/frames.hpp"
#include "srm/random.hpp"

namespace srm {

OracleOptions OracleOptions::from_budget(int level, std::uint64_t seed) {
  OracleOptions o;
  o.seed = seed;
  o.control.seed = seed;
  switch (std::clamp(level, 1, 4)) {
    case 1:
      o.geodesics = 500;
      o.times = 16;
      o.starts = 2;
      o.rel_error = 1e-3;
      o.control.starts = 4;
      o.shoot.flow.rtol = 1e-9;
      break;
    case 2:
      break;
    case 3:
      o.geodesics = 3000;
      o.times = 32;
      o.starts = 5;
      o.rel_error = 3e-5;
      o.control.starts = 16;
      o.control.intervals = 48;
      break;
    default:
      o.geodesics = 8000;
      o.times = 40;
      o.starts = 8;
      o.rel_error = 1e-5;
      o.control.starts = 24;
      o.control.intervals = 64;
      break;
  }
  return o;
}

DistanceOracle::DistanceOracle(const std::vector<VectorField>& fields, const Eigen::Ref<const Eigen::VectorXd>& p,
                               double radius, const OracleOptions& opts)
    : fields_(fields), sys_(fields), p_(p), radius_(radius), opts_(opts) {
  const int n = sys_.dim();
  BracketTable table(fields);
  FlagData flag = flag_at(table, n, p);
  auto frames = adapted_frames(table, p, flag, {1e-9, 64});
  std::size_t best = 0;
  double best_det = -1;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    double d = std::abs(frames[i].vectors.determinant());
    if (d > best_det) {
      best_det = d;
      best = i;
    }
  }
  const AdaptedFrame& frame = frames[best];
  const Eigen::MatrixXd AinvT = frame.vectors.inverse().transpose();
  const int dh = flag.growth[0];
  const int dv = n - dh;
  const double T = radius * opts.overshoot;
  const double tmin = T / opts.times;
  Eigen::MatrixXd X = sys_.family().fields(p);

  Rng rng(opts.seed, 0x11b);
  entries_.reserve(static_cast<std::size_t>(opts.geodesics) * opts.times);
  std::vector<double> record(opts.times);
  for (int g = 0; g < opts.geodesics; ++g) {
    Eigen::VectorXd u = halton(static_cast<std::uint64_t>(g) + 1, std::max(1, (dh <= 2 ? 1 : 0) + dv));
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    int used = 0;
    if (dh == 1) {
      c[0] = u[used++] < 0.5 ? -1.0 : 1.0;
    } else if (dh == 2) {
      double a = 2 * M_PI * u[used++];
      c[0] = std::cos(a);
      c[1] = std::sin(a);
    } else {
      c.head(dh) = rng.unit_vector(dh);
    }
    // normalize the horizontal part to unit speed
    double hn = (X.transpose() * (AinvT * c)).norm();
    if (hn > 0) c.head(dh) /= hn;
    // stop each extremal once its vertical covector has turned it well past
    // the expected cut time; beyond that it only yields poor warm starts
    double Tg = T;
    for (int j = 0; j < dv; ++j) {
      int w = frame.levels[dh + j];
      double vmax = opts.vertical_range * std::pow(2.0, w - 2) / std::pow(tmin, w - 1);
      double s = (2 * u[used++] - 1) * std::asinh(vmax);
      c[dh + j] = std::sinh(s);
      double stop = opts.vertical_range * std::pow(2.0, w - 2) / std::abs(c[dh + j]);
      Tg = std::min(Tg, std::pow(stop, 1.0 / (w - 1)));
    }
    Tg = std::max(Tg, tmin);
    for (int k = 0; k < opts.times; ++k) record[k] = Tg * (k + 1) / opts.times;
    Eigen::VectorXd lam = AinvT * c;
    flow_adaptive(sys_, p, lam, Tg, opts.shoot.flow, record, [&](std::size_t k, const Eigen::VectorXd& y) {
      entries_.push_back({y.head(n), record[k] * lam, record[k], g});
    });
  }

  lo_ = hi_ = p;
  lip_ = X.norm();
  for (const auto& e : entries_) {
    if (e.length <= radius) {
      lo_ = lo_.cwiseMin(e.point);
      hi_ = hi_.cwiseMax(e.point);
    }
  }
  for (const auto& e : entries_) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys_.family().fields(e.point));
    if (svd.singularValues().size()) lip_ = std::max(lip_, svd.singularValues()[0]);
  }
  lip_ *= 1.1;
  scale_ = (hi_ - lo_).cwiseMax(1e-9);
}

DistanceEstimate DistanceOracle::distance_to(const Eigen::Ref<const Eigen::VectorXd>& q, double stop_below) const {
  DistanceEstimate est;
  est.lower = (q - p_).norm() / lip_;
  if ((q - p_).norm() == 0) {
    est.value = est.upper = 0;
    est.method = "exact";
    return est;
  }
  // Nearest entries, at most one per library extremal so that distinct
  // branches reaching q all get a chance; then shortest first.
  const std::size_t pool = static_cast<std::size_t>(4 * opts_.starts + 4);
  const std::size_t wide = std::min<std::size_t>(entries_.size(), 16 * pool);
  std::vector<std::pair<double, std::size_t>> near;
  near.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i)
    near.emplace_back(((entries_[i].point - q).array() / scale_.array()).matrix().squaredNorm(), i);
  std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(wide), near.end());
  std::vector<std::size_t> cand;
  std::unordered_set<int> seen;
  for (std::size_t k = 0; k < wide && cand.size() < pool; ++k)
    if (seen.insert(entries_[near[k].second].geodesic).second) cand.push_back(near[k].second);
  std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return entries_[a].length < entries_[b].length; });

  std::vector<Eigen::VectorXd> tried;
  int attempts = 0;
  double best = std::numeric_limits<double>::infinity(), best_res = 0;
  for (std::size_t k = 0; k < cand.size() && attempts < opts_.starts; ++k) {
    const Entry& e = entries_[cand[k]];
    bool similar = false;
    for (const auto& t : tried)
      if ((t - e.covector).norm() < 1e-3 * (1 + t.norm())) similar = true;
    if (similar) continue;
    tried.push_back(e.covector);
    ++attempts;
    ShootResult r = solve_shooting(sys_, p_, q, e.covector, opts_.shoot);
    if (!r.converged) continue;
    if (r.length < best) {
      best = r.length;
      best_res = r.residual;
    }
    if (best < stop_below) break;
    // agreement with the local library means the extremal is the expected one
    if (opts_.early_accept && r.length <= e.length * 1.05 + 1e-3) break;
  }
  if (std::isfinite(best)) {
    est.value = est.upper = best;
    est.method = "shooting";
  }
  if (!std::isfinite(best) && opts_.control_fallback) {
    ControlResult c = direct_control(sys_.family(), p_, q, opts_.control);
    if (c.converged) {
      est.value = est.upper = c.length;
      best_res = c.residual;
      est.method = "control";
    }
  }
  if (!est.found()) {
    ++failures_;
    return est;
  }
  est.error = opts_.rel_error * est.value + lip_ * best_res + 1e-9;
  est.value = std::max(est.value, est.lower);
  return est;
}

DistanceOracle::Membership DistanceOracle::ball(const Eigen::Ref<const Eigen::VectorXd>& q, double eps) const {
  if ((q - p_).norm() == 0) return Membership::In;
  if ((q - p_).norm() / lip_ > eps) return Membership::Out;
  DistanceEstimate d = distance_to(q, eps * (1 - 10 * opts_.rel_error));
  if (!d.found()) return Membership::Out;
  if (d.value + d.error < eps) return Membership::In;
  if (d.value - d.error > eps) return Membership::Out;
  return Membership::Band;
}

bool DistanceOracle::inside(const Eigen::Ref<const Eigen::VectorXd>& q, double eps) const {
  if ((q - p_).norm() / lip_ > eps) return false;
  DistanceEstimate d = distance_to(q, eps);
  return d.found() && d.value < eps;
}

std::string to_string(DistanceOracle::Membership m) {
  switch (m) {
    case DistanceOracle::Membership::In:
      return "in";
    case DistanceOracle::Membership::Out:
      return "out";
    default:
      return "boundary-band";
  }
}

DistanceEstimate distance(const std::vector<VectorField>& fields, const Eigen::Ref<const Eigen::VectorXd>& p,
                          const Eigen::Ref<const Eigen::VectorXd>& q, int budget, std::uint64_t seed) {
  DistanceEstimate best;
  if ((q - p).norm() == 0) {
    best.value = best.upper = best.lower = 0;
    best.method = "exact";
    return best;
  }
  OracleOptions o = OracleOptions::from_budget(budget, seed);
  o.geodesics = std::max(200, o.geodesics / 3);
  o.starts = std::max(6, o.starts);
  o.early_accept = false;
  CompiledFamily fam(fields);
  ControlResult c = direct_control(fam, p, q, o.control);
  double guess = c.converged ? c.length : 2 * ((q - p).norm() + std::sqrt((q - p).norm()));
  double lower = 0;
  // A loose first radius spreads the library thin; once a much shorter
  // extremal is known, a second pass at that radius is far denser near q.
  for (double radius = guess * 1.1; radius > 0;) {
    for (int dir = 0; dir < 2; ++dir) {
      const auto& a = dir == 0 ? p : q;
      const auto& b = dir == 0 ? q : p;
      DistanceOracle oracle(fields, a, radius, o);
      DistanceEstimate e = oracle.distance_to(b);
      lower = std::max(lower, e.lower);
      if (e.found() && e.value < best.value) best = e;
    }
    const double next = best.value * 1.1;
    radius = best.found() && next < 0.7 * radius ? next : 0;
  }
  if (c.converged && c.length < best.value) {
    best.value = best.upper = c.length;
    best.method = "control";
    best.error = o.rel_error * c.length + c.residual;
  }
  best.lower = lower;
  if (best.found()) best.value = std::max(best.value, lower);
  return best;
}

DistanceEstimate distance(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p,
                          const Eigen::Ref<const Eigen::VectorXd>& q, int budget, std::uint64_t seed) {
  return distance(s.fields, p, q, budget, seed);
}

}  // namespace srm
