#include "srm/measures.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "srm/errors.hpp"
#include "srm/flag.hpp"
#include "srm/frames.hpp"
#include "srm/popp.hpp"
#include "srm/random.hpp"

namespace srm {

int samples_for_budget(int budget) {
  switch (std::clamp(budget, 1, 4)) {
    case 1:
      return 1000;
    case 2:
      return 3000;
    case 3:
      return 10000;
    default:
      return 30000;
  }
}

SampleBox sample_box(const DistanceOracle& oracle, double margin) {
  const Eigen::VectorXd& c = oracle.base();
  SampleBox b;
  b.lo = c + margin * (oracle.extent_lo() - c);
  b.hi = c + margin * (oracle.extent_hi() - c);
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (b.hi[i] - b.lo[i] < 1e-9) {
      b.lo[i] -= 1e-6;
      b.hi[i] += 1e-6;
    }
  return b;
}

SampleBox hull(const SampleBox& a, const SampleBox& b) { return {a.lo.cwiseMin(b.lo), a.hi.cwiseMax(b.hi)}; }

namespace {

// Running mean and variance of a sampled quantity.
struct Accumulator {
  double sum = 0, sum2 = 0;
  std::size_t n = 0;

  void add(double v) {
    sum += v;
    sum2 += v * v;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double std_error() const {
    if (n < 2) return 0;
    double m = mean();
    return std::sqrt(std::max(0.0, sum2 / n - m * m) / (n - 1));
  }
  MCEstimate scaled(double factor, std::uint64_t seed) const { return {factor * mean(), factor * std_error(), n, seed}; }
};

Polynomial constant(int n, double v) { return Polynomial::constant(n, rational_from_double(v)); }

bool looks_regular(const SRStructure& s, const Eigen::VectorXd& p) {
  BracketTable table(s.fields);
  auto growth = flag_at(table, s.dim, p).growth;
  Rng rng(3);
  const double radius = 1e-3 * (1.0 + p.norm());
  for (int j = 0; j < 8; ++j)
    if (flag_at(table, s.dim, rng.uniform_in_ball(p, radius)).growth != growth) return false;
  return true;
}

// Directions on the unit sphere: coordinate axes first, then a spread set.
std::vector<Eigen::VectorXd> directions(int n, int count) {
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < n && static_cast<int>(out.size()) < count; ++i)
    for (int sgn : {1, -1}) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[i] = sgn;
      out.push_back(e);
    }
  const int rest = count - static_cast<int>(out.size());
  for (int k = 0; k < rest; ++k) {
    Eigen::VectorXd u(n);
    if (n == 2) {
      double a = 2 * M_PI * (k + 0.5) / rest + M_PI / 4;
      u << std::cos(a), std::sin(a);
    } else if (n == 3) {
      // spherical Fibonacci lattice
      double zc = 1 - 2 * (k + 0.5) / rest;
      double r = std::sqrt(std::max(0.0, 1 - zc * zc));
      double a = M_PI * (3 - std::sqrt(5.0)) * k;
      u << r * std::cos(a), r * std::sin(a), zc;
    } else {
      Rng rng(11, static_cast<std::uint64_t>(k));
      u = rng.unit_vector(n);
    }
    out.push_back(u);
  }
  out.resize(static_cast<std::size_t>(std::min<int>(count, static_cast<int>(out.size()))));
  return out;
}

struct Diameter {
  double value = 0;
  double upper = 0;
};

Diameter sampled_diameter(const std::vector<VectorField>& fields, const std::vector<Eigen::VectorXd>& pts,
                          double reach, const OracleOptions& o, int budget) {
  Diameter d;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    DistanceOracle oracle(fields, pts[i], reach, o);
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      DistanceEstimate e = oracle.distance_to(pts[j]);
      if (!e.found()) e = distance(fields, pts[i], pts[j], budget, o.seed);
      if (!e.found()) {
        d.upper = std::numeric_limits<double>::infinity();
        continue;
      }
      d.value = std::max(d.value, e.value);
      d.upper = std::max(d.upper, e.value + e.error);
    }
  }
  return d;
}

// Membership in the ball of radius r with its horizontal radial hull filled:
// z belongs when (s z_h, z_v) lies in the ball for some s >= 1.
class FilledBall {
 public:
  FilledBall(const DistanceOracle& o, double r, const Weights& w, const SampleBox& box, int steps)
      : o_(o), r_(r), w_(w), box_(box), steps_(steps) {}

  bool ball(const Eigen::VectorXd& z) const { return o_.inside(z, r_); }

  bool filled(const Eigen::VectorXd& z) const {
    const Eigen::VectorXd& c = o_.base();
    double smax = std::numeric_limits<double>::infinity();
    bool any = false;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      if (w_[static_cast<std::size_t>(i)] != 1) continue;
      double dz = z[i] - c[i];
      if (std::abs(dz) < 1e-15) continue;
      any = true;
      smax = std::min(smax, (dz > 0 ? box_.hi[i] - c[i] : c[i] - box_.lo[i]) / std::abs(dz));
    }
    if (!any || smax <= 1) return false;
    Eigen::VectorXd y = z;
    for (int k = 1; k <= steps_; ++k) {
      double s = 1 + (smax - 1) * k / steps_;
      for (Eigen::Index i = 0; i < z.size(); ++i)
        if (w_[static_cast<std::size_t>(i)] == 1) y[i] = c[i] + s * (z[i] - c[i]);
      if (o_.inside(y, r_)) return true;
    }
    return false;
  }

  bool contains(const Eigen::VectorXd& z) const { return ball(z) || filled(z); }

 private:
  const DistanceOracle& o_;
  double r_;
  Weights w_;
  SampleBox box_;
  int steps_;
};

Eigen::VectorXd dilate_about(const Eigen::VectorXd& c, const Eigen::VectorXd& u, double lambda, const Weights& w) {
  Eigen::VectorXd z(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) z[i] = c[i] + std::pow(lambda, w[static_cast<std::size_t>(i)]) * u[i];
  return z;
}

// Boundary of the filled ball along the dilation curve through u; the ball
// part is exact by homogeneity, the filled part is bisected.
Eigen::VectorXd filled_boundary(const FilledBall& a, const DistanceOracle& o, const Eigen::VectorXd& u, double r,
                                const Weights& w) {
  const Eigen::VectorXd& c = o.base();
  DistanceEstimate e = o.distance_to(c + u);
  double lam = e.found() && e.value > 0 ? r / e.value : 1.0;
  if (!a.filled(dilate_about(c, u, lam * 1.001, w))) return dilate_about(c, u, lam, w);
  double lo = lam, hi = lam * 1.001;
  while (a.filled(dilate_about(c, u, hi, w)) && hi < 8 * lam) {
    lo = hi;
    hi *= 1.25;
  }
  for (int it = 0; it < 12; ++it) {
    double mid = 0.5 * (lo + hi);
    (a.filled(dilate_about(c, u, mid, w)) ? lo : hi) = mid;
  }
  return dilate_about(c, u, lo, w);
}

int boundary_count(const IsodiametricOptions& opts) {
  if (opts.boundary_points > 0) return opts.boundary_points;
  switch (std::clamp(opts.measure.budget, 1, 4)) {
    case 1:
      return 16;
    case 2:
      return 32;
    default:
      return 45;
  }
}

// Ratio of counts (A over B, A containing B) with its delta-method error.
MCEstimate count_ratio(std::size_t in_b, std::size_t only_a, std::size_t n, std::uint64_t seed) {
  MCEstimate r;
  r.count = n;
  r.seed = seed;
  if (in_b == 0) return r;
  const double pb = double(in_b) / n, pd = double(only_a) / n;
  r.mean = 1 + pd / pb;
  const double vd = pd * (1 - pd) / n, vb = pb * (1 - pb) / n, cov = -pd * pb / n;
  const double var = vd / (pb * pb) + pd * pd * vb / std::pow(pb, 4) - 2 * pd * cov / std::pow(pb, 3);
  r.std_error = std::sqrt(std::max(0.0, var));
  return r;
}

}  // namespace

MCEstimate ball_measure(const std::vector<VectorField>& fields, const Polynomial& density,
                        const Eigen::Ref<const Eigen::VectorXd>& center, double r, const MeasureOptions& opts) {
  if (r <= 0) throw ValidationError("measures.radius", "radius must be positive");
  DistanceOracle oracle(fields, center, r, opts.oracle());
  SampleBox box = sample_box(oracle);
  Rng rng(opts.seed, 0xba11);
  Accumulator acc;
  const int n = opts.sample_count();
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd z = rng.uniform_in_box(box.lo, box.hi);
    acc.add(oracle.inside(z, r) ? density.eval(z) : 0.0);
  }
  return acc.scaled(box.volume(), opts.seed);
}

MCEstimate mu_hat_ball(const NilpotentApprox& approx, const MeasureOptions& opts, double r) {
  const int n = approx.dim();
  return ball_measure(approx.fields, constant(n, approx.density_at_origin()), Eigen::VectorXd::Zero(n), r, opts);
}

MCEstimate mu_hat_ball(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, const MeasureOptions& opts,
                       double r) {
  return mu_hat_ball(nilpotent_approximation(s, to_rational(Eigen::VectorXd(p))), opts, r);
}

SphericalDensity spherical_density(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p,
                                   const MeasureOptions& opts) {
  NilpotentApprox approx = nilpotent_approximation(s, to_rational(Eigen::VectorXd(p)));
  SphericalDensity d;
  d.Q = approx.Q;
  d.mu_hat = mu_hat_ball(approx, opts);
  d.value = std::ldexp(1.0, d.Q) / d.mu_hat.mean;
  d.std_error = d.value * d.mu_hat.std_error / d.mu_hat.mean;
  d.formal = !looks_regular(s, Eigen::VectorXd(p));
  return d;
}

std::vector<BallRatio> density_consistency(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p,
                                           const std::vector<double>& eps, const MeasureOptions& opts) {
  NilpotentApprox approx = nilpotent_approximation(s, to_rational(Eigen::VectorXd(p)));
  const int n = approx.dim();
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);
  const OracleOptions oo = opts.oracle();
  DistanceOracle nil(approx.fields, origin, 1.0, oo);
  SampleBox box = sample_box(nil);
  std::vector<SRStructure> blown;
  std::vector<DistanceOracle> oracles;
  for (double e : eps) {
    if (e <= 0) throw ValidationError("measures.eps", "scales must be positive");
    blown.push_back(blowup_structure(approx, rational_from_double(e)));
    oracles.emplace_back(blown.back().fields, origin, 1.0, oo);
    box = hull(box, sample_box(oracles.back()));
  }
  const double rho0 = approx.density_at_origin();
  const int N = opts.sample_count();
  std::vector<Accumulator> scaled(eps.size()), diff(eps.size());
  Accumulator hat;
  Rng rng(opts.seed, 0xc0de);
  for (int k = 0; k < N; ++k) {
    Eigen::VectorXd z = rng.uniform_in_box(box.lo, box.hi);
    const double fh = nil.inside(z, 1.0) ? rho0 : 0.0;
    hat.add(fh);
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const double fb = oracles[i].inside(z, 1.0) ? blown[i].density(z) : 0.0;
      scaled[i].add(fb);
      diff[i].add(fb - fh);
    }
  }
  const double vol = box.volume();
  std::vector<BallRatio> out;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    BallRatio r;
    r.eps = eps[i];
    r.scaled = scaled[i].scaled(vol, opts.seed);
    r.mu_hat = hat.scaled(vol, opts.seed);
    r.gap = std::abs(r.scaled.mean - r.mu_hat.mean) / r.mu_hat.mean;
    r.gap_error = vol * diff[i].std_error() / r.mu_hat.mean;
    out.push_back(r);
  }
  return out;
}

BallBoxGauge::BallBoxGauge(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& center)
    : chart_(privileged_chart(s, to_rational(Eigen::VectorXd(center)), max_volume_frame(s, center))) {
  for (int w : chart_.weights) inv_w_.push_back(1.0 / w);
}

Eigen::VectorXd BallBoxGauge::z(const Eigen::Ref<const Eigen::VectorXd>& x) const { return chart_.to_z(x); }

double BallBoxGauge::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd v = z(x);
  double g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = std::max(g, std::pow(std::abs(v[i]), inv_w_[static_cast<std::size_t>(i)]));
  return g;
}

double BallBoxGauge::between(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) const {
  Eigen::VectorXd v = z(a) - z(b);
  double g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = std::max(g, std::pow(std::abs(v[i]), inv_w_[static_cast<std::size_t>(i)]));
  return g;
}

std::vector<Eigen::VectorXd> box_cloud(const Box& box, const std::vector<int>& counts) {
  const int n = box.dim();
  if (static_cast<int>(counts.size()) != n) throw ValidationError("measures.cloud", "one count per dimension");
  Eigen::VectorXd lo = box.lower(), hi = box.upper();
  std::size_t total = 1;
  for (int c : counts) {
    if (c < 1) throw ValidationError("measures.cloud", "counts must be positive");
    total *= static_cast<std::size_t>(c);
  }
  std::vector<Eigen::VectorXd> out;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Eigen::VectorXd x(n);
    std::size_t r = idx;
    for (int i = 0; i < n; ++i) {
      int c = counts[static_cast<std::size_t>(i)];
      int k = static_cast<int>(r % static_cast<std::size_t>(c));
      r /= static_cast<std::size_t>(c);
      x[i] = c == 1 ? 0.5 * (lo[i] + hi[i]) : lo[i] + (hi[i] - lo[i]) * k / double(c - 1);
    }
    out.push_back(x);
  }
  return out;
}

std::vector<Eigen::VectorXd> stratum_cloud(const Stratum& N, const std::vector<int>& counts) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& s : box_cloud(N.parambox, counts)) out.push_back(N.point(s));
  return out;
}

namespace {

// Uniform grid hash over a point cloud for range queries.
class GridIndex {
 public:
  GridIndex(const std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& cell) : pts_(pts), cell_(cell) {
    for (std::size_t i = 0; i < pts.size(); ++i) cells_[key(pts[i])].push_back(i);
  }

  template <typename F>
  void query(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, F&& f) const {
    std::vector<long> a = key(lo), b = key(hi), k = a;
    std::size_t visits = 1;
    for (std::size_t d = 0; d < a.size(); ++d) visits *= static_cast<std::size_t>(b[d] - a[d] + 1);
    if (visits > cells_.size()) {
      for (const auto& [kk, ids] : cells_)
        for (std::size_t i : ids) f(i);
      return;
    }
    while (true) {
      auto it = cells_.find(k);
      if (it != cells_.end())
        for (std::size_t i : it->second) f(i);
      std::size_t d = 0;
      for (; d < k.size(); ++d) {
        if (++k[d] <= b[d]) break;
        k[d] = a[d];
      }
      if (d == k.size()) break;
    }
  }

 private:
  std::vector<long> key(const Eigen::VectorXd& x) const {
    std::vector<long> k(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) k[static_cast<std::size_t>(i)] = static_cast<long>(std::floor(x[i] / cell_[i]));
    return k;
  }
  const std::vector<Eigen::VectorXd>& pts_;
  Eigen::VectorXd cell_;
  std::map<std::vector<long>, std::vector<std::size_t>> cells_;
};

// Euclidean reach of the gauge ball of radius eps around the chart center,
// from the corners of the privileged box.
Eigen::VectorXd gauge_reach(const PrivilegedChart& chart, double eps) {
  const int n = chart.dim();
  Eigen::VectorXd c = to_double(chart.base);
  Eigen::VectorXd reach = Eigen::VectorXd::Zero(n);
  // corners and face midpoints of the gauge box, with slack for curvature
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    Eigen::VectorXd z(n);
    for (int i = 0, r = code; i < n; ++i, r /= 3)
      z[i] = (r % 3 - 1) * std::pow(eps, chart.weights[static_cast<std::size_t>(i)]);
    reach = reach.cwiseMax((chart.to_x(z) - c).cwiseAbs());
  }
  return 1.25 * reach + Eigen::VectorXd::Constant(n, 1e-12);
}

struct Piece {
  std::size_t center;
  std::vector<std::size_t> members;
};

std::vector<Piece> greedy_cover(const SRStructure& s, const std::vector<Eigen::VectorXd>& pts, double eps) {
  const int n = s.dim;
  std::vector<Piece> out;
  if (pts.empty()) return out;
  // cell size from the reach at the first point
  PrivilegedChart c0 = privileged_chart(s, to_rational(pts.front()), max_volume_frame(s, pts.front()));
  GridIndex index(pts, gauge_reach(c0, eps).cwiseMax(Eigen::VectorXd::Constant(n, 1e-9)));
  std::vector<char> covered(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (covered[i]) continue;
    PrivilegedChart chart = privileged_chart(s, to_rational(pts[i]), max_volume_frame(s, pts[i]));
    Eigen::VectorXd reach = gauge_reach(chart, eps);
    Piece piece{i, {i}};
    covered[i] = 1;
    index.query(pts[i] - reach, pts[i] + reach, [&](std::size_t j) {
      if (covered[j]) return;
      Eigen::VectorXd z = chart.to_z(pts[j]);
      for (Eigen::Index a = 0; a < z.size(); ++a)
        if (std::abs(z[a]) >= std::pow(eps, chart.weights[static_cast<std::size_t>(a)])) return;
      covered[j] = 1;
      piece.members.push_back(j);
    });
    out.push_back(std::move(piece));
  }
  return out;
}

}  // namespace

namespace {

CoveringReport fit_counts(const std::vector<double>& scales, std::vector<std::size_t> counts) {
  CoveringReport rep;
  rep.scales = scales;
  rep.counts = std::move(counts);
  Eigen::VectorXd lx(static_cast<Eigen::Index>(scales.size())), ly(lx.size());
  for (std::size_t k = 0; k < scales.size(); ++k) {
    lx[static_cast<Eigen::Index>(k)] = std::log(scales[k]);
    ly[static_cast<Eigen::Index>(k)] = std::log(double(rep.counts[k]));
  }
  const double mx = lx.mean(), my = ly.mean();
  const double slope = ((lx.array() - mx) * (ly.array() - my)).sum() / (lx.array() - mx).square().sum();
  rep.dimension = -slope;
  rep.residual = std::sqrt(((ly.array() - my) - slope * (lx.array() - mx)).square().mean());
  return rep;
}

CloudSampler grid_sampler(const Box& box, std::vector<int> exponents, double per_ball,
                          std::function<Eigen::VectorXd(const Eigen::VectorXd&)> map) {
  return [box, exponents = std::move(exponents), per_ball, map = std::move(map)](double eps) {
    std::vector<int> counts;
    std::size_t total = 1;
    for (int i = 0; i < box.dim(); ++i) {
      const double width = Rational(box.hi[i] - box.lo[i]).get_d();
      const double h = std::pow(eps, exponents[static_cast<std::size_t>(i)]) / per_ball;
      counts.push_back(width > 0 ? static_cast<int>(std::ceil(width / h)) + 1 : 1);
      total *= static_cast<std::size_t>(counts.back());
    }
    if (total > 4'000'000) throw ValidationError("measures.cloud", "cloud too large at scale " + std::to_string(eps));
    // jittered grid: a fixed lattice aliases against the sheared gauge boxes
    std::vector<Eigen::VectorXd> pts = box_cloud(box, counts);
    const Eigen::VectorXd lo = box.lower(), hi = box.upper();
    Eigen::VectorXd half(box.dim());
    for (int i = 0; i < box.dim(); ++i)
      half[i] = counts[static_cast<std::size_t>(i)] > 1 ? 0.5 * (hi[i] - lo[i]) / (counts[static_cast<std::size_t>(i)] - 1) : 0;
    Rng rng(0x5eed, static_cast<std::uint64_t>(std::llround(1e9 * eps)));
    for (auto& x : pts) {
      for (int i = 0; i < box.dim(); ++i) x[i] = std::clamp(x[i] + rng.uniform(-half[i], half[i]), lo[i], hi[i]);
      x = map(x);
    }
    return pts;
  };
}

}  // namespace

CloudSampler box_sampler(const SRStructure& s, const Box& box, std::vector<int> exponents, double per_ball) {
  if (exponents.empty()) exponents = flag_at(s, box.center()).weights;
  if (static_cast<int>(exponents.size()) != box.dim())
    throw ValidationError("measures.cloud", "one exponent per dimension");
  return grid_sampler(box, std::move(exponents), per_ball, [](const Eigen::VectorXd& x) { return x; });
}

CloudSampler stratum_sampler(const SRStructure& s, const Stratum& N, std::vector<int> exponents, double per_ball) {
  if (exponents.empty()) {
    auto growth = equisingular_check(s, N, 4).growth_N;
    int prev = 0;
    for (std::size_t i = 0; i < growth.size(); ++i) {
      for (int k = prev; k < growth[i]; ++k) exponents.push_back(static_cast<int>(i + 1));
      prev = growth[i];
    }
  }
  if (static_cast<int>(exponents.size()) != N.k) throw ValidationError("measures.cloud", "one exponent per parameter");
  return grid_sampler(N.parambox, std::move(exponents), per_ball, [N](const Eigen::VectorXd& t) { return N.point(t); });
}

CoveringReport covering_dimension(const SRStructure& s, const std::vector<Eigen::VectorXd>& points,
                                  const std::vector<double>& scales) {
  if (scales.size() < 2) throw ValidationError("measures.scales", "need at least two scales");
  std::vector<std::size_t> counts;
  for (double eps : scales) counts.push_back(greedy_cover(s, points, eps).size());
  return fit_counts(scales, std::move(counts));
}

CoveringReport covering_dimension(const SRStructure& s, const CloudSampler& sampler, const std::vector<double>& scales,
                                  const std::optional<Box>& window) {
  if (scales.size() < 2) throw ValidationError("measures.scales", "need at least two scales");
  std::vector<std::size_t> counts;
  for (double eps : scales) {
    const std::vector<Eigen::VectorXd> pts = sampler(eps);
    const auto pieces = greedy_cover(s, pts, eps);
    if (!window) {
      counts.push_back(pieces.size());
      continue;
    }
    const Eigen::VectorXd lo = to_double(window->lo), hi = to_double(window->hi);
    auto inside = [&](std::size_t j) {
      return (pts[j].array() >= lo.array()).all() && (pts[j].array() <= hi.array()).all();
    };
    counts.push_back(static_cast<std::size_t>(std::count_if(pieces.begin(), pieces.end(), [&](const Piece& pc) {
      return inside(pc.center);
    })));
  }
  return fit_counts(scales, std::move(counts));
}

SandwichReport sandwich_check(const SRStructure& s, const CloudSampler& sampler, double alpha,
                              const std::vector<double>& scales) {
  SandwichReport rep;
  rep.alpha = alpha;
  rep.holds = true;
  for (double eps : scales) {
    SandwichRow row;
    row.eps = eps;
    const std::vector<Eigen::VectorXd> points = sampler(eps / 2);
    auto pieces = greedy_cover(s, points, eps / 2);
    row.spherical = pieces.size() * std::pow(eps, alpha);
    for (const auto& pc : pieces) {
      BallBoxGauge g(s, points[pc.center]);
      double diam = 0;
      for (std::size_t a = 0; a < pc.members.size(); ++a)
        for (std::size_t b = a + 1; b < pc.members.size(); ++b)
          diam = std::max(diam, g.between(points[pc.members[a]], points[pc.members[b]]));
      row.arbitrary += std::pow(diam, alpha);
    }
    row.holds = row.arbitrary <= 2 * row.spherical && row.spherical <= 2 * std::pow(2.0, alpha) * row.arbitrary;
    rep.holds = rep.holds && row.holds;
    rep.rows.push_back(row);
  }
  return rep;
}

IsodiametricReport isodiametric_search(const std::vector<VectorField>& fields, const Weights& weights,
                                       const IsodiametricOptions& opts) {
  if (!is_dilation_homogeneous(fields, weights))
    throw ValidationError("measures.not-carnot", "fields are not homogeneous under the dilations");
  const int n = static_cast<int>(weights.size());
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);
  const OracleOptions oo = opts.measure.oracle();
  DistanceOracle o(fields, origin, 1.0, oo);
  SampleBox box = sample_box(o);
  FilledBall filled(o, 1.0, weights, box, opts.fill_steps);

  IsodiametricReport rep;
  rep.Q = std::accumulate(weights.begin(), weights.end(), 0);
  const double twoQ = std::ldexp(1.0, rep.Q);

  // volumes with common samples
  const int N = opts.measure.sample_count();
  Rng rng(opts.measure.seed, 0x150);
  std::size_t in_b = 0, only_a = 0;
  for (int k = 0; k < N; ++k) {
    Eigen::VectorXd z = rng.uniform_in_box(box.lo, box.hi);
    if (filled.ball(z))
      ++in_b;
    else if (filled.filled(z))
      ++only_a;
  }
  const double vol_b = box.volume() * in_b / N;
  const double vol_b_se = box.volume() * std::sqrt(double(in_b) * (N - in_b) / N) / N;
  rep.unit_ball_volume = vol_b;

  IsodiametricCandidate ball;
  ball.name = "ball";
  ball.volume_ratio = {1.0, 0.0, static_cast<std::size_t>(N), opts.measure.seed};
  ball.diameter = ball.diameter_upper = 2.0;
  ball.ratio = ball.certified = 1.0;
  rep.candidates.push_back(ball);

  const int K = boundary_count(opts);
  const double reach = 2.4;
  {
    IsodiametricCandidate caps;
    caps.name = "ball+caps";
    caps.volume_ratio = count_ratio(in_b, only_a, static_cast<std::size_t>(N), opts.measure.seed);
    std::vector<Eigen::VectorXd> bnd;
    for (const auto& u : directions(n, K)) bnd.push_back(filled_boundary(filled, o, u, 1.0, weights));
    Diameter d = sampled_diameter(fields, bnd, reach, oo, opts.measure.budget);
    caps.diameter = d.value;
    caps.diameter_upper = d.upper;
    caps.ratio = twoQ * caps.volume_ratio.mean / std::pow(d.value, rep.Q);
    caps.certified = twoQ * std::max(0.0, caps.volume_ratio.mean - 3 * caps.volume_ratio.std_error) /
                     std::pow(d.upper, rep.Q);
    rep.candidates.push_back(caps);
  }
  for (auto [ch, cv] : {std::pair{0.7, 0.7}, std::pair{0.6, 1.0}}) {
    IsodiametricCandidate bx;
    Eigen::VectorXd half(n);
    for (int i = 0; i < n; ++i)
      half[i] = (weights[static_cast<std::size_t>(i)] == 1 ? ch : cv) * 0.5 * (o.extent_hi()[i] - o.extent_lo()[i]);
    bx.name = "box(" + std::to_string(ch).substr(0, 3) + "," + std::to_string(cv).substr(0, 3) + ")";
    const double vol = (2 * half).prod();
    bx.volume_ratio = {vol / vol_b, vol * vol_b_se / (vol_b * vol_b), static_cast<std::size_t>(N), opts.measure.seed};
    std::vector<Eigen::VectorXd> corners;
    for (int mask = 0; mask < (1 << n); ++mask) {
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z[i] = ((mask >> i) & 1 ? 1.0 : -1.0) * half[i];
      corners.push_back(z);
    }
    for (int i = 0; i < n; ++i)
      for (int sgn : {1, -1}) {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
        z[i] = sgn * half[i];
        corners.push_back(z);
      }
    Diameter d = sampled_diameter(fields, corners, reach, oo, opts.measure.budget);
    bx.diameter = d.value;
    bx.diameter_upper = d.upper;
    bx.ratio = twoQ * bx.volume_ratio.mean / std::pow(d.value, rep.Q);
    bx.certified = twoQ * std::max(0.0, bx.volume_ratio.mean - 3 * bx.volume_ratio.std_error) / std::pow(d.upper, rep.Q);
    rep.candidates.push_back(bx);
  }
  for (std::size_t i = 1; i < rep.candidates.size(); ++i)
    if (rep.candidates[i].certified > rep.candidates[rep.best].certified) rep.best = i;
  return rep;
}

IsodiametricReport isodiametric_search(const NilpotentApprox& approx, const IsodiametricOptions& opts) {
  return isodiametric_search(approx.fields, approx.weights(), opts);
}

FrameDensity::FrameDensity(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p)
    : s_(s), frame_(max_volume_frame(s, p).fields) {}

double FrameDensity::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::MatrixXd A(s_.dim, s_.dim);
  for (int j = 0; j < s_.dim; ++j) A.col(j) = frame_[static_cast<std::size_t>(j)].eval(x);
  return std::abs(s_.density(x) * A.determinant());
}

FedererCurve federer_ratio_probe(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p,
                                 const std::vector<double>& eps, const IsodiametricOptions& opts) {
  const Eigen::VectorXd pv = p;
  NilpotentApprox approx = nilpotent_approximation(s, to_rational(pv));
  FrameDensity frame_density(s, pv);
  const int n = approx.dim();
  const int Q = approx.Q;
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);
  const OracleOptions oo = opts.measure.oracle();
  const double mu_hat = mu_hat_ball(approx, opts.measure).mean;
  const double rho_p = approx.density_at_origin();
  FedererCurve curve;
  {
    IsodiametricReport nil = isodiametric_search(approx, opts);
    curve.nilpotent_best = nil.candidates[nil.best].certified;
  }
  const int N = opts.measure.sample_count();
  const int K = std::max(8, boundary_count(opts) / 2);
  for (double e : eps) {
    if (e <= 0) throw ValidationError("measures.eps", "scales must be positive");
    SRStructure b = blowup_structure(approx, rational_from_double(e));
    DistanceOracle o(b.fields, origin, 0.5, oo);
    SampleBox box = sample_box(o);
    FilledBall filled(o, 0.5, approx.weights(), box, opts.fill_steps);
    // spherical density along the blow-up: 2^Q / hat mu^x(hat B_x), with the
    // nilpotent ball volume of p and the frame volume of x
    auto sd = [&](const Eigen::VectorXd& z) {
      Eigen::VectorXd x = approx.chart.to_x(dilate(z, e, approx.weights()));
      return std::ldexp(1.0, Q) * rho_p / (frame_density(x) * mu_hat);
    };
    Rng rng(opts.measure.seed, 0xfed);
    Accumulator in_ball, in_caps;
    for (int k = 0; k < N; ++k) {
      Eigen::VectorXd z = rng.uniform_in_box(box.lo, box.hi);
      bool bz = filled.ball(z);
      bool az = bz || filled.filled(z);
      double w = az ? sd(z) * b.density(z) : 0.0;
      in_ball.add(bz ? w : 0.0);
      in_caps.add(w);
    }
    std::vector<Eigen::VectorXd> bb, cb;
    for (const auto& u : directions(n, K)) {
      DistanceEstimate d = o.distance_to(u);
      bb.push_back(dilate_about(origin, u, d.found() ? 0.5 / d.value : 1.0, approx.weights()));
      cb.push_back(filled_boundary(filled, o, u, 0.5, approx.weights()));
    }
    Diameter db = sampled_diameter(b.fields, bb, 1.3, oo, opts.measure.budget);
    Diameter dc = sampled_diameter(b.fields, cb, 1.3, oo, opts.measure.budget);
    FedererPoint fp;
    fp.eps = e;
    const double vol = box.volume();
    fp.ball = vol * in_ball.mean() / std::pow(db.value, Q);
    fp.caps = vol * in_caps.mean() / std::pow(dc.value, Q);
    const double cert_ball = vol * std::max(0.0, in_ball.mean() - 3 * in_ball.std_error()) / std::pow(db.upper, Q);
    const double cert_caps = vol * std::max(0.0, in_caps.mean() - 3 * in_caps.std_error()) / std::pow(dc.upper, Q);
    fp.best = std::max(fp.ball, fp.caps);
    fp.best_certified = std::max(cert_ball, cert_caps);
    curve.points.push_back(fp);
  }
  return curve;
}

}  // namespace srm
