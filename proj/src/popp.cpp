#include "srm/popp.hpp"

#include <Eigen/Dense>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <type_traits>

#include "srm/errors.hpp"
#include "srm/random.hpp"

namespace srm {

namespace {

template <typename S>
constexpr bool is_exact = std::is_same_v<S, Rational>;

template <typename S>
using Point = std::conditional_t<is_exact<S>, std::vector<Rational>, Eigen::VectorXd>;

constexpr double kRankTol = 1e-10;

template <typename S>
Mat<S> mul(const Mat<S>& a, const Mat<S>& b) {
  if constexpr (is_exact<S>)
    return exact_product(a, b);
  else
    return a * b;
}

template <typename S>
Mat<S> tr(const Mat<S>& a) {
  if constexpr (is_exact<S>)
    return exact_transpose(a);
  else
    return a.transpose();
}

template <typename S>
S det(const Mat<S>& a) {
  if (a.rows() == 0) return S(1);
  if constexpr (is_exact<S>)
    return exact_det(a);
  else
    return a.determinant();
}

template <typename S>
std::optional<Mat<S>> inverse(const Mat<S>& a) {
  if constexpr (is_exact<S>) {
    return exact_inverse(a);
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(kRankTol);
    if (!lu.isInvertible()) return std::nullopt;
    return Eigen::MatrixXd(lu.inverse());
  }
}

template <typename S>
int rank(const Mat<S>& a) {
  if (a.size() == 0) return 0;
  if constexpr (is_exact<S>) {
    return exact_rank(a);
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(kRankTol);
    return static_cast<int>(lu.rank());
  }
}

// Right kernel of a (cols x d), identity when a has no rows.
template <typename S>
Mat<S> kernel(const Mat<S>& a, int cols) {
  if (a.rows() == 0) {
    Mat<S> id(cols, cols);
    for (int i = 0; i < cols; ++i)
      for (int j = 0; j < cols; ++j) id(i, j) = S(i == j ? 1 : 0);
    return id;
  }
  if constexpr (is_exact<S>) {
    return exact_nullspace(a);
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(kRankTol);
    if (lu.rank() == cols) return Eigen::MatrixXd(cols, 0);
    return lu.kernel();
  }
}

template <typename S>
double to_d(const S& v) {
  if constexpr (is_exact<S>)
    return v.get_d();
  else
    return v;
}

Vec<Rational> field_at(const VectorField& f, const std::vector<Rational>& p) {
  auto v = f.eval(std::span<const Rational>(p));
  Vec<Rational> out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

Eigen::VectorXd field_at(const VectorField& f, const Eigen::VectorXd& p) { return f.eval(p); }

template <typename S>
Mat<S> columns(const std::vector<VectorField>& fs, const Point<S>& p, int n) {
  Mat<S> m(n, static_cast<Eigen::Index>(fs.size()));
  for (std::size_t j = 0; j < fs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = field_at(fs[j], p);
  return m;
}

template <typename S>
Mat<S> append_column(const Mat<S>& c, const Mat<S>& col) {
  Mat<S> out(c.rows(), c.cols() + 1);
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) out(i, j) = c(i, j);
    out(i, c.cols()) = col(i, 0);
  }
  return out;
}

// Graded quotient data at one point for a fixed adapted frame.
template <typename S>
struct Graded {
  Mat<S> A, Ainv;
  std::vector<int> begin, dims;  // row range of each level in frame coordinates
  std::vector<Mat<S>> P, B, G;
};

// Generators of each level: X_a at level 1, [X_{a_1},[...,[X_b,X_c]]] with
// b < c at level i >= 2.
std::vector<std::vector<VectorField>> level_generators(BracketTable& table, int m, int r) {
  std::vector<std::vector<VectorField>> out;
  if (r >= 1) out.push_back(table.family());
  for (int i = 2; i <= r; ++i) {
    std::vector<VectorField> level;
    const int prefix = i - 2;
    std::size_t count = 1;
    for (int a = 0; a < prefix; ++a) count *= static_cast<std::size_t>(m);
    for (std::size_t idx = 0; idx < count; ++idx) {
      BracketWord w;
      std::size_t rem = idx;
      for (int a = 0; a < prefix; ++a) {
        w.letters.push_back(static_cast<int>(rem % static_cast<std::size_t>(m)));
        rem /= static_cast<std::size_t>(m);
      }
      for (int b = 0; b < m; ++b)
        for (int c = b + 1; c < m; ++c) {
          BracketWord full = w;
          full.letters.push_back(b);
          full.letters.push_back(c);
          level.push_back(table.value(full));
        }
    }
    out.push_back(std::move(level));
  }
  return out;
}

class Evaluator {
 public:
  Evaluator(const SRStructure& s, const AdaptedFrame& frame) : s_(s), table_(s.fields), frame_(frame) {
    r_ = frame.levels.empty() ? 0 : *std::max_element(frame.levels.begin(), frame.levels.end());
    gens_ = level_generators(table_, s.m(), r_);
  }

  const AdaptedFrame& frame() const { return frame_; }

  template <typename S>
  Graded<S> graded(const Point<S>& p) const {
    const int n = s_.dim;
    Graded<S> g;
    g.A = columns<S>(frame_.fields, p, n);
    auto inv = inverse<S>(g.A);
    if (!inv) throw SingularQuotient("frame " + frame_.to_string(s_.field_names) + " is not a basis at the point");
    g.Ainv = *inv;
    for (int i = 1; i <= r_; ++i) {
      int b = static_cast<int>(std::count_if(frame_.levels.begin(), frame_.levels.end(), [i](int l) { return l < i; }));
      int d = static_cast<int>(std::count(frame_.levels.begin(), frame_.levels.end(), i));
      g.begin.push_back(b);
      g.dims.push_back(d);
      Mat<S> coords = mul<S>(g.Ainv, columns<S>(gens_[i - 1], p, n));
      Mat<S> P = coords.middleRows(b, d);
      Mat<S> B = mul<S>(P, tr<S>(P));
      std::optional<Mat<S>> G = d ? inverse<S>(B) : std::optional<Mat<S>>(Mat<S>(0, 0));
      if (!G) throw SingularQuotient("level " + std::to_string(i) + " quotient map is not onto");
      g.P.push_back(std::move(P));
      g.B.push_back(std::move(B));
      g.G.push_back(std::move(*G));
    }
    return g;
  }

 private:
  const SRStructure& s_;
  mutable BracketTable table_;
  AdaptedFrame frame_;
  int r_ = 0;
  std::vector<std::vector<VectorField>> gens_;
};

template <typename S>
struct StratumCore {
  S det_C;
  std::vector<S> det_G;
  std::vector<int> growth_N;
};

// Adapted basis v = T C of T_qN (levels of gr^N) and the induced Gram
// determinants.
template <typename S>
StratumCore<S> stratum_core(const Graded<S>& g, const Mat<S>& T) {
  const int k = static_cast<int>(T.cols());
  const int n = static_cast<int>(T.rows());
  const int r = static_cast<int>(g.dims.size());
  StratumCore<S> out;
  Mat<S> Y = mul<S>(g.Ainv, T);
  Mat<S> C(k, 0);
  std::vector<int> lev;
  for (int i = 0; i < r; ++i) {
    const int top = g.begin[i] + g.dims[i];
    Mat<S> K = kernel<S>(Mat<S>(Y.bottomRows(n - top)), k);
    out.growth_N.push_back(static_cast<int>(K.cols()));
    for (Eigen::Index c = 0; c < K.cols(); ++c) {
      Mat<S> trial = append_column<S>(C, Mat<S>(K.col(c)));
      if (rank<S>(trial) > C.cols()) {
        C = std::move(trial);
        lev.push_back(i);
      }
    }
  }
  Mat<S> V = mul<S>(Y, C);
  for (int i = 0; i < r; ++i) {
    std::vector<Eigen::Index> cols;
    for (std::size_t j = 0; j < lev.size(); ++j)
      if (lev[j] == i) cols.push_back(static_cast<Eigen::Index>(j));
    Mat<S> Yi(g.dims[i], static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index a = 0; a < Yi.rows(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b) Yi(a, static_cast<Eigen::Index>(b)) = V(g.begin[i] + a, cols[b]);
    out.det_G.push_back(det<S>(mul<S>(tr<S>(Yi), mul<S>(g.G[i], Yi))));
  }
  out.det_C = det<S>(C);
  return out;
}

template <typename S>
double stratum_value(const StratumCore<S>& c) {
  S prod(1);
  for (const auto& d : c.det_G) prod *= d;
  const double dc = std::abs(to_d(c.det_C));
  if (dc == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(to_d(prod)) / dc;
}

std::size_t best_frame(const SRStructure& s, const Eigen::VectorXd& p, const std::vector<AdaptedFrame>& frames) {
  if (frames.empty()) throw SingularQuotient("no adapted frame at the point");
  std::size_t best = 0;
  double bv = -1;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    double v = frame_volume(s, p, frames[i]);
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  return best;
}

AdaptedFrame frame_at(const SRStructure& s, BracketTable& table, const Eigen::VectorXd& p) {
  FlagData flag = flag_at(table, s.dim, p);
  auto frames = adapted_frames(table, p, flag);
  return frames[best_frame(s, p, frames)];
}

std::string format_point(const Eigen::VectorXd& x) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

bool looks_regular(BracketTable& table, int n, const Eigen::VectorXd& p, const std::vector<int>& growth) {
  Rng rng(7);
  const double radius = 1e-3 * (1.0 + p.norm());
  for (int j = 0; j < 8; ++j)
    if (flag_at(table, n, rng.uniform_in_ball(p, radius)).growth != growth) return false;
  return true;
}

RatMat exact_jacobian(const Stratum& N, const std::vector<Rational>& param) {
  RatMat T(static_cast<Eigen::Index>(N.map.size()), N.k);
  for (std::size_t i = 0; i < N.map.size(); ++i)
    for (int a = 0; a < N.k; ++a) T(static_cast<Eigen::Index>(i), a) = N.map[i].diff(a).eval(std::span<const Rational>(param));
  return T;
}

}  // namespace

Eigen::MatrixXd GradedInnerProduct::gram_in(int level, const Eigen::MatrixXd& vectors) const {
  if (level < 1 || level > static_cast<int>(gram.size()))
    throw ValidationError("popp.level", "level out of range");
  Eigen::MatrixXd coords = to_double(frame_inverse) * vectors;
  Eigen::MatrixXd Y = coords.middleRows(level_rows_begin[level - 1], dims[level - 1]);
  return Y.transpose() * gram[level - 1] * Y;
}

GradedInnerProduct graded_ip(const SRStructure& s, std::span<const Rational> p, const AdaptedFrame& frame) {
  Evaluator ev(s, frame);
  std::vector<Rational> pv(p.begin(), p.end());
  Graded<Rational> g = ev.graded<Rational>(pv);
  GradedInnerProduct ip;
  ip.dims = g.dims;
  ip.level_rows_begin = g.begin;
  ip.frame_inverse = g.Ainv;
  Eigen::MatrixXd A = to_double(g.A);
  for (std::size_t i = 0; i < g.dims.size(); ++i) {
    ip.P.push_back(g.P[i]);
    ip.B.push_back(g.B[i]);
    ip.gram.push_back(to_double(g.G[i]));
    ip.basis.push_back(A.middleCols(g.begin[i], g.dims[i]));
  }
  return ip;
}

PoppDensity popp_density(const SRStructure& s, std::span<const Rational> p, const AdaptedFrame& frame) {
  Evaluator ev(s, frame);
  std::vector<Rational> pv(p.begin(), p.end());
  Graded<Rational> g = ev.graded<Rational>(pv);
  PoppDensity d;
  d.point = to_double(p);
  d.frame = frame.to_string(s.field_names);
  Rational prod = 1;
  for (const auto& B : g.B) {
    Rational db = exact_det(B);
    d.det_B.push_back(db.get_d());
    prod *= db;
  }
  Rational omega = s.volume.eval(p) * exact_det(g.A);
  if (omega == 0) throw SingularQuotient("volume form vanishes on the frame at the point");
  d.omega_frame = std::abs(omega.get_d());
  Rational sq = omega * omega * prod;
  d.value = 1.0 / std::sqrt(sq.get_d());
  return d;
}

PoppDensity popp_density(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p) {
  Eigen::VectorXd x = p;
  BracketTable table(s.fields);
  FlagData flag = flag_at(table, s.dim, x);
  auto frames = adapted_frames(table, x, flag);
  std::vector<Rational> pq = to_rational(x);
  PoppDensity d = popp_density(s, pq, frames[best_frame(s, x, frames)]);
  d.experimental = !looks_regular(table, s.dim, x, flag.growth);
  return d;
}

std::vector<PoppDensity> popp_density_all_frames(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p) {
  Eigen::VectorXd x = p;
  BracketTable table(s.fields);
  FlagData flag = flag_at(table, s.dim, x);
  std::vector<Rational> pq = to_rational(x);
  std::vector<PoppDensity> out;
  for (const auto& f : adapted_frames(table, x, flag)) out.push_back(popp_density(s, pq, f));
  return out;
}

WeakEquivalentReport weak_equivalent_check(const SRStructure& s, const GridSpec& grid, const ClassifyOptions& opts) {
  WeakEquivalentReport rep;
  rep.min_product = std::numeric_limits<double>::infinity();
  BracketTable table(s.fields);
  for (const auto& gp : classify_grid(s, grid, opts)) {
    if (gp.cls != PointClass::Regular) {
      ++rep.skipped;
      continue;
    }
    auto frames = adapted_frames(table, gp.point, gp.flag);
    if (frames.empty()) {
      ++rep.skipped;
      continue;
    }
    const double nu_p = nu(s, gp.point, frames);
    const double d = popp_density(s, to_rational(gp.point), frames[best_frame(s, gp.point, frames)]).value;
    const double prod = nu_p * d;
    rep.min_product = std::min(rep.min_product, prod);
    rep.max_product = std::max(rep.max_product, prod);
    ++rep.points;
  }
  if (rep.points == 0) throw ValidationError("popp.weak-equivalent", "no regular grid points");
  rep.C = std::max(rep.max_product, 1.0 / rep.min_product);
  return rep;
}

EquisingularReport equisingular_check(const SRStructure& s, const Stratum& N, int samples, std::uint64_t seed) {
  if (samples < 1) throw ValidationError("popp.samples", "sample count must be positive");
  BracketTable table(s.fields);
  EquisingularReport rep;
  rep.stratum = N.name;
  Eigen::VectorXd lo = N.parambox.lower(), hi = N.parambox.upper();
  Eigen::VectorXd first;
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    // interior parameters; the first sample is the parameter-box center
    Eigen::VectorXd u = i == 0 ? Eigen::VectorXd::Constant(N.k, 0.5) : Eigen::VectorXd(halton(static_cast<std::uint64_t>(i) + seed, N.k));
    Eigen::VectorXd sp = lo + (hi - lo).cwiseProduct(0.05 * Eigen::VectorXd::Ones(N.k) + 0.9 * u);
    std::vector<Rational> sq = to_rational(sp);
    std::vector<Rational> xq = N.point(std::span<const Rational>(sq));
    Eigen::VectorXd x = to_double(xq);
    FlagData flag = flag_at(table, s.dim, x);
    auto frames = adapted_frames(table, x, flag);
    if (frames.empty()) throw SingularQuotient("no adapted frame on stratum " + N.name);
    Evaluator ev(s, frames.front());
    StratumCore<Rational> core = stratum_core<Rational>(ev.graded<Rational>(xq), exact_jacobian(N, sq));
    if (i == 0) {
      rep.growth = flag.growth;
      rep.growth_N = core.growth_N;
      first = x;
    } else if (flag.growth != rep.growth || core.growth_N != rep.growth_N) {
      throw NotEquisingular("flag data of stratum " + N.name + " is not constant", format_point(first), format_point(x));
    }
    ++rep.samples;
  }
  int prev = 0;
  for (std::size_t i = 0; i < rep.growth_N.size(); ++i) {
    rep.Q_N += static_cast<int>(i + 1) * (rep.growth_N[i] - prev);
    prev = rep.growth_N[i];
  }
  return rep;
}

StratumPopp popp_on_stratum(const SRStructure& s, const Stratum& N, const Eigen::Ref<const Eigen::VectorXd>& param) {
  std::vector<Rational> sq = to_rational(Eigen::VectorXd(param));
  std::vector<Rational> xq = N.point(std::span<const Rational>(sq));
  BracketTable table(s.fields);
  Evaluator ev(s, frame_at(s, table, to_double(xq)));
  StratumCore<Rational> core = stratum_core<Rational>(ev.graded<Rational>(xq), exact_jacobian(N, sq));
  if (core.det_C == 0) throw ValidationError("popp.stratum-map", "stratum map is not an immersion at the parameter");
  StratumPopp out;
  out.growth_N = core.growth_N;
  Rational prod = 1;
  for (const auto& d : core.det_G) {
    out.det_G.push_back(d.get_d());
    prod *= d;
  }
  Rational sq2 = prod / (core.det_C * core.det_C);
  out.value = std::sqrt(sq2.get_d());
  return out;
}

namespace {

// Floating-point density of a stratum along its parametrization.
class StratumDensity {
 public:
  StratumDensity(const SRStructure& s, const Stratum& N) : s_(s), N_(N), table_(s.fields) {
    for (const auto& c : N.map)
      for (int a = 0; a < N.k; ++a) dmap_.push_back(c.diff(a));
    Eigen::VectorXd mid = N.parambox.center();
    ev_.emplace(s, frame_at(s, table_, N.point(mid)));
  }

  double operator()(const Eigen::VectorXd& param) {
    Eigen::VectorXd x = N_.point(param);
    Eigen::MatrixXd T(s_.dim, N_.k);
    for (int i = 0; i < s_.dim; ++i)
      for (int a = 0; a < N_.k; ++a) T(i, a) = dmap_[static_cast<std::size_t>(i * N_.k + a)].eval(param);
    try {
      return stratum_value(stratum_core<double>(ev_->graded<double>(x), T));
    } catch (const SingularQuotient&) {
      // the reference frame degenerates here; adapt a new one
      Evaluator local(s_, frame_at(s_, table_, x));
      return stratum_value(stratum_core<double>(local.graded<double>(x), T));
    }
  }

 private:
  const SRStructure& s_;
  const Stratum& N_;
  BracketTable table_;
  std::vector<Polynomial> dmap_;
  std::optional<Evaluator> ev_;
};

bool open_stratum_contains(const Stratum& N, const Eigen::VectorXd& x) {
  Eigen::VectorXd lo = N.parambox.lower(), hi = N.parambox.upper();
  Eigen::VectorXd s = N.parambox.center();
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd r = N.point(s) - x;
    if (r.norm() < 1e-12 * (1.0 + x.norm())) break;
    Eigen::VectorXd step = N.jacobian(s).fullPivLu().solve(r);
    if (!step.allFinite()) return false;
    s -= step;
  }
  if ((N.point(s) - x).norm() > 1e-9 * (1.0 + x.norm())) return false;
  return ((s - lo).array() >= -1e-12).all() && ((hi - s).array() >= -1e-12).all();
}

StratumIntegral integrate_stratum(const SRStructure& s, const Stratum& N, const Box& region,
                                  const StratifiedOptions& opts, Rng rng) {
  StratumIntegral out;
  out.stratum = N.name;
  out.open = N.is_open(s.dim);
  StratumDensity f(s, N);
  const int k = N.k;
  Eigen::VectorXd lo = N.parambox.lower(), hi = N.parambox.upper();
  const double jac = (hi - lo).prod();
  auto eval = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd sp = lo + (hi - lo).cwiseProduct(u);
    if (!region.contains(N.point(sp))) return 0.0;
    double v = f(sp);
    return std::isfinite(v) ? v : 0.0;
  };
  if (k == 0) {
    out.value = eval(Eigen::VectorXd(0));
    out.windows.push_back(out.value);
    return out;
  }
  auto delta = [](int j) { return std::ldexp(1.0, -(j + 3)); };
  double total = 0, var = 0;
  for (int j = 0; j <= opts.windows; ++j) {
    const double d_out = delta(j);
    const double d_in = j ? delta(j - 1) : 0.5;
    // shell W_j \ W_{j-1}: piece i has coordinates < i inside the inner
    // window and coordinate i between the two windows
    for (int i = 0; i < k; ++i) {
      const double inner = 1 - 2 * d_in, outer = 1 - 2 * d_out;
      const double vol = std::pow(inner, i) * 2 * (d_in - d_out) * std::pow(outer, k - 1 - i);
      if (vol <= 0) continue;
      const int count = j == 0 ? opts.samples_per_window : std::max(8, opts.samples_per_window / k);
      double sum = 0, sum2 = 0;
      for (int c = 0; c < count; ++c) {
        Eigen::VectorXd u(k);
        for (int a = 0; a < k; ++a) {
          if (a < i) {
            u[a] = rng.uniform(d_in, 1 - d_in);
          } else if (a == i) {
            double t = rng.uniform(d_out, d_in);
            u[a] = rng.uniform() < 0.5 ? t : 1 - t;
          } else {
            u[a] = rng.uniform(d_out, 1 - d_out);
          }
        }
        double v = eval(u);
        sum += v;
        sum2 += v * v;
      }
      const double mean = sum / count;
      const double sv = std::max(0.0, sum2 / count - mean * mean);
      total += jac * vol * mean;
      var += jac * jac * vol * vol * sv / count;
    }
    out.windows.push_back(total);
  }
  out.value = total;
  out.std_error = std::sqrt(var);
  const double base = out.windows.front();
  out.divergent = base > 0 && total > opts.divergence_factor * base;
  return out;
}

}  // namespace

StratifiedMeasures stratified_measures(const SRStructure& s, const Box& region, const StratifiedOptions& opts) {
  if (region.dim() != s.dim) throw ValidationError("popp.region", "region dimension does not match the structure");
  if (s.strata.empty()) throw StrataNotPartition("no strata declared");
  Rng root(opts.seed);
  {
    Rng rng = root.split(0);
    Eigen::VectorXd lo = region.lower(), hi = region.upper();
    for (int c = 0; c < opts.coverage_samples; ++c) {
      Eigen::VectorXd x = rng.uniform_in_box(lo, hi);
      int hits = 0;
      for (const auto& N : s.strata)
        if (N.is_open(s.dim) && open_stratum_contains(N, x)) ++hits;
      if (hits != 1)
        throw StrataNotPartition("point " + format_point(x) + " lies in " + std::to_string(hits) + " open strata");
    }
  }
  StratifiedMeasures out;
  std::vector<int> q;
  for (const auto& N : s.strata) {
    q.push_back(equisingular_check(s, N, 8, opts.seed).Q_N);
    out.dim_H = std::max(out.dim_H, q.back());
  }
  double var1 = 0, var2 = 0;
  for (std::size_t i = 0; i < s.strata.size(); ++i) {
    StratumIntegral si = integrate_stratum(s, s.strata[i], region, opts, root.split(i + 1));
    si.Q_N = q[i];
    if (si.Q_N == out.dim_H) {
      out.P1 += si.value;
      var1 += si.std_error * si.std_error;
      out.P1_divergent = out.P1_divergent || si.divergent;
    }
    if (si.open) {
      out.P2 += si.value;
      var2 += si.std_error * si.std_error;
      out.P2_divergent = out.P2_divergent || si.divergent;
    }
    out.strata.push_back(std::move(si));
  }
  out.P1_stderr = std::sqrt(var1);
  out.P2_stderr = std::sqrt(var2);
  const double inf = std::numeric_limits<double>::infinity();
  if (out.P1_divergent) out.P1 = inf;
  if (out.P2_divergent) out.P2 = inf;
  return out;
}

}  // namespace srm
