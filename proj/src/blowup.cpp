#include "srm/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "srm/errors.hpp"
#include "srm/flag.hpp"
#include "srm/random.hpp"

namespace srm {

namespace {

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
    const double m = mean();
    return std::sqrt(std::max(0.0, sum2 / n - m * m) / (n - 1));
  }
};

bool regular_at(const SRStructure& s, const Eigen::VectorXd& p) {
  const auto growth = flag_at(s, p).growth;
  Rng rng(3);
  const double radius = 1e-3 * (1.0 + p.norm());
  for (int j = 0; j < 8; ++j)
    if (flag_at(s, rng.uniform_in_ball(p, radius)).growth != growth) return false;
  return true;
}

int cloud_for_budget(int budget) {
  switch (budget) {
    case 1:
      return 12;
    case 2:
      return 24;
    case 3:
      return 40;
    default:
      return 60;
  }
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Sample box of the blown ball and the nilpotent ball, clipped to the
// dictionary domain delta_R [-2,2]^n.
SampleBox clipped_box(const SampleBox& b, double R, const Weights& w) {
  SampleBox out = b;
  for (Eigen::Index i = 0; i < out.lo.size(); ++i) {
    const double lim = 2.0 * std::pow(R, w[static_cast<std::size_t>(i)]);
    out.lo[i] = std::max(out.lo[i], -lim);
    out.hi[i] = std::min(out.hi[i], lim);
  }
  return out;
}

Eigen::VectorXd unscale(const Eigen::VectorXd& z, double R, const Weights& w) { return dilate(z, 1.0 / R, w); }

// Shared state of one base point: approximation, nilpotent oracle, regularity.
struct Base {
  NilpotentApprox approx;
  Eigen::VectorXd p;
  bool regular = true;

  Base(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& point)
      : approx(nilpotent_approximation(s, to_rational(Eigen::VectorXd(point)))), p(point),
        regular(regular_at(s, p)) {}
};

Distortion distortion_at(const Base& b, const DistanceOracle& nil0, double R, double eps,
                         const DistortionOptions& opts) {
  const int n = b.approx.dim();
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);
  const OracleOptions oo = opts.measure.oracle();
  SRStructure blown = blowup_structure(b.approx, rational_from_double(eps));
  DistanceOracle bl0(blown.fields, origin, R, oo);
  const SampleBox box = clipped_box(hull(sample_box(bl0), sample_box(nil0)), R, b.approx.weights());

  const int want = opts.cloud > 0 ? opts.cloud : cloud_for_budget(opts.measure.budget);
  std::vector<Eigen::VectorXd> cloud;
  Rng rng(opts.measure.seed, 0xd157);
  for (int tries = 0; static_cast<int>(cloud.size()) < want && tries < 200 * want; ++tries) {
    Eigen::VectorXd z = rng.uniform_in_box(box.lo, box.hi);
    if (bl0.inside(z, R)) cloud.push_back(z);
  }
  if (cloud.empty()) throw NumericalError("blowup.cloud", "no sample fell in the blown-up ball");

  Distortion out;
  auto compare = [&](const DistanceOracle& de, const DistanceOracle& dh, const Eigen::VectorXd& q) {
    const DistanceEstimate a = de.distance_to(q), h = dh.distance_to(q);
    if (!a.found() || !h.found()) {
      ++out.skipped;
      return;
    }
    const double gap = std::abs(a.value - h.value);
    ++out.pairs;
    if (gap > out.value || out.pairs == 1) {
      out.value = std::max(out.value, gap);
      out.error = a.error + h.error;
    }
  };
  for (const auto& q : cloud) compare(bl0, nil0, q);
  const std::size_t extra = std::min<std::size_t>(cloud.size(), static_cast<std::size_t>(std::max(0, opts.anchors - 1)));
  for (std::size_t a = 0; a < extra; ++a) {
    DistanceOracle ea(blown.fields, cloud[a], 2.5 * R, oo);
    DistanceOracle ha(b.approx.fields, cloud[a], 2.5 * R, oo);
    for (std::size_t j = 0; j < cloud.size(); ++j)
      if (j != a) compare(ea, ha, cloud[j]);
  }
  if (out.pairs == 0) throw NumericalError("blowup.distance", "no pair of distances could be resolved");
  return out;
}

Discrepancy discrepancy_at(const SRStructure& s, const Base& b, const DistanceOracle& nil0, double R, double eps,
                           BlowupMeasure kind, const MeasureOptions& opts) {
  const int n = b.approx.dim();
  const Weights& w = b.approx.weights();
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);
  SRStructure blown = blowup_structure(b.approx, rational_from_double(eps));
  DistanceOracle bl0(blown.fields, origin, R, opts.oracle());
  const SampleBox box = clipped_box(hull(sample_box(bl0), sample_box(nil0)), R, w);
  const std::vector<TestFunction> dict = test_dictionary(w);
  const double rho0 = b.approx.density_at_origin();

  // S^Q_{d/eps} relative to its limit: the spherical density ratio
  // sd(x)/sd(p) = FrameDensity(p)/FrameDensity(x), nilpotent ball frozen.
  std::optional<FrameDensity> fd;
  double fd_p = 1;
  if (kind == BlowupMeasure::Spherical) {
    fd.emplace(s, b.p);
    fd_p = (*fd)(b.p);
  }
  const Weights& wv = w;
  auto to_x = [&](const Eigen::VectorXd& z) { return b.approx.chart.to_x(dilate(z, eps, wv)); };

  std::vector<Accumulator> diff(dict.size());
  Accumulator hat, outside;
  Rng rng(opts.seed, 0xb10e);
  const int N = opts.sample_count();
  for (int k = 0; k < N; ++k) {
    const Eigen::VectorXd z = rng.uniform_in_box(box.lo, box.hi);
    const DistanceEstimate dh = nil0.distance_to(z);
    const double hat_d = dh.found() ? dh.value : std::numeric_limits<double>::infinity();
    const bool ih = hat_d < R;
    const bool ie = bl0.inside(z, R);
    double fe = 0;
    if (ie) {
      fe = blown.density(z);
      if (fd) fe *= fd_p / (*fd)(to_x(z));
    }
    const double fh = ih ? rho0 : 0.0;
    hat.add(fh);
    if (ie) outside.add(hat_d > 1.2 * R ? 1.0 : 0.0);
    const Eigen::VectorXd u = unscale(z, R, w);
    const double hd = hat_d / R;
    for (std::size_t j = 0; j < dict.size(); ++j) diff[j].add(dict[j].h(u, hd) * (fe - fh));
  }
  const double norm = hat.mean();
  if (norm <= 0) throw NumericalError("blowup.samples", "no sample fell in the nilpotent ball");
  Discrepancy out;
  out.formal = kind == BlowupMeasure::Spherical && !b.regular;
  out.outside_fraction = outside.n ? outside.mean() : 0.0;
  for (std::size_t j = 0; j < dict.size(); ++j) {
    const double v = std::abs(diff[j].mean()) / norm;
    if (j == 0 || v > out.value) {
      out.value = v;
      out.std_error = diff[j].std_error() / norm;
      out.argmax = dict[j].name;
    }
  }
  return out;
}

}  // namespace

std::vector<TestFunction> test_dictionary(const Weights& w) {
  const int n = static_cast<int>(w.size());
  std::vector<TestFunction> out;
  out.push_back({"1", [](const Eigen::VectorXd&, double) { return 1.0; }});
  for (int i = 0; i < n; ++i)
    out.push_back({"u" + std::to_string(i + 1), [i](const Eigen::VectorXd& u, double) { return u[i] / 2; }});
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (w[static_cast<std::size_t>(i)] + w[static_cast<std::size_t>(j)] <= 2)
        out.push_back({"u" + std::to_string(i + 1) + "u" + std::to_string(j + 1),
                       [i, j](const Eigen::VectorXd& u, double) { return u[i] * u[j] / 4; }});
  out.push_back({"bump", [](const Eigen::VectorXd&, double d) { return std::exp(-2.0 * d * d); }});
  constexpr double scale = 0.05;
  for (int i = 0; i < n && out.size() < 20; ++i)
    out.push_back({"H" + std::to_string(i + 1),
                   [i](const Eigen::VectorXd& u, double) { return sigmoid(u[i] / scale); }});
  for (int i = 0; i < n && out.size() < 20; ++i)
    for (int j = i + 1; j < n && out.size() < 20; ++j)
      for (int sj : {1, -1}) {
        if (out.size() >= 20) break;
        out.push_back({"Q" + std::to_string(i + 1) + (sj > 0 ? "+" : "-") + std::to_string(j + 1),
                       [i, j, sj](const Eigen::VectorXd& u, double) {
                         return sigmoid(u[i] / scale) * sigmoid(sj * u[j] / scale);
                       }});
      }
  for (double c : {0.5, -0.5})
    for (int i = 0; i < n && out.size() < 20; ++i)
      out.push_back({"H" + std::to_string(i + 1) + (c > 0 ? ">" : "<") + "0.5",
                     [i, c](const Eigen::VectorXd& u, double) { return sigmoid((c > 0 ? 1 : -1) * (u[i] - c) / scale); }});
  return out;
}

Distortion gh_distortion(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, double R, double eps,
                         const DistortionOptions& opts) {
  if (R <= 0 || eps <= 0) throw ValidationError("blowup.scale", "radius and scale must be positive");
  Base b(s, p);
  DistanceOracle nil0(b.approx.fields, Eigen::VectorXd::Zero(b.approx.dim()), R, opts.measure.oracle());
  return distortion_at(b, nil0, R, eps, opts);
}

Discrepancy measure_discrepancy(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, double R,
                                double eps, BlowupMeasure kind, const MeasureOptions& opts) {
  if (R <= 0 || eps <= 0) throw ValidationError("blowup.scale", "radius and scale must be positive");
  Base b(s, p);
  DistanceOracle nil0(b.approx.fields, Eigen::VectorXd::Zero(b.approx.dim()), R, opts.oracle());
  return discrepancy_at(s, b, nil0, R, eps, kind, opts);
}

BlowupExperiment blowup_experiment(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, double R,
                                   const std::vector<double>& eps, BlowupMeasure kind,
                                   const DistortionOptions& opts) {
  if (R <= 0) throw ValidationError("blowup.scale", "radius must be positive");
  Base b(s, p);
  DistanceOracle nil0(b.approx.fields, Eigen::VectorXd::Zero(b.approx.dim()), R, opts.measure.oracle());
  BlowupExperiment ex;
  ex.point = p;
  ex.R = R;
  ex.kind = kind;
  ex.Q = b.approx.Q;
  for (double e : eps) {
    if (e <= 0) throw ValidationError("blowup.scale", "scales must be positive");
    ex.rows.push_back({e, distortion_at(b, nil0, R, e, opts), discrepancy_at(s, b, nil0, R, e, kind, opts.measure)});
  }
  return ex;
}

bool decreasing_within_noise(const std::vector<double>& values, const std::vector<double>& errors, double k) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double slack = k * (errors.size() > i ? errors[i] + errors[i - 1] : 0.0);
    if (values[i] > values[i - 1] + slack) return false;
  }
  return true;
}

double spherical_density_variation(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, double radius,
                                   const MeasureOptions& opts) {
  const Eigen::VectorXd pv = p;
  const double center = spherical_density(s, pv, opts).value;
  double worst = 0;
  for (int i = 0; i < pv.size(); ++i)
    for (double sgn : {1.0, -1.0}) {
      Eigen::VectorXd q = pv;
      q[i] += sgn * radius;
      // the spherical density of S^Q against the volume of s
      worst = std::max(worst, std::abs(spherical_density(s, q, opts).value - center) / center);
    }
  return worst;
}

std::string to_string(BlowupMeasure m) { return m == BlowupMeasure::Smooth ? "smooth" : "spherical"; }

BlowupMeasure blowup_measure_from_string(const std::string& name) {
  if (name == "smooth") return BlowupMeasure::Smooth;
  if (name == "spherical") return BlowupMeasure::Spherical;
  throw ValidationError("blowup.measure", "unknown measure '" + name + "' (smooth or spherical)");
}

}  // namespace srm
