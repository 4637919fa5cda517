#ifndef SRM_MEASURES_HPP
#define SRM_MEASURES_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "srm/distance.hpp"
#include "srm/nilpotent.hpp"
#include "srm/structure.hpp"

namespace srm {

struct MCEstimate {
  double mean = 0;
  double std_error = 0;  // sample std / sqrt(count), scaled like mean
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo sample counts for budget levels 1..4.
int samples_for_budget(int budget);

struct MeasureOptions {
  int budget = 2;
  int samples = 0;  // 0 selects samples_for_budget(budget)
  std::uint64_t seed = 1;

  int sample_count() const { return samples > 0 ? samples : samples_for_budget(budget); }
  OracleOptions oracle() const { return OracleOptions::from_budget(budget, seed); }
};

/// Sampling box [center + margin (lo - center), center + margin (hi - center)]
/// around the library extent of the oracle.
struct SampleBox {
  Eigen::VectorXd lo, hi;
  double volume() const { return (hi - lo).prod(); }
};
SampleBox sample_box(const DistanceOracle& oracle, double margin = 1.15);
SampleBox hull(const SampleBox& a, const SampleBox& b);

/// Integral of density over {z : d(center, z) < r} by uniform sampling.
MCEstimate ball_measure(const std::vector<VectorField>& fields, const Polynomial& density,
                        const Eigen::Ref<const Eigen::VectorXd>& center, double r, const MeasureOptions& opts);

/// hat mu^p(hat B_p): volume of the nilpotent unit ball (radius r) in
/// privileged coordinates times omega(d/dz)|_0.
MCEstimate mu_hat_ball(const NilpotentApprox& approx, const MeasureOptions& opts = {}, double r = 1.0);
MCEstimate mu_hat_ball(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p,
                       const MeasureOptions& opts = {}, double r = 1.0);

struct SphericalDensity {
  double value = 0;  // 2^Q / hat mu^p(hat B_p)
  double std_error = 0;
  int Q = 0;
  bool formal = false;  // p is not a regular point
  MCEstimate mu_hat;
};

SphericalDensity spherical_density(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p,
                                   const MeasureOptions& opts = {});

struct BallRatio {
  double eps = 0;
  MCEstimate scaled;   // mu(B(p, eps)) / eps^Q
  MCEstimate mu_hat;   // hat mu^p(hat B_p)
  double gap = 0;      // |scaled - mu_hat| / mu_hat
  double gap_error = 0;
};

/// mu(B(p,eps))/eps^Q against hat mu^p(hat B_p), with common random numbers
/// in privileged coordinates (the ball B(p,eps) is sampled through its
/// dilation delta_{1/eps}).
std::vector<BallRatio> density_consistency(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p,
                                           const std::vector<double>& eps, const MeasureOptions& opts = {});

/// Ball-box gauge max_i |z_i|^{1/w_i} in privileged coordinates at a center,
/// comparable to d(center, .) up to constants.
class BallBoxGauge {
 public:
  BallBoxGauge(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& center);
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Gauge of z(a) - z(b), a symmetric box quasi-distance near the center.
  double between(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) const;

 private:
  Eigen::VectorXd z(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  PrivilegedChart chart_;
  std::vector<double> inv_w_;
};

std::vector<Eigen::VectorXd> box_cloud(const Box& box, const std::vector<int>& counts);
std::vector<Eigen::VectorXd> stratum_cloud(const Stratum& N, const std::vector<int>& counts);

/// Point cloud of a set at resolution eps.
using CloudSampler = std::function<std::vector<Eigen::VectorXd>(double eps)>;
/// Grid with spacing eps^{e_i} / per_ball along axis i (exponents default to
/// the weights at the box center, in coordinate order).
CloudSampler box_sampler(const SRStructure& s, const Box& box, std::vector<int> exponents = {},
                         double per_ball = 3.0);
/// Grid in the parameter box; exponents default to the levels of gr^N.
CloudSampler stratum_sampler(const SRStructure& s, const Stratum& N, std::vector<int> exponents = {},
                             double per_ball = 3.0);

struct CoveringReport {
  std::vector<double> scales;
  std::vector<std::size_t> counts;
  double dimension = 0;  // minus the least-squares slope of log N against log eps
  double residual = 0;   // rms residual of the fit
};

/// Greedy covering of a point cloud by gauge balls of each radius.
CoveringReport covering_dimension(const SRStructure& s, const std::vector<Eigen::VectorXd>& points,
                                  const std::vector<double>& scales);
/// With a window, only pieces centered in it are counted; a window inside the
/// set removes the truncation of balls at the boundary of the set.
CoveringReport covering_dimension(const SRStructure& s, const CloudSampler& sampler, const std::vector<double>& scales,
                                  const std::optional<Box>& window = std::nullopt);

struct SandwichRow {
  double eps = 0;
  double spherical = 0;  // balls of radius eps/2: count * eps^alpha
  double arbitrary = 0;  // the same pieces with their own diameters
  bool holds = false;    // arbitrary <= 2 spherical and spherical <= 2 * 2^alpha * arbitrary
};

struct SandwichReport {
  double alpha = 0;
  std::vector<SandwichRow> rows;
  bool holds = false;
};

SandwichReport sandwich_check(const SRStructure& s, const CloudSampler& sampler, double alpha,
                              const std::vector<double>& scales);

struct IsodiametricCandidate {
  std::string name;
  MCEstimate volume_ratio;   // Lebesgue volume relative to the unit ball
  double diameter = 0;       // max sampled pairwise distance
  double diameter_upper = 0; // the same with distance error bars added
  double ratio = 0;          // S^Q(A) / diam(A)^Q
  double certified = 0;      // volume lower bound over diameter upper bound
};

struct IsodiametricOptions {
  MeasureOptions measure;
  int boundary_points = 0;  // 0 selects 16, 32, 45, 45 by budget
  int fill_steps = 16;      // radial grid for the cap fill
};

struct IsodiametricReport {
  int Q = 0;
  double unit_ball_volume = 0;
  std::vector<IsodiametricCandidate> candidates;
  std::size_t best = 0;  // index of the best certified candidate
};

/// Ratios S^Q(A)/(diam A)^Q over a fixed family on a Carnot group given by
/// homogeneous fields in graded coordinates: the unit ball (ratio 1 by
/// normalization), the ball with its horizontal radial hull filled in
/// ("ball+caps") and coordinate boxes.
IsodiametricReport isodiametric_search(const std::vector<VectorField>& fields, const Weights& weights,
                                       const IsodiametricOptions& opts = {});
IsodiametricReport isodiametric_search(const NilpotentApprox& approx, const IsodiametricOptions& opts = {});

struct FedererPoint {
  double eps = 0;
  double ball = 0;   // ratio of the ball of diameter eps
  double caps = 0;   // ratio of the filled ball
  double best = 0;
  double best_certified = 0;
};

struct FedererCurve {
  std::vector<FedererPoint> points;
  double nilpotent_best = 0;  // certified ratio from isodiametric_search at p
};

/// Lower-bound curve eps -> I(p, eps) from candidates of diameter eps
/// containing p, evaluated through the blow-up at scale eps.
FedererCurve federer_ratio_probe(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p,
                                 const std::vector<double>& eps, const IsodiametricOptions& opts = {});

/// |omega(Y_1..Y_n)| at x for the frame words chosen at p; carries the x
/// dependence of the spherical density near a regular point.
class FrameDensity {
 public:
  FrameDensity(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p);
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  const SRStructure& s_;
  std::vector<VectorField> frame_;
};

}  // namespace srm

#endif  // SRM_MEASURES_HPP
