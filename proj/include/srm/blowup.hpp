#ifndef SRM_BLOWUP_HPP
#define SRM_BLOWUP_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "srm/measures.hpp"
#include "srm/nilpotent.hpp"
#include "srm/structure.hpp"

namespace srm {

/// Distortion sup |d(x,x')/eps - hat d(delta_{1/eps} x, delta_{1/eps} x')|
/// over anchors (the base point and a few cloud points) against a cloud
/// drawn in B(p, R eps), all in privileged coordinates.
struct Distortion {
  double value = 0;
  double error = 0;  // sum of the distance error bars at the maximizing pair
  std::size_t pairs = 0;
  std::size_t skipped = 0;  // pairs where either distance was not resolved
};

struct DistortionOptions {
  int cloud = 0;    // 0 selects 12, 24, 40, 60 by budget
  int anchors = 3;  // including the base point
  MeasureOptions measure;
};

Distortion gh_distortion(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, double R, double eps,
                         const DistortionOptions& opts = {});

/// Weak-convergence surrogate: a fixed dictionary of bounded continuous
/// functions of u = delta_{1/R} z, evaluated on [-2,2]^n.
struct TestFunction {
  std::string name;
  std::function<double(const Eigen::VectorXd& u, double hat_d)> h;  // hat_d = hat d(0, z) / R
};

std::vector<TestFunction> test_dictionary(const Weights& w);

enum class BlowupMeasure { Smooth, Spherical };

struct Discrepancy {
  double value = 0;      // max_h |int h dmu_eps - int h dhat mu| / hat mu(hat B(0,R))
  double std_error = 0;  // of the maximizing function, with common random numbers
  std::string argmax;
  double outside_fraction = 0;  // samples of the blown ball with hat d > 1.2 R
  bool formal = false;          // spherical density requested at a singular point
};

Discrepancy measure_discrepancy(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, double R,
                                double eps, BlowupMeasure kind, const MeasureOptions& opts = {});

struct BlowupRow {
  double eps = 0;
  Distortion distortion;
  Discrepancy discrepancy;
};

struct BlowupExperiment {
  Eigen::VectorXd point;
  double R = 1;
  BlowupMeasure kind = BlowupMeasure::Smooth;
  int Q = 0;
  std::vector<BlowupRow> rows;
};

/// Distortion and discrepancy along an eps schedule, sharing the nilpotent
/// oracle and the sample stream across scales.
BlowupExperiment blowup_experiment(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, double R,
                                   const std::vector<double>& eps, BlowupMeasure kind,
                                   const DistortionOptions& opts = {});

/// Non-increasing up to k standard errors.
bool decreasing_within_noise(const std::vector<double>& values, const std::vector<double>& errors, double k = 3.0);

/// Largest relative deviation of the spherical density over probes at the
/// given radius around p.
double spherical_density_variation(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, double radius,
                                   const MeasureOptions& opts = {});

std::string to_string(BlowupMeasure m);
BlowupMeasure blowup_measure_from_string(const std::string& name);

}  // namespace srm

#endif  // SRM_BLOWUP_HPP
