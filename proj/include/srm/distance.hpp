#ifndef SRM_DISTANCE_HPP
#define SRM_DISTANCE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "srm/control.hpp"
#include "srm/geodesic.hpp"
#include "srm/structure.hpp"

namespace srm {

struct DistanceEstimate {
  double value = std::numeric_limits<double>::infinity();
  double lower = 0;  // Riemannian-extension bound
  double upper = std::numeric_limits<double>::infinity();
  double error = 0;
  std::string method = "none";

  bool found() const { return value < std::numeric_limits<double>::infinity(); }
};

/// Budget levels 1 (fast) .. 4 (thorough) select library sizes, multi-start
/// counts and integration tolerances.
struct OracleOptions {
  int geodesics = 1200;
  int times = 24;
  int starts = 3;
  double overshoot = 1.25;
  double vertical_range = 3 * M_PI;  // cut-time scale of the vertical covector, per weight
  double rel_error = 1e-4;  // budget-indexed relative error bar
  bool control_fallback = false;
  /// Accept the first shot that agrees with its library entry. Off for
  /// two-point queries, where every start is shot and the shortest kept.
  bool early_accept = true;
  ShootOptions shoot;
  ControlOptions control;
  std::uint64_t seed = 1;

  static OracleOptions from_budget(int level, std::uint64_t seed = 1);
};

/// Distances from a fixed base point p out to a radius, backed by a library
/// of normal extremals from p that provides warm starts for shooting.
class DistanceOracle {
 public:
  struct Entry {
    Eigen::VectorXd point;
    Eigen::VectorXd covector;  // unit-time initial covector
    double length;
    int geodesic;  // index of the library extremal
  };

  DistanceOracle(const std::vector<VectorField>& fields, const Eigen::Ref<const Eigen::VectorXd>& p, double radius,
                 const OracleOptions& opts = {});

  const Eigen::VectorXd& base() const { return p_; }
  double radius() const { return radius_; }
  const std::vector<Entry>& library() const { return entries_; }
  /// Bounding box of library endpoints with length <= radius.
  const Eigen::VectorXd& extent_lo() const { return lo_; }
  const Eigen::VectorXd& extent_hi() const { return hi_; }
  /// Upper bound for |X(q)| (operator norm) over the library region.
  double field_bound() const { return lip_; }
  const HamiltonianSystem& system() const { return sys_; }

  /// Distance estimate; stops early once an extremal shorter than
  /// stop_below is found (useful for membership queries).
  DistanceEstimate distance_to(const Eigen::Ref<const Eigen::VectorXd>& q,
                               double stop_below = -std::numeric_limits<double>::infinity()) const;

  enum class Membership { In, Out, Band };
  /// Three-way ball test with band width equal to the distance error bar.
  Membership ball(const Eigen::Ref<const Eigen::VectorXd>& q, double eps) const;
  /// Point-estimate membership d(p, q) < eps used by Monte Carlo volumes.
  bool inside(const Eigen::Ref<const Eigen::VectorXd>& q, double eps) const;

  /// Count of queries for which no extremal could be found.
  std::size_t failures() const { return failures_; }

 private:
  std::vector<VectorField> fields_;
  HamiltonianSystem sys_;
  Eigen::VectorXd p_;
  double radius_;
  OracleOptions opts_;
  std::vector<Entry> entries_;
  Eigen::VectorXd lo_, hi_, scale_;
  double lip_ = 1;
  mutable std::size_t failures_ = 0;
};

/// Symmetric two-point estimate: best of library shooting from either end
/// and the direct piecewise-constant-control method.
DistanceEstimate distance(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p,
                          const Eigen::Ref<const Eigen::VectorXd>& q, int budget = 2, std::uint64_t seed = 1);
DistanceEstimate distance(const std::vector<VectorField>& fields, const Eigen::Ref<const Eigen::VectorXd>& p,
                          const Eigen::Ref<const Eigen::VectorXd>& q, int budget = 2, std::uint64_t seed = 1);

std::string to_string(DistanceOracle::Membership m);

}  // namespace srm

#endif  // SRM_DISTANCE_HPP
