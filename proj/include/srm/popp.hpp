#ifndef SRM_POPP_HPP
#define SRM_POPP_HPP

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "srm/flag.hpp"
#include "srm/frames.hpp"
#include "srm/linalg.hpp"
#include "srm/structure.hpp"

namespace srm {

/// Inner products on the quotients D^i_p / D^{i-1}_p induced by the
/// generating family. Level 1 is the image of R^m under e_i -> X_i(p); level
/// i >= 2 is the image of R^{m^{i-2}} (x) Lambda^2 R^m under
/// (a_1..a_{i-2}, b^c) -> [X_{a_1},[...,[X_b,X_c]]](p). Both are taken modulo
/// D^{i-1}_p and carry the minimal-norm quotient product.
struct GradedInnerProduct {
  std::vector<int> dims;              // n_i - n_{i-1}
  std::vector<RatMat> P;              // level-i map in the frame's level-i coordinates
  std::vector<RatMat> B;              // P_i P_i^T
  std::vector<Eigen::MatrixXd> gram;  // B_i^{-1}: Gram matrix in the frame basis
  std::vector<Eigen::MatrixXd> basis; // lifted quotient basis (frame vectors of level i), n x dims[i]

  /// Gram matrix of level i in the basis given by the columns of vectors
  /// (which must lie in D^i and be independent modulo D^{i-1}).
  Eigen::MatrixXd gram_in(int level, const Eigen::MatrixXd& vectors) const;
  RatMat frame_inverse;  // A^{-1}
  std::vector<int> level_rows_begin;
};

GradedInnerProduct graded_ip(const SRStructure& s, std::span<const Rational> p, const AdaptedFrame& frame);

struct PoppDensity {
  Eigen::VectorXd point;
  double value = 0;         // dP / d mu
  std::vector<double> det_B;
  double omega_frame = 0;   // |omega(Y_1, ..., Y_n)|
  std::string frame;
  bool experimental = false;  // evaluated at a point that is not regular
};

/// dP/dmu(p) = 1 / (|omega(Y)| sqrt(prod_j det B_j)), exact up to the final
/// square root. Throws SingularQuotient if some B_j is singular.
PoppDensity popp_density(const SRStructure& s, std::span<const Rational> p, const AdaptedFrame& frame);
/// Uses the frame of maximal omega-volume at p; p must be exactly
/// representable (doubles always are).
PoppDensity popp_density(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p);
/// Values over every adapted frame at p, for frame-independence audits.
std::vector<PoppDensity> popp_density_all_frames(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p);

struct WeakEquivalentReport {
  double C = 0;              // smallest C with 1/(C nu) <= dP/dmu <= C/nu on the grid
  double min_product = 0;    // min nu * dP/dmu
  double max_product = 0;
  std::size_t points = 0;    // regular grid points used
  std::size_t skipped = 0;   // singular points excluded
};

WeakEquivalentReport weak_equivalent_check(const SRStructure& s, const GridSpec& grid,
                                           const ClassifyOptions& opts = {});

struct EquisingularReport {
  std::string stratum;
  std::vector<int> growth;    // n_i along N
  std::vector<int> growth_N;  // n^N_i = dim(D^i cap TN)
  int Q_N = 0;
  std::size_t samples = 0;
};

/// Verifies constancy of n_i and n^N_i over samples of the stratum.
/// Throws NotEquisingular with the first pair of disagreeing points.
EquisingularReport equisingular_check(const SRStructure& s, const Stratum& N, int samples = 32,
                                      std::uint64_t seed = 1);

struct StratumPopp {
  double value = 0;  // dP^N/ds with respect to Lebesgue measure in the parameters
  std::vector<double> det_G;  // per level of gr^N
  std::vector<int> growth_N;
};

/// Popp density of an equisingular stratum at parameter s (dyadic values
/// are exact). For an open stratum with the identity map this equals
/// popp_density times the density of omega.
StratumPopp popp_on_stratum(const SRStructure& s, const Stratum& N, const Eigen::Ref<const Eigen::VectorXd>& param);

struct StratumIntegral {
  std::string stratum;
  int Q_N = 0;
  bool open = false;
  double value = 0;
  double std_error = 0;
  bool divergent = false;
  std::vector<double> windows;  // estimates over nested windows
};

struct StratifiedMeasures {
  int dim_H = 0;
  double P1 = 0, P1_stderr = 0;
  double P2 = 0, P2_stderr = 0;
  bool P1_divergent = false, P2_divergent = false;
  std::vector<StratumIntegral> strata;
};

struct StratifiedOptions {
  int samples_per_window = 2000;
  int windows = 30;
  int coverage_samples = 2000;
  double divergence_factor = 10.0;
  std::uint64_t seed = 1;
};

/// P_1 and P_2 of a region. Strata must partition the region (checked by
/// Monte Carlo coverage of the open strata); stratum integrals run over
/// nested windows shrinking toward the parameter-box faces, and growth by
/// more than divergence_factor flags +infinity.
StratifiedMeasures stratified_measures(const SRStructure& s, const Box& region, const StratifiedOptions& opts = {});

}  // namespace srm

#endif  // SRM_POPP_HPP
