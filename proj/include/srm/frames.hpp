#ifndef SRM_FRAMES_HPP
#define SRM_FRAMES_HPP

#include <Eigen/Core>
#include <vector>

#include "srm/flag.hpp"
#include "srm/structure.hpp"

namespace srm {

/// n bracket words whose values at p form a basis adapted to the flag,
/// ordered by level. The total bracket length equals Q(p).
struct AdaptedFrame {
  std::vector<BracketWord> words;
  std::vector<VectorField> fields;  // symbolic values of the words
  std::vector<int> levels;          // bracket length of each word
  Eigen::MatrixXd vectors;          // column j = Y_j(p)

  int total_length() const;
  std::string to_string(const std::vector<std::string>& names = {}) const;
};

struct FrameOptions {
  double tol = 1e-9;
  std::size_t max_frames = 4096;
};

/// All adapted frames at p, one per choice of unordered word sets per level.
std::vector<AdaptedFrame> adapted_frames(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p,
                                         const FlagData& flag, const FrameOptions& opts = {});
std::vector<AdaptedFrame> adapted_frames(BracketTable& table, const Eigen::Ref<const Eigen::VectorXd>& p,
                                         const FlagData& flag, const FrameOptions& opts = {});

/// |omega_p(Y_1(p),...,Y_n(p))| for one frame, evaluated exactly at the
/// dyadic point p.
double frame_volume(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, const AdaptedFrame& frame);

/// nu(p): maximal omega-volume over the given adapted frames (both
/// orientations are admissible, so the absolute value is taken).
double nu(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p, const std::vector<AdaptedFrame>& frames);
double nu(const SRStructure& s, const Eigen::Ref<const Eigen::VectorXd>& p);

}  // namespace srm

#endif  // SRM_FRAMES_HPP
