#ifndef SRM_RANDOM_HPP
#define SRM_RANDOM_HPP

#include <Eigen/Core>
#include <cstdint>

namespace srm {

/// Counter-based generator: the k-th draw of stream s under seed is a pure
/// function of (seed, s, k), so results never depend on evaluation order.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  /// Independent child stream.
  Rng split(std::uint64_t stream) const { return Rng(key_, stream + 1); }

  std::uint64_t next() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }
  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Eigen::VectorXd uniform_in_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
  /// Uniform point in the Euclidean ball of given radius.
  Eigen::VectorXd uniform_in_ball(const Eigen::VectorXd& center, double radius);
  Eigen::VectorXd unit_vector(int dim);

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// i-th point of the Halton sequence in [0,1)^dim.
Eigen::VectorXd halton(std::uint64_t i, int dim);

}  // namespace srm

#endif  // SRM_RANDOM_HPP
