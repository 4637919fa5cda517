#include "srm/random.hpp"

#include <cmath>
#include <numbers>

namespace srm {

double Rng::normal() {
  // Box-Muller, one value per call keeps the stream stateless
  double u1 = uniform(), u2 = uniform();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::VectorXd Rng::uniform_in_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  Eigen::VectorXd x(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) x[i] = uniform(lo[i], hi[i]);
  return x;
}

Eigen::VectorXd Rng::unit_vector(int dim) {
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = normal();
  } while (v.norm() < 1e-12);
  return v.normalized();
}

Eigen::VectorXd Rng::uniform_in_ball(const Eigen::VectorXd& center, double radius) {
  int n = static_cast<int>(center.size());
  double r = radius * std::pow(uniform(), 1.0 / n);
  return center + r * unit_vector(n);
}

Eigen::VectorXd halton(std::uint64_t i, int dim) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  Eigen::VectorXd x(dim);
  for (int d = 0; d < dim; ++d) {
    int b = primes[d % 12];
    double f = 1, r = 0;
    std::uint64_t k = i + 1;
    while (k > 0) {
      f /= b;
      r += f * static_cast<double>(k % b);
      k /= b;
    }
    x[d] = r;
  }
  return x;
}

}  // namespace srm
