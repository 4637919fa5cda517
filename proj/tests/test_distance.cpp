#include <doctest.h>

#include <cmath>

#include "srm/distance.hpp"
#include "srm/geodesic.hpp"
#include "support.hpp"

using namespace srm;
using testing::vec;

TEST_SUITE("sr-distance") {

TEST_CASE("horizontal extremal is a segment") {
  HamiltonianSystem h(testing::heisenberg());
  auto path = geodesic_shoot(h, vec({0, 0, 0}), vec({1, 0, 0}), 1.0, 200);
  CHECK(path.q.back().isApprox(vec({1, 0, 0}), 1e-9));
  CHECK(path.length == doctest::Approx(1.0).epsilon(1e-9));
  auto still = geodesic_shoot(h, vec({0.1, 0.2, 0.3}), vec({0, 0, 0}), 1.0, 50);
  CHECK(still.q.back().isApprox(vec({0.1, 0.2, 0.3})));
}

TEST_CASE("energy is conserved along a grushin extremal") {
  HamiltonianSystem h(testing::grushin());
  auto path = geodesic_shoot(h, vec({1, 0}), vec({0.6, -0.8}), 1.0, 400);
  CHECK(path.energy_drift(h) < 1e-6);
}

TEST_CASE("closed-form heisenberg distances") {
  const auto& s = testing::heisenberg();
  auto d1 = distance(s, vec({0, 0, 0}), vec({1, 0, 0}), 1);
  CHECK(std::abs(d1.value - 1.0) < 1e-3);
  for (double z : {0.05, 0.2}) {
    auto dv = distance(s, vec({0, 0, 0}), vec({0, 0, z}), 1);
    CHECK(std::abs(dv.value - std::sqrt(4 * M_PI * z)) < 1e-3 + dv.error);
  }
  CHECK(distance(s, vec({0.2, 0.1, 0}), vec({0.2, 0.1, 0}), 1).value < 1e-9);
}

TEST_CASE("left translation leaves heisenberg distances unchanged") {
  const auto& s = testing::heisenberg();
  // (a,b,c).(x,y,z) = (a+x, b+y, c+z+(ay-bx)/2)
  Eigen::VectorXd p = vec({0, 0, 0}), q = vec({0.3, -0.1, 0.05});
  Eigen::VectorXd g = vec({0.4, 0.2, -0.1});
  auto tr = [&](const Eigen::VectorXd& x) {
    return vec({g[0] + x[0], g[1] + x[1], g[2] + x[2] + (g[0] * x[1] - g[1] * x[0]) / 2});
  };
  auto a = distance(s, p, q, 1), b = distance(s, tr(p), tr(q), 1);
  CHECK(std::abs(a.value - b.value) < a.error + b.error + 1e-6);
}

TEST_CASE("grushin distance to the axis scales like a square root") {
  const auto& s = testing::grushin();
  std::vector<double> ys{1e-3, 1e-2, 1e-1}, logd, logy;
  for (double y : ys) {
    logy.push_back(std::log(y));
    logd.push_back(std::log(distance(s, vec({0, 0}), vec({0, y}), 2).value));
  }
  const double slope = (logd.back() - logd.front()) / (logy.back() - logy.front());
  CHECK(std::abs(slope - 0.5) < 0.05);
}

TEST_CASE("ball membership") {
  DistanceOracle o(testing::heisenberg().fields, vec({0, 0, 0}), 1.5, OracleOptions::from_budget(1));
  CHECK(o.ball(vec({0.5, 0, 0}), 1.0) == DistanceOracle::Membership::In);
  CHECK(o.ball(vec({0, 0, 0}), 1.0) == DistanceOracle::Membership::In);
  CHECK(o.ball(vec({0, 0, 0.5}), 1.0) == DistanceOracle::Membership::Out);  // d = sqrt(2 pi)
  CHECK(o.ball(vec({3, 0, 0}), 1.0) == DistanceOracle::Membership::Out);
}

}
