#include <doctest.h>

#include <cmath>

#include "srm/measures.hpp"
#include "support.hpp"

using namespace srm;
using testing::vec;

namespace {
MeasureOptions fast(int samples = 1500) {
  MeasureOptions o;
  o.budget = 1;
  o.samples = samples;
  return o;
}
const SRStructure& plane() {
  static const SRStructure s = parse_structure(
      "dim = 2\nfield X1 = (1, 0)\nfield X2 = (0, 1)\nvolume = 1\nbox = [0,1] x [0,1]\nprobe = (0, 0)\n");
  return s;
}
}  // namespace

TEST_SUITE("measures") {

TEST_CASE("grushin tangent ball is a euclidean disk") {
  for (double t : {1.0, 0.5}) {
    auto m = mu_hat_ball(testing::grushin(), vec({t, 0}), fast());
    CHECK(std::abs(m.mean - M_PI * t) < 3 * m.std_error + 1e-9);
  }
}

TEST_CASE("heisenberg tangent ball volume is left invariant") {
  auto a = mu_hat_ball(testing::heisenberg(), vec({0, 0, 0}), fast());
  auto b = mu_hat_ball(testing::heisenberg(), vec({0.5, -0.5, 0.25}), fast());
  CHECK(a.mean > 0);
  CHECK(std::abs(a.mean - b.mean) < 3 * std::hypot(a.std_error, b.std_error));
  auto sd = spherical_density(testing::heisenberg(), vec({0, 0, 0}), fast());
  CHECK(sd.Q == 4);
  CHECK(sd.value == doctest::Approx(16.0 / a.mean));
}

TEST_CASE("spherical density at a grushin regular point") {
  auto sd = spherical_density(testing::grushin(), vec({1, 0}), fast(4000));
  CHECK(std::abs(sd.value - 4 / M_PI) < 3 * sd.std_error);
  CHECK(spherical_density(testing::grushin(), vec({0, 0}), fast(200)).formal);
}

TEST_CASE("ball volume scaling on the heisenberg group is exact") {
  auto rows = density_consistency(testing::heisenberg(), vec({0, 0, 0}), {0.4, 0.1}, fast(600));
  for (const auto& r : rows) CHECK(r.gap < 1e-9);
}

TEST_CASE("euclidean square sandwich") {
  Box unit{{Rational(0), Rational(0)}, {Rational(1), Rational(1)}};
  auto rep = sandwich_check(plane(), box_sampler(plane(), unit), 2.0, {0.2, 0.1, 0.05});
  CHECK(rep.holds);
  auto dim = covering_dimension(plane(), box_sampler(plane(), unit), {0.2, 0.1, 0.05});
  CHECK(std::abs(dim.dimension - 2.0) < 0.2);
}

TEST_CASE("pre-measures above the dimension vanish") {
  Box unit{{Rational(0), Rational(0)}, {Rational(1), Rational(1)}};
  auto rep = sandwich_check(plane(), box_sampler(plane(), unit), 3.0, {0.2, 0.1, 0.05});
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].spherical < rep.rows[i - 1].spherical);
    CHECK(rep.rows[i].arbitrary < rep.rows[i - 1].arbitrary);
  }
}

TEST_CASE("gauge is comparable to the distance") {
  BallBoxGauge g(testing::heisenberg(), vec({0, 0, 0}));
  CHECK(g(vec({0.25, 0, 0})) == doctest::Approx(0.25));
  CHECK(g(vec({0, 0, 0.25})) == doctest::Approx(0.5));
}

TEST_CASE("euclidean plane isodiametric ratios") {
  IsodiametricOptions o;
  o.measure = fast(3000);
  auto rep = isodiametric_search(plane().fields, Weights{1, 1}, o);
  REQUIRE(!rep.candidates.empty());
  CHECK(rep.candidates.front().name == "ball");
  CHECK(rep.candidates.front().ratio == 1.0);
  for (const auto& c : rep.candidates) CHECK(c.certified <= 1.005);
}

}
