#include <doctest.h>

#include "srm/blowup.hpp"
#include "support.hpp"

using namespace srm;
using testing::vec;

TEST_SUITE("blowup-mgh") {

TEST_CASE("noise-aware monotonicity") {
  CHECK(decreasing_within_noise({0.3, 0.2, 0.1}, {0, 0, 0}));
  CHECK(decreasing_within_noise({0.3, 0.31, 0.1}, {0.01, 0.01, 0.01}));
  CHECK(!decreasing_within_noise({0.1, 0.3}, {0.01, 0.01}));
  CHECK(decreasing_within_noise({0, 0, 0}, {0, 0, 0}));
}

TEST_CASE("measure names") {
  CHECK(to_string(BlowupMeasure::Spherical) == "spherical");
  CHECK(blowup_measure_from_string("smooth") == BlowupMeasure::Smooth);
  CHECK_THROWS(blowup_measure_from_string("nope"));
}

TEST_CASE("test dictionary") {
  auto d = test_dictionary(Weights{1, 1, 2});
  CHECK(d.size() <= 20);
  CHECK(d.front().h(Eigen::VectorXd::Zero(3), 0.0) == 1.0);
  for (const auto& f : d) {
    Eigen::VectorXd u = Eigen::VectorXd::Constant(3, 2.0);
    CHECK(std::abs(f.h(u, 1.0)) <= 4.0);
  }
}

TEST_CASE("heisenberg is its own tangent cone") {
  MeasureOptions m;
  m.budget = 1;
  m.samples = 400;
  DistortionOptions o;
  o.cloud = 8;
  o.anchors = 2;
  o.measure = m;
  auto e = blowup_experiment(testing::heisenberg(), vec({0, 0, 0}), 1.0, {0.4, 0.2}, BlowupMeasure::Smooth, o);
  REQUIRE(e.rows.size() == 2);
  for (const auto& r : e.rows) {
    CHECK(r.distortion.value <= r.distortion.error + 1e-9);
    CHECK(r.discrepancy.value <= 3 * r.discrepancy.std_error + 1e-9);
  }
}

TEST_CASE("grushin regular blow-up converges") {
  MeasureOptions m;
  m.budget = 1;
  m.samples = 400;
  DistortionOptions o;
  o.cloud = 8;
  o.measure = m;
  auto e = blowup_experiment(testing::grushin(), vec({1, 0}), 1.0, {0.4, 0.1}, BlowupMeasure::Smooth, o);
  CHECK(e.Q == 2);
  CHECK(e.rows[1].distortion.value < e.rows[0].distortion.value);
  CHECK(e.rows[1].distortion.value < 0.05);
}

}
