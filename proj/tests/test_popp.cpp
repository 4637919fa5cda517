#include <doctest.h>

#include <cmath>

#include "srm/frames.hpp"
#include "srm/nilpotent.hpp"
#include "srm/popp.hpp"
#include "support.hpp"

using namespace srm;
using testing::vec;

TEST_SUITE("popp") {

TEST_CASE("heisenberg popp measure is lebesgue") {
  for (auto p : {vec({0, 0, 0}), vec({0.5, -0.25, 0.75})}) {
    auto d = popp_density(testing::heisenberg(), p);
    CHECK(std::abs(d.value - 1.0) < 1e-9);
    CHECK(!d.experimental);
  }
}

TEST_CASE("grushin popp density is 1/|x1|") {
  for (double t : {1.0, -1.0, 0.5, -0.5, 0.25, -0.25}) {
    auto d = popp_density(testing::grushin(), vec({t, 0.5}));
    CHECK(std::abs(d.value * std::abs(t) - 1.0) < 1e-9);
  }
}

TEST_CASE("popp density does not depend on the frame") {
  for (const auto* s : {&testing::heisenberg(), &testing::grushin(), &testing::martinet()}) {
    Eigen::VectorXd p = Eigen::VectorXd::Constant(s->dim, 0.5);
    auto all = popp_density_all_frames(*s, p);
    REQUIRE(!all.empty());
    for (const auto& d : all) CHECK(std::abs(d.value - all.front().value) < 1e-9 * all.front().value);
  }
}

TEST_CASE("martinet density scales like c/x1") {
  const auto& m = testing::martinet();
  const double c = popp_density(m, vec({1, 0, 0})).value;
  CHECK(c > 0);
  for (double t : {0.5, 0.25, 0.125}) CHECK(popp_density(m, vec({t, 0.25, -0.5})).value * t == doctest::Approx(c));
}

TEST_CASE("grushin level-2 gram") {
  auto fr = max_volume_frame(testing::grushin(), vec({0, 0}));
  std::vector<Rational> p{0, 0};
  auto g = graded_ip(testing::grushin(), p, fr);
  REQUIRE(g.gram.size() == 2);
  CHECK(g.gram[0](0, 0) == doctest::Approx(1.0));
  CHECK(g.gram[1](0, 0) == doctest::Approx(1.0));
}

TEST_CASE("weak equivalence constants") {
  auto g = weak_equivalent_check(testing::grushin(), GridSpec{{9, 9}, {}});
  CHECK(g.C == doctest::Approx(1.0));
  CHECK(g.skipped == 9);
  auto h = weak_equivalent_check(testing::heisenberg(), GridSpec{{5, 5, 5}, {}});
  CHECK(h.C == doctest::Approx(1.0));
}

TEST_CASE("popp density blows up toward the singular axis") {
  double prev = 0;
  for (int k = 2; k <= 64; ++k) {
    double v = popp_density(testing::grushin(), vec({1.0 / k, 0})).value;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("stratum densities") {
  const auto& m = testing::martinet();
  auto a = popp_on_stratum(m, m.stratum("plane"), vec({0.25, 0.5}));
  auto b = popp_on_stratum(m, m.stratum("plane"), vec({-0.5, 0.75}));
  CHECK(a.value > 0);
  CHECK(a.value == doctest::Approx(b.value));
  // an open stratum with the identity map reproduces popp_density * density
  const auto& g = testing::grushin();
  auto r = popp_on_stratum(g, g.stratum("right"), vec({0.5, 0.25}));
  CHECK(r.value == doctest::Approx(popp_density(g, vec({0.5, 0.25})).value));
}

TEST_CASE("stratified measures of a regular region agree") {
  Box region{{Rational(1, 4), Rational(-1)}, {Rational(1), Rational(1)}};
  auto r = stratified_measures(testing::grushin(), region);
  CHECK(!r.P1_divergent);
  CHECK(std::abs(r.P1 - r.P2) <= r.P1_stderr + 1e-12);
  CHECK(std::abs(r.P2 - 2 * std::log(4.0)) < 3 * r.P2_stderr + 1e-3);
}

}
