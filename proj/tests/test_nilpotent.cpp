#include <doctest.h>

#include <random>

#include "srm/frames.hpp"
#include "srm/nilpotent.hpp"
#include "support.hpp"

using namespace srm;
using testing::vec;

namespace {
std::vector<Rational> q(std::initializer_list<int> v) {
  std::vector<Rational> out;
  for (int c : v) out.emplace_back(c);
  return out;
}
}  // namespace

TEST_SUITE("frames-nilpotent") {

TEST_CASE("adapted frames") {
  const auto& g = testing::grushin();
  auto fr = adapted_frames(g, vec({1, 0}), flag_at(g, vec({1, 0})));
  REQUIRE(fr.size() == 1);
  CHECK(fr[0].total_length() == 2);
  auto fs = adapted_frames(g, vec({0, 0}), flag_at(g, vec({0, 0})));
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].total_length() == 3);
  const auto& h = testing::heisenberg();
  auto fh = adapted_frames(h, vec({0, 0, 0}), flag_at(h, vec({0, 0, 0})));
  REQUIRE(fh.size() == 1);
  CHECK(fh[0].total_length() == 4);
}

TEST_CASE("nu") {
  const auto& g = testing::grushin();
  CHECK(nu(g, vec({0.5, 0})) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(nu(g, vec({-0.25, 0.5})) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(nu(g, vec({0, 0})) == doctest::Approx(1.0));
  CHECK(nu(testing::heisenberg(), vec({0.3, -0.7, 0.1})) == doctest::Approx(1.0));
  double prev = 1e9;
  for (int k = 2; k <= 64; k *= 2) {
    double v = nu(g, vec({1.0 / k, 0}));
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("privileged charts") {
  auto h = nilpotent_approximation(testing::heisenberg(), q({0, 0, 0}));
  CHECK(h.chart.affine);
  for (int i = 0; i < 2; ++i) CHECK(h.fields[i] == testing::heisenberg().fields[i]);
  CHECK(h.Q == 4);

  auto g0 = nilpotent_approximation(testing::grushin(), q({0, 0}));
  CHECK(g0.weights() == Weights{1, 2});
  CHECK(g0.fields[1] == testing::grushin().fields[1]);

  auto g1 = nilpotent_approximation(testing::grushin(), q({1, 0}));
  CHECK(g1.weights() == Weights{1, 1});
  CHECK(g1.fields[0] == VectorField::coordinate(2, 0));
  CHECK(g1.fields[1] == VectorField::coordinate(2, 1));
  CHECK(g1.chart.to_z(vec({1.5, 0.25})).isApprox(vec({0.5, 0.25})));

  auto m0 = nilpotent_approximation(testing::martinet(), q({0, 0, 0}));
  CHECK(m0.weights() == Weights{1, 1, 3});
  CHECK(m0.fields[1] == testing::martinet().fields[1]);
}

TEST_CASE("a twisted chart needs a polynomial correction") {
  SRStructure s = parse_structure(
      "dim = 3\nfield X1 = (1, 0, x2)\nfield X2 = (0, 1, x1^2/2 + x1)\nvolume = 1\n"
      "box = [-1,1] x [-1,1] x [-1,1]\nprobe = (0, 0, 0)\n");
  auto a = nilpotent_approximation(s, q({0, 0, 0}));
  CHECK(a.weights() == Weights{1, 1, 3});
  CHECK(!a.chart.affine);
  CHECK(a.chart.to_privileged[2] == parse_expression("x3 - x1*x2", 3));
  CHECK(is_dilation_homogeneous(a.fields, a.weights()));
  Eigen::VectorXd x = vec({0.2, -0.3, 0.4});
  CHECK(a.chart.to_x(a.chart.to_z(x)).isApprox(x, 1e-12));
}

TEST_CASE("nilpotentized fields are dilation homogeneous") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-4, 4);
  const std::vector<const SRStructure*> all{&testing::heisenberg(), &testing::grushin(), &testing::martinet()};
  for (const auto* s : all) {
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<Rational> p;
      for (int i = 0; i < s->dim; ++i) p.emplace_back(c(rng), 4);
      auto a = nilpotent_approximation(*s, p);
      CHECK(is_dilation_homogeneous(a.fields, a.weights()));
    }
  }
}

TEST_CASE("dilations") {
  Weights w{1, 1, 2};
  CHECK(dilate(vec({1, 1, 1}), 2.0, w).isApprox(vec({2, 2, 4})));
  CHECK(dilate(vec({0.3, -1, 7}), 1.0, w).isApprox(vec({0.3, -1, 7})));
}

TEST_CASE("blow-up at a homogeneous point is the tangent structure") {
  auto a = nilpotent_approximation(testing::heisenberg(), q({0, 0, 0}));
  SRStructure b = blowup_structure(a, Rational(1, 8));
  for (int i = 0; i < 2; ++i) CHECK(b.fields[i] == a.fields[i]);
  auto g = nilpotent_approximation(testing::grushin(), q({1, 0}));
  SRStructure bg = blowup_structure(g, Rational(1, 4));
  // eps (delta_{1/eps})_* X2 = (0, 1 + z1/4)
  CHECK(bg.fields[1][1] == parse_expression("1 + x1/4", 2));
}

}
