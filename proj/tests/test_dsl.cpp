#include <doctest.h>

#include <random>

#include "srm/errors.hpp"
#include "srm/structure.hpp"
#include "support.hpp"

using namespace srm;

namespace {

// Random sparse field of degree <= 2 in 3 variables, small integer coefficients.
VectorField random_field(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, 2);
  std::vector<Polynomial> comps;
  for (int k = 0; k < 3; ++k) {
    Polynomial p(3);
    for (int t = 0; t < 3; ++t) p.add_term({deg(rng), deg(rng) / 2, deg(rng) / 2}, Rational(coef(rng)));
    comps.push_back(p);
  }
  return VectorField(comps);
}

}  // namespace

TEST_SUITE("vf-dsl") {

TEST_CASE("decimals parse in base ten") {
  CHECK(rational_from_string("0.25") == Rational(1, 4));
  CHECK(rational_from_string("007") == Rational(7));
  CHECK(rational_from_string("-1.5") == Rational(-3, 2));
  CHECK(rational_from_string("3/8") == Rational(3, 8));
}

TEST_CASE("expressions reach canonical form") {
  Expr a = parse_expression("(x1 + x2)^2 - 2*x1*x2", 2);
  Expr b = parse_expression("x2^2 + x1^2", 2);
  CHECK(a == b);
  CHECK(parse_expression("x1/2 - 0.5*x1", 2).is_zero());
  CHECK(parse_expression(a.to_string(), 2) == a);
}

TEST_CASE("heisenberg bracket is the vertical field") {
  const auto& s = testing::heisenberg();
  VectorField z = lie_bracket(s.fields[0], s.fields[1]);
  CHECK(z == VectorField::coordinate(3, 2));
  CHECK(lie_bracket(s.fields[0], z).is_zero());
}

TEST_CASE("structure text round trips") {
  for (const auto* s : {&testing::heisenberg(), &testing::grushin(), &testing::martinet()}) {
    SRStructure t = parse_structure(to_text(*s));
    CHECK(t.dim == s->dim);
    REQUIRE(t.fields.size() == s->fields.size());
    for (std::size_t i = 0; i < t.fields.size(); ++i) CHECK(t.fields[i] == s->fields[i]);
    CHECK(t.volume == s->volume);
    CHECK(t.strata.size() == s->strata.size());
  }
}

TEST_CASE("syntax errors carry a position") {
  const std::string text = "dim = 2\nfield X1 = (1, 0)\nfield X2 = (0, x1 +)\nbox = [-1,1] x [-1,1]\n";
  try {
    parse_structure(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.code() == "vf-dsl.syntax");
  }
}

TEST_CASE("non generating family is rejected") {
  const std::string text = "dim = 3\nfield X1 = (1, 0, 0)\nfield X2 = (0, 1, 0)\nvolume = 1\n"
                           "box = [-1,1] x [-1,1] x [-1,1]\nprobe = (0, 0, 0)\n";
  CHECK_THROWS_AS(parse_structure(text), Error);
}

TEST_CASE("bracket algebra holds exactly on random fields") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    VectorField x = random_field(rng), y = random_field(rng), z = random_field(rng);
    Rational a(2, 3), b(-5);
    CHECK(lie_bracket(x, y) == -lie_bracket(y, x));
    CHECK(lie_bracket(a * x + b * y, z) == a * lie_bracket(x, z) + b * lie_bracket(y, z));
    VectorField jacobi = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) +
                         lie_bracket(z, lie_bracket(x, y));
    CHECK(jacobi.is_zero());
  }
}

TEST_CASE("symbolic derivatives agree with finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  Expr f = parse_expression("x1^3*x2 - 2*x2^2*x3 + x1*x3/3 + 5", 3);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(3);
    for (int i = 0; i < 3; ++i) x[i] = u(rng);
    for (int k = 0; k < 3; ++k) {
      const double h = 1e-5;
      Eigen::VectorXd xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double fd = (f.eval(xp) - f.eval(xm)) / (2 * h);
      CHECK(std::abs(fd - f.diff(k).eval(x)) < 1e-6);
    }
  }
}

TEST_CASE("weighted scaling") {
  Expr f = parse_expression("x1^2 + x2", 2);
  Weights w{1, 2};
  CHECK(f.weighted_order(w) == 2);
  CHECK(f.weighted_scale(w, Rational(3), 0) == parse_expression("9*x1^2 + 9*x2", 2));
}

}
