#include <doctest.h>

#include "srm/errors.hpp"
#include "srm/flag.hpp"
#include "srm/popp.hpp"
#include "support.hpp"

using namespace srm;
using testing::vec;

TEST_SUITE("flag-analysis") {

TEST_CASE("bracket enumeration drops zero and repeated words") {
  const auto& g = testing::grushin();
  CHECK(enumerate_brackets(g.fields, 1).size() == 2);
  auto words = enumerate_brackets(g.fields, 2);
  CHECK(words.size() == 3);
  BracketTable mt(testing::martinet().fields);
  bool found = false;
  for (const auto* e : mt.of_length(3)) {
    CHECK(!e->value.is_zero());
    if (e->value == VectorField::coordinate(3, 2)) found = true;
  }
  CHECK(found);
}

TEST_CASE("grushin flags") {
  const auto& g = testing::grushin();
  FlagData r = flag_at(g, vec({1, 0}));
  CHECK(r.growth == std::vector<int>{2});
  CHECK(r.Q == 2);
  CHECK(r.weights == std::vector<int>{1, 1});
  FlagData s = flag_at(g, vec({0, 5}));
  CHECK(s.growth == std::vector<int>{1, 2});
  CHECK(s.step == 2);
  CHECK(s.Q == 3);
  CHECK(s.weights == std::vector<int>{1, 2});
  CHECK(s.Q_from_weights() == s.Q);
}

TEST_CASE("martinet flags") {
  const auto& m = testing::martinet();
  FlagData s = flag_at(m, vec({0, 1, 1}));
  CHECK(s.growth == std::vector<int>{2, 2, 3});
  CHECK(s.Q == 5);
  CHECK(s.weights == std::vector<int>{1, 1, 3});
  FlagData r = flag_at(m, vec({0.5, 0, 0}));
  CHECK(r.growth == std::vector<int>{2, 3});
  CHECK(r.Q == 4);
}

TEST_CASE("grid classification finds the singular sets") {
  auto g = classify_grid(testing::grushin(), GridSpec{{21, 21}, {}});
  CHECK(g.size() == 441);
  for (const auto& gp : g) CHECK((gp.cls == PointClass::Singular) == (std::abs(gp.point[0]) < 1e-12));
  auto m = classify_grid(testing::martinet(), GridSpec{{5, 5, 5}, {}});
  for (const auto& gp : m) CHECK((gp.cls == PointClass::Singular) == (std::abs(gp.point[0]) < 1e-12));
  auto h = classify_grid(testing::heisenberg(), GridSpec{{5, 5, 5}, {}});
  for (const auto& gp : h) {
    CHECK(gp.cls == PointClass::Regular);
    CHECK(gp.flag.Q == 4);
  }
}

TEST_CASE("equisingular strata") {
  auto axis = equisingular_check(testing::grushin(), testing::grushin().stratum("axis"));
  CHECK(axis.Q_N == 2);
  CHECK(axis.growth_N == std::vector<int>{0, 1});
  auto plane = equisingular_check(testing::martinet(), testing::martinet().stratum("plane"));
  CHECK(plane.Q_N == 4);
  CHECK(plane.growth_N == std::vector<int>{1, 1, 2});
}

TEST_CASE("a line through the regular region has Q_N = 1") {
  SRStructure g = parse_structure(to_text(testing::grushin()) +
                                  "stratum line : k = 1; map = (1/2, t1); parambox = [-1,1]\n");
  CHECK(equisingular_check(g, g.stratum("line")).Q_N == 1);
}

TEST_CASE("a stratum crossing the singular set is rejected") {
  SRStructure g = parse_structure(to_text(testing::grushin()) +
                                  "stratum cross : k = 1; map = (t1, 0); parambox = [-1,1]\n");
  CHECK_THROWS_AS(equisingular_check(g, g.stratum("cross")), NotEquisingular);
}

}
