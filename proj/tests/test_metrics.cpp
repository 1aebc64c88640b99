#include <doctest.h>

#include "flare/error.hpp"
#include "flare/metrics.hpp"
#include "support.hpp"

using namespace flare;
using flare::test::exact_distance;
using flare::test::Q;
using flare::test::vec;

TEST_CASE("attribute distance case table") {
  const auto nom = AttributeDef::nominal("a", {"x", "y", "z"});
  const auto x = Cell::nominal(0), y = Cell::nominal(2);
  const auto star = Cell::dont_care(), unk = Cell::dont_know();
  CHECK(attr_distance(x, x, nom) == 0.0);
  CHECK(attr_distance(x, y, nom) == 1.0);
  CHECK(attr_distance(star, x, nom) == 0.0);
  CHECK(attr_distance(star, unk, nom) == 0.0);
  CHECK(attr_distance(star, star, nom) == 0.0);
  CHECK(attr_distance(unk, x, nom) == 0.5);
  CHECK(attr_distance(unk, unk, nom) == 0.5);
  CHECK(attr_distance(unk, star, nom) == 0.5);
  CHECK(attr_distance(x, unk, nom) == 0.5);
  CHECK(attr_distance(x, star, nom) == 0.5);

  const auto lin = AttributeDef::linear("t", 0.0, 10.0);
  CHECK(attr_distance(Cell::linear(2.0), Cell::linear(4.28), lin) == doctest::Approx(0.228));
  CHECK(attr_distance(Cell::linear(4.28), Cell::linear(2.0), lin) == doctest::Approx(0.228));
  CHECK(attr_distance(Cell::linear(0.0), Cell::linear(10.0), lin) == doctest::Approx(1.0));
  CHECK(attr_distance(Cell::linear(3.0), Cell::dont_know(), lin) == 0.5);
}

TEST_CASE("distance on small hand-worked vectors") {
  const auto s = test::nominal_schema({3, 3, 3, 2});
  CHECK(distance(s, vec(s, "0 ? 1 0_T"), vec(s, "0 1 2 ?_T")) == doctest::Approx(0.5));
  CHECK(distance(s, vec(s, "0 1 * 0_T"), vec(s, "* * 2 ?_T")) == doctest::Approx(0.5));
  CHECK(distance(s, vec(s, "0 1 2 0_T"), vec(s, "0 1 0 ?_T")) == doctest::Approx(1.0 / 3.0));
  CHECK(distance(s, vec(s, "0 1 2 0_T"), vec(s, "1 2 ? ?_T")) == doctest::Approx(2.5 / 3.0));
  CHECK(distance(s, vec(s, "* 1 * 0_T"), vec(s, "2 1 0 1_T")) == 0.0);
  // the target cell never counts, whatever it holds
  CHECK(distance(s, vec(s, "0 1 2 0_T"), vec(s, "0 1 2 1_T")) == 0.0);
}

TEST_CASE("distance is not symmetric") {
  const auto s = test::mediadv_schema();
  const auto v = test::mediadv_vectors();
  // v7 is more general than v8
  CHECK(distance(s, v[6], v[7]) == 0.0);
  CHECK(distance(s, v[7], v[6]) == doctest::Approx(1.0 / 8.0));
  CHECK(distance(s, v[8], v[7]) == doctest::Approx(1.0 / 4.0));
}

TEST_CASE("distance agrees with the exact oracle on every running-example pair") {
  const auto s = test::mediadv_schema();
  const auto v = test::mediadv_vectors();
  int compared = 0;
  for (const auto& x : v)
    for (const auto& y : v) {
      if (x.target != y.target) continue;
      CHECK(distance(s, x, y) == doctest::Approx(test::to_double(exact_distance(x, y))).epsilon(1e-12));
      ++compared;
    }
  CHECK(compared > 100);

  const auto q = vec(s, "1 ? 1 ? 0 0 ?_T");
  CHECK(exact_distance(v[12], q) == Q(1, 2));
  CHECK(distance(s, v[12], q) == doctest::Approx(0.5));
  CHECK(exact_distance(v[6], q) == Q(1, 3));
  CHECK(distance(s, v[6], q) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("distance errors") {
  const auto s = test::nominal_schema({3, 3, 2});
  CHECK_THROWS_AS(distance(s, vec(s, "0 1_T 1"), vec(s, "0 1 ?_T")), MismatchedTarget);
  CHECK_THROWS_AS(distance(s, vec(s, "* * 1_T"), vec(s, "0 1 ?_T")), UndefinedDistance);
}

TEST_CASE("covers uses premise cells only") {
  const auto s = test::nominal_schema({3, 3, 2});
  CHECK(covers(s, vec(s, "0 * 1_T"), vec(s, "0 2 ?_T")));
  CHECK(covers(s, vec(s, "0 * 1_T"), vec(s, "0 * ?_T")));
  CHECK_FALSE(covers(s, vec(s, "0 * 1_T"), vec(s, "1 2 ?_T")));
  CHECK_FALSE(covers(s, vec(s, "0 * 1_T"), vec(s, "* 1 ?_T")));
  CHECK_FALSE(covers(s, vec(s, "0 * 1_T"), vec(s, "? 1 ?_T")));
  CHECK(covers(s, vec(s, "? * 1_T"), vec(s, "? 1 ?_T")));
  CHECK_FALSE(covers(s, vec(s, "? * 1_T"), vec(s, "1 1 ?_T")));
  CHECK_FALSE(covers(s, vec(s, "? * 1_T"), vec(s, "* 1 ?_T")));
  // target cells are ignored
  CHECK(covers(s, vec(s, "0 1 1_T"), vec(s, "0 1 0_T")));
}

TEST_CASE("covers treats linear values within delta as equal") {
  const Schema s({AttributeDef::linear("t", 0.0, 10.0), AttributeDef::nominal("c", {"n", "y"})});
  REQUIRE(s[0].delta() == doctest::Approx(0.5));
  const auto x = vec(s, "5.0 y_T");
  CHECK(covers(s, x, vec(s, "5.4 ?_T")));
  CHECK(covers(s, x, vec(s, "4.6 ?_T")));
  CHECK_FALSE(covers(s, x, vec(s, "5.6 ?_T")));
  CHECK_FALSE(covers(s, x, vec(s, "4.4 ?_T")));

  Schema wide = s;
  wide.set_delta_fraction(0.2);
  CHECK(covers(wide, x, vec(wide, "6.9 ?_T")));
  CHECK_FALSE(covers(wide, x, vec(wide, "7.1 ?_T")));
}

TEST_CASE("specificity counts non-star premise cells") {
  const auto s = test::mediadv_schema();
  const auto v = test::mediadv_vectors();
  CHECK(specificity(v[0]) == 1);
  CHECK(specificity(v[6]) == 3);
  CHECK(specificity(v[7]) == 4);
  CHECK(specificity(vec(s, "? * ? * * * 1_T")) == 2);
}

TEST_CASE("concordant needs asserted targets on the same attribute") {
  const auto s = test::nominal_schema({3, 3, 2});
  CHECK(concordant(vec(s, "0 * 1_T"), vec(s, "* 2 1_T")));
  CHECK_FALSE(concordant(vec(s, "0 * 1_T"), vec(s, "* 2 0_T")));
  CHECK_FALSE(concordant(vec(s, "0 * 1_T"), vec(s, "0_T 2 1")));
  CHECK_THROWS_AS(concordant(vec(s, "0 * ?_T"), vec(s, "* 2 1_T")), TargetUnasserted);
  CHECK_THROWS_AS(concordant(vec(s, "0 * 1_T"), vec(s, "* 2 ?_T")), TargetUnasserted);
}

TEST_CASE("overlaps") {
  const auto s = test::nominal_schema({3, 3, 2});
  CHECK(overlaps(s, vec(s, "0 * 1_T"), vec(s, "* 2 0_T")));
  CHECK_FALSE(overlaps(s, vec(s, "0 * 1_T"), vec(s, "1 * 0_T")));
  CHECK(overlaps(s, vec(s, "0 1 1_T"), vec(s, "0 1 0_T")));
}
