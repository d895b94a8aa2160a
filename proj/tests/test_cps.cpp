// Copyright 2026 The cps-hier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "cpshier/cps.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cpshier;
using cpshier::testing::Rng;

namespace {

Cps two_event_cps(const std::vector<Rational>& given_s,
                  const std::vector<Rational>& given_r) {
  FiniteSpace s({"L", "R"});
  ConditioningFamily fam(s, {Event::full(s), Event(s, {"R"})});
  return make_cps(s, fam,
                  {measure_from_masses(s, given_s), measure_from_masses(s, given_r)});
}

}  // namespace

TEST_CASE("validator accepts a textbook system") {
  Cps c = two_event_cps({Rational(1, 2), Rational(1, 2)}, {Rational(0), Rational(1)});
  CHECK(validate_cps(c).ok());
}

TEST_CASE("validator flags certainty failures") {
  Cps c = two_event_cps({Rational(1, 2), Rational(1, 2)},
                        {Rational(1, 2), Rational(1, 2)});
  ValidationReport r = validate_cps(c);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations[0].kind == CpsViolation::Kind::certainty);
  CHECK(r.violations[0].b == Event(c.space, {"R"}));
  CHECK(r.violations[0].lhs == Rational(1, 2));
}

TEST_CASE("validator pins chain-rule failures to a triple") {
  FiniteSpace s({"a", "b", "c"});
  Event ab(s, {"a", "b"});
  ConditioningFamily fam(s, {Event::full(s), ab});
  Cps c = make_cps(
      s, fam,
      {measure_from_masses(s, {Rational(1, 3), Rational(1, 3), Rational(1, 3)}),
       measure_from_masses(s, {Rational(1), Rational(0), Rational(0)})});
  ValidationReport r = validate_cps(c);
  REQUIRE_FALSE(r.ok());

  bool found = false;
  for (const auto& v : r.violations) {
    if (v.kind != CpsViolation::Kind::chain_rule) continue;
    if (v.a == Event(s, {"a"}) && v.b == ab && v.c == Event::full(s)) {
      CHECK(v.lhs == Rational(2, 3));  // mu(a|ab) * mu(ab|S) = 1 * 2/3
      CHECK(v.rhs == Rational(1, 3));  // mu(a|S)
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("a zero-probability hypothesis leaves its conditional free") {
  // mu({R}|S) = 0, so the chain rule pins nothing about mu(.|{R}).
  Cps c = two_event_cps({Rational(1), Rational(0)}, {Rational(0), Rational(1)});
  CHECK(validate_cps(c).ok());
}

TEST_CASE("restricted search agrees with exhaustive search on small spaces") {
  Rng rng(42);
  ValidateOptions exhaustive;      // bound 12 covers every space here
  ValidateOptions restricted;
  restricted.exhaustive_atom_bound = 0;
  for (int it = 0; it < 300; ++it) {
    FiniteSpace space = cpshier::testing::random_space(rng, 8, "a");
    ConditioningFamily fam =
        cpshier::testing::random_family(rng, space, 4, it % 2 == 0);
    Cps c = cpshier::testing::random_measure_array(rng, space, fam, it % 4);
    CHECK(validate_cps(c, exhaustive).ok() == validate_cps(c, restricted).ok());
  }
}

TEST_CASE("cps_from_prior divides through by the event mass") {
  FiniteSpace s({"a", "b", "c"});
  auto uniform = make_measure(s, {{"a", Rational(1, 3)},
                                  {"b", Rational(1, 3)},
                                  {"c", Rational(1, 3)}});
  Event ab(s, {"a", "b"});

  SECTION("uniform prior") {
    Cps c = cps_from_prior(uniform, ConditioningFamily(s, {Event::full(s), ab}));
    CHECK(c.conditional_at(ab).mass("a") == Rational(1, 2));
    CHECK(c.conditional_at(ab).mass("b") == Rational(1, 2));
    CHECK(c.conditional_at(ab).mass("c") == Rational(0));
    CHECK(validate_cps(c).ok());
  }
  SECTION("point-mass prior over the trivial family") {
    Cps c = cps_from_prior(point_mass(s, "a"), ConditioningFamily(s, {Event::full(s)}));
    CHECK(c.conditional(0) == point_mass(s, "a"));
  }
  SECTION("zero-mass conditioning event is refused") {
    CHECK_THROWS_MATCHES(
        cps_from_prior(point_mass(s, "a"),
                       ConditioningFamily(s, {Event::full(s), Event(s, {"b", "c"})})),
        Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
          return e.code() == Errc::zero_mass_condition;
        }));
  }
}

TEST_CASE("pushforward_cps maps conditionals along event preimages") {
  FiniteSpace s({"L", "R"});
  FiniteSpace two_types({"t1", "t2"});
  FiniteSpace one_type({"t"});
  ConditioningFamily base(s, {Event::full(s), Event(s, {"R"})});
  CylinderFamily on_two = lift_family(base, two_types);
  CylinderFamily on_one = lift_family(base, one_type);

  Rng rng(7);
  Cps c = cpshier::testing::random_valid_cps(rng, on_two.prod.space(),
                                             on_two.lifted);
  AtomMap collapse = AtomMap::from_function(
      on_two.prod.space(), on_one.prod.space(), [&](const std::string& atom) {
        int idx = on_two.prod.space().require(atom);
        return on_one.prod.space().atom(
            on_one.prod.fuse(on_two.prod.split(idx).first, 0));
      });

  SECTION("identity map is the identity") {
    Cps same = pushforward_cps(c, AtomMap::identity(c.space), c.family);
    CHECK(same == c);
  }

  SECTION("collapsing co-types preserves validity") {
    Cps image = pushforward_cps(c, collapse, on_one.lifted);
    CHECK(validate_cps(image).ok());
    CHECK(image.family == on_one.lifted);
  }

  SECTION("a target event whose preimage is missing is refused") {
    // collapse^-1({(L,t)}) = {L} x {t1,t2}, not a source conditioning event.
    ConditioningFamily missing(on_one.prod.space(),
                               {Event(on_one.prod.space(), {"(L,t)"})});
    CHECK_THROWS_MATCHES(
        pushforward_cps(c, collapse, missing), Error,
        Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.code() == Errc::family_mismatch; }));
    // collapse^-1({(R,t)}) is the {R}-cylinder, so this family is admissible.
    ConditioningFamily admissible(on_one.prod.space(),
                                  {on_one.lifted.event(0),
                                   Event(on_one.prod.space(), {"(R,t)"})});
    CHECK_NOTHROW(pushforward_cps(c, collapse, admissible));
  }
}

TEST_CASE("lift_family builds the cylinders in base order") {
  FiniteSpace s({"L", "R"});
  FiniteSpace y({"u", "v"});

  SECTION("trivial base lifts to the full product") {
    CylinderFamily cyl = lift_family(ConditioningFamily(s, {Event::full(s)}), y);
    REQUIRE(cyl.lifted.size() == 1);
    CHECK(cyl.lifted.event(0) == Event::full(cyl.prod.space()));
  }
  SECTION("cylinders enumerate base members times Y") {
    CylinderFamily cyl = lift_family(
        ConditioningFamily(s, {Event::full(s), Event(s, {"R"})}), y);
    REQUIRE(cyl.lifted.size() == 2);
    CHECK(cyl.lifted.event(1) == Event(cyl.prod.space(), {"(R,u)", "(R,v)"}));
  }
  SECTION("empty families cannot be constructed at all") {
    CHECK_THROWS_MATCHES(
        ConditioningFamily(s, {}), Error,
        Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.code() == Errc::empty_family; }));
  }
}

TEST_CASE("marginal_cps sums fibers over Y") {
  FiniteSpace x({"L", "R"});
  FiniteSpace y({"u", "v"});
  ConditioningFamily base(x, {Event::full(x), Event(x, {"R"})});
  CylinderFamily cyl = lift_family(base, y);
  const FiniteSpace& prod = cyl.prod.space();

  Cps c = make_cps(
      prod, cyl.lifted,
      {make_measure(prod, {{"(L,u)", Rational(1, 4)},
                           {"(L,v)", Rational(1, 4)},
                           {"(R,u)", Rational(1, 2)}}),
       make_measure(prod, {{"(R,u)", Rational(1)}})});
  REQUIRE(validate_cps(c).ok());

  SECTION("fiber sums match the worked example") {
    Cps m = marginal_cps(c, cyl.prod);
    CHECK(m.family == base);
    CHECK(m.conditional(0).mass("L") == Rational(1, 2));
    CHECK(m.conditional(0).mass("R") == Rational(1, 2));
    CHECK(m.conditional(1).mass("R") == Rational(1));
    CHECK(validate_cps(m).ok());
  }

  SECTION("marginal is the left-projection pushforward (two routes)") {
    Cps via_projection = pushforward_cps(c, cyl.prod.left_projection(), base);
    CHECK(marginal_cps(c, cyl.prod) == via_projection);
  }

  SECTION("singleton Y makes the marginal a relabeling") {
    FiniteSpace single({"t"});
    CylinderFamily cyl1 = lift_family(base, single);
    Rng rng(11);
    Cps on_prod = cpshier::testing::random_valid_cps(rng, cyl1.prod.space(),
                                                     cyl1.lifted);
    Cps m = marginal_cps(on_prod, cyl1.prod);
    for (int k = 0; k < m.family.size(); ++k)
      for (int i = 0; i < x.size(); ++i)
        CHECK(m.conditional(k).mass(i) ==
              on_prod.conditional(k).mass(cyl1.prod.fuse(i, 0)));
  }

  SECTION("non-cylinder families are refused") {
    ConditioningFamily crooked(prod, {Event(prod, {"(L,u)", "(R,v)"})});
    Cps bad = make_cps(prod, crooked,
                       {make_measure(prod, {{"(L,u)", Rational(1, 2)},
                                            {"(R,v)", Rational(1, 2)}})});
    CHECK_THROWS_MATCHES(
        marginal_cps(bad, cyl.prod), Error,
        Catch::Matchers::Predicate<Error>([](const Error& e) {
          return e.code() == Errc::not_cylinder_family;
        }));
  }
}

TEST_CASE("pushforward_cps properties on fuzzed admissible maps") {
  Rng rng(20260811);
  for (int it = 0; it < 120; ++it) {
    auto c = cpshier::testing::random_admissible_map_case(rng);
    REQUIRE(validate_cps(c.source).ok());
    Cps image = pushforward_cps(c.source, c.f, c.target_family);
    // Well-definedness: the image is again a CPS (zero tolerance).
    CHECK(validate_cps(image).ok());
    // Agreement with the brute-force oracle on the image as well.
    CHECK(cpshier::testing::brute_force_cps_valid(image));
  }
}

TEST_CASE("pushforward_cps composes functorially") {
  Rng rng(20260812);
  for (int it = 0; it < 80; ++it) {
    auto c = cpshier::testing::random_two_stage_case(rng);
    Cps one_step = pushforward_cps(c.source, compose(c.g, c.f), c.far_family);
    Cps two_steps = pushforward_cps(pushforward_cps(c.source, c.f, c.mid_family),
                                    c.g, c.far_family);
    CHECK(one_step == two_steps);
    CHECK(validate_cps(one_step).ok());
  }
}

TEST_CASE("prior-based systems always validate") {
  Rng rng(99);
  for (int it = 0; it < 100; ++it) {
    FiniteSpace space = cpshier::testing::random_space(rng, 5, "a");
    ConditioningFamily fam = cpshier::testing::random_family(rng, space, 4, true);
    Cps c = cps_from_prior(cpshier::testing::random_full_support_measure(rng, space),
                           fam);
    CHECK(validate_cps(c).ok());
  }
}
