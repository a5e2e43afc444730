#include <random>

#include "doctest.h"

#include "cqac/containment.hpp"
#include "cqac/gen.hpp"
#include "cqac/hardness.hpp"

using namespace cqac;

TEST_CASE("formula parsing and evaluation") {
  Pi2Formula f = parse_pi2_formula("(forall (p1 p2) (exists (q1) (or (not p1) q1)))");
  CHECK(f.universals == std::vector<std::string>{"p1", "p2"});
  CHECK(f.existentials == std::vector<std::string>{"q1"});
  CHECK(eval_pi2sat(f));  // pick q1 = true

  // forall p1 . p1 is false.
  CHECK(!eval_pi2sat(parse_pi2_formula("(forall (p1) (exists () p1))")));
  // forall p1 exists q1 . (p1 and q1) or ((not p1) and (not q1)) is true.
  CHECK(eval_pi2sat(parse_pi2_formula(
      "(forall (p1) (exists (q1) (or (and p1 q1) (and (not p1) (not q1)))))")));
  // forall p1 p2 . p1 or p2 is false.
  CHECK(!eval_pi2sat(parse_pi2_formula("(forall (p1 p2) (exists () (or p1 p2)))")));
}

TEST_CASE("formula parse errors") {
  CHECK_THROWS(parse_pi2_formula("(forall (p1)"));
  CHECK_THROWS(parse_pi2_formula("(exists (q1) q1)"));
  CHECK_THROWS(parse_pi2_formula(""));
}

TEST_CASE("gadget variant names round-trip") {
  for (auto v : {GadgetVariant::OSI_NEQ, GadgetVariant::OLSI_CONST,
                 GadgetVariant::OLSI_CLSI_NEQ, GadgetVariant::NEQ_ONLY}) {
    CHECK(gadget_variant_from_name(gadget_variant_name(v)) == v);
  }
  CHECK_THROWS(gadget_variant_from_name("no-such-variant"));
}

TEST_CASE("reduction queries are well-formed per variant") {
  Pi2Formula f = parse_pi2_formula("(forall (p1) (exists (q1) (or (not p1) q1)))");
  for (auto v : {GadgetVariant::OSI_NEQ, GadgetVariant::OLSI_CONST,
                 GadgetVariant::OLSI_CLSI_NEQ, GadgetVariant::NEQ_ONLY}) {
    ReductionPair rp = reduce_pi2sat(f, v);
    CAPTURE(gadget_variant_name(v));
    CHECK_NOTHROW(rp.q1.check_valid());
    CHECK_NOTHROW(rp.q2.check_valid());
    CHECK(rp.q1.is_boolean());
    CHECK(rp.q2.is_boolean());
  }
  // The inequation-only variant uses no semi-intervals in the containing query.
  ReductionPair neq = reduce_pi2sat(f, GadgetVariant::NEQ_ONLY);
  for (const auto& c : neq.q1.acs.comparisons) CHECK(si_of(c) == std::nullopt);
}

TEST_CASE("reduction verdict matches formula truth on fixed formulas") {
  struct Case {
    const char* text;
    bool truth;
  };
  const Case cases[] = {
      {"(forall (p1) (exists (q1) (or p1 q1)))", true},
      {"(forall (p1) (exists () p1))", false},
      {"(forall () (exists (q1) q1))", true},
      {"(forall () (exists (q1) (and q1 (not q1))))", false},
      {"(forall (p1) (exists (q1) (and (or p1 q1) (or (not p1) (not q1)))))", true},
  };
  for (const auto& c : cases) {
    Pi2Formula f = parse_pi2_formula(c.text);
    REQUIRE(eval_pi2sat(f) == c.truth);
    for (auto v : {GadgetVariant::OSI_NEQ, GadgetVariant::OLSI_CONST,
                   GadgetVariant::OLSI_CLSI_NEQ, GadgetVariant::NEQ_ONLY}) {
      ReductionPair rp = reduce_pi2sat(f, v);
      CAPTURE(c.text);
      CAPTURE(gadget_variant_name(v));
      ContainmentResult r = canonical_oracle_check(rp.q1, rp.q2, /*bound=*/12);
      CHECK(r.holds == c.truth);
    }
  }
}

TEST_CASE("reduction verdict matches formula truth on random formulas") {
  std::mt19937_64 rng(202);
  int checked = 0;
  while (checked < 12) {
    Pi2Formula f = random_pi2_formula(rng, /*n_univ=*/(int)(rng() % 2), /*n_exist=*/1 + rng() % 3,
                                      /*max_nodes=*/6);
    bool truth = eval_pi2sat(f);
    GadgetVariant v = static_cast<GadgetVariant>(checked % 4);
    ReductionPair rp = reduce_pi2sat(f, v);
    try {
      ContainmentResult r = canonical_oracle_check(rp.q1, rp.q2, /*bound=*/12);
      CAPTURE(gadget_variant_name(v));
      CHECK(r.holds == truth);
      checked++;
    } catch (const ScaleError&) {
    }
  }
}
