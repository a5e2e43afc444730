#include <random>

#include "doctest.h"

#include "cqac/containment.hpp"
#include "cqac/gen.hpp"
#include "cqac/parser.hpp"

using namespace cqac;

namespace {

// The 2-mapping pair: containing query with an equation and an open LSI,
// contained query satisfying it only through a disjunction over mappings.
const char* kPairA1 = "q() :- a(X1,Y1,Z1), X1 = Y1, Z1 < 5.";
const char* kPairA2 =
    "q() :- a(X,Y,Zp), a(Xp,Yp,Z), X <= 5, Y <= X, Z <= Y, Xp = Yp, Zp < 5.";

// The 6-mapping RSI1 pair.
const char* kPairB1 = "q() :- a(X,Y,Z), X <= 8, Y <= 7, Z >= 6.";
const char* kPairB2 =
    "q() :- a(X,Y,Z), a(U1,U2,X), a(V1,V2,Y), a(Z,Z1,Z2), a(U1p,U2p,U1), a(V1p,V2p,V1), "
    "U1p <= 8, U2p <= 7, U2 <= 7, V1p <= 8, V2p <= 7, V2 <= 7, Z1 <= 7, Z2 >= 6.";

// Needs two disjuncts: X != Y with both bounded below by 5.
const char* kPairC1 = "q() :- a(X,Y), X > 5.";
const char* kPairC2 = "q() :- a(X,Xp), a(Y,Xpp), X != Y, X >= 5, Y >= 5.";

}  // namespace

TEST_CASE("two-mapping pair: mappings and verdict") {
  CQACQuery q1 = parse_query(kPairA1), q2 = parse_query(kPairA2);
  auto mus = enumerate_mappings(q1, q2);
  CHECK(mus.size() == 2);
  ContainmentResult ent = entailment_check(q1, q2);
  CHECK(ent.holds);
  ContainmentResult orc = canonical_oracle_check(q1, q2);
  CHECK(orc.holds);
  CHECK(fast_contains(q1, q2, Strategy::AUTO).holds);
}

TEST_CASE("six-mapping RSI1 pair: mappings and verdict") {
  CQACQuery q1 = parse_query(kPairB1), q2 = parse_query(kPairB2);
  auto mus = enumerate_mappings(q1, q2);
  CHECK(mus.size() == 6);
  CHECK(entailment_check(q1, q2).holds);
  CHECK(classify_fragment(q1, q2) == FragmentClass::RSI1_CLOSED);
  CHECK(fast_contains(q1, q2, Strategy::RSI1).holds);
}

TEST_CASE("inequation pair contained through a two-disjunct implication") {
  CQACQuery q1 = parse_query(kPairC1), q2 = parse_query(kPairC2);
  CHECK(entailment_check(q1, q2).holds);
  CHECK(canonical_oracle_check(q1, q2).holds);
}

TEST_CASE("plain CQ containment reduces to a homomorphism") {
  CQACQuery q1 = parse_query("q() :- e(X,Y), e(Y,Z).");
  CQACQuery q2 = parse_query("q() :- e(A,B), e(B,C), e(C,D).");
  CHECK(classify_fragment(q1, q2) == FragmentClass::CQ);
  CHECK(fast_contains(q1, q2).holds);
  CHECK(!fast_contains(q2, q1).holds);
  CHECK(entailment_check(q1, q2).holds);
  CHECK(!entailment_check(q2, q1).holds);
}

TEST_CASE("non-containment yields a canonical counterexample") {
  CQACQuery q1 = parse_query("q() :- e(X,Y), X <= 3.");
  CQACQuery q2 = parse_query("q() :- e(X,Y), X <= 5.");
  ContainmentResult r = canonical_oracle_check(q1, q2);
  CHECK(!r.holds);
  REQUIRE(r.counterexample);
  // The witness database satisfies q2 but not q1.
  CHECK(evaluates_nonempty(q2, *r.counterexample));
  CHECK(!evaluates_nonempty(q1, *r.counterexample));
}

TEST_CASE("canonical databases satisfy the contained query's comparisons") {
  CQACQuery q1 = parse_query(kPairA1), q2 = parse_query(kPairA2);
  int n = 0;
  for_each_canonical_database(
      q2, q1, scale_bound(), [&](const Database& db, const std::map<std::string, Rational>&) {
        n++;
        CHECK(evaluates_nonempty(q2, db));
        return true;
      });
  CHECK(n > 0);
}

TEST_CASE("canonical enumeration refuses past the scale bound") {
  CQACQuery q1 = parse_query("q() :- e(X,Y), e(Y,Z), X >= 5, Z <= 8.");
  CQACQuery q2 = parse_query("q() :- e(A,B), e(B,C), e(C,D), e(D,E), A >= 6, E <= 7.");
  CHECK_THROWS_AS(canonical_oracle_check(q1, q2), ScaleError);
}

TEST_CASE("single-mapping reduction splits the test") {
  CQACQuery q1 = parse_query("q(X) :- e(X,Y), X <= 5, Y <= 7.");
  CQACQuery q2 = parse_query("q(X) :- e(X,Y), e(X,Z), X <= 4, Y <= 7, Z <= 7.");
  auto red = reduce_by_single_mapping(q1, q2);
  REQUIRE(red.applicable);
  // The head variable is a single-mapping variable, so X <= 5 moves to the
  // head part and must be individually implied.
  CHECK(red.head_ok);
  bool verdict = entailment_check(q1, q2).holds;
  CHECK(verdict == (red.head_ok && entailment_check(red.reduced_q1, q2).holds));
}

TEST_CASE("entailment agrees with the canonical oracle on a random corpus") {
  std::mt19937_64 rng(101);
  GenOptions opt;
  int checked = 0;
  while (checked < 80) {
    auto [q1, q2] = random_pair(rng, opt, opt);
    ContainmentResult orc;
    try {
      orc = canonical_oracle_check(q1, q2);
    } catch (const ScaleError&) {
      continue;
    }
    checked++;
    ContainmentResult ent = entailment_check(q1, q2);
    CAPTURE(q1.str());
    CAPTURE(q2.str());
    CHECK(ent.holds == orc.holds);
    ContainmentResult fast = fast_contains(q1, q2, Strategy::AUTO);
    CHECK(fast.holds == orc.holds);
  }
}

TEST_CASE("explicit strategies reject pairs outside their fragment") {
  // Two lower and two upper bounds: more than one opposite-side
  // semi-interval in either orientation.
  CQACQuery q1 = parse_query("q() :- a(X,Y), X <= 3, Y <= 7, Y >= 5, X >= 1.");
  CQACQuery q2 = parse_query("q() :- a(X,Y), X <= 2, Y >= 6.");
  CHECK_THROWS_AS(fast_contains(q1, q2, Strategy::RSI1), FragmentError);
  CHECK_THROWS_AS(fast_contains(q1, q2, Strategy::HP), FragmentError);
  // A mixed pair is still decidable by the general entailment fallback.
  CHECK(fast_contains(q1, q2, Strategy::ENTAILMENT).holds ==
        entailment_check(q1, q2).holds);
}
