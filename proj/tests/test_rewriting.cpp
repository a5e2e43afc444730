#include "doctest.h"

#include "cqac/parser.hpp"
#include "cqac/rewriting.hpp"

using namespace cqac;

namespace {

// Endpoint-bounds query with one view exporting each bound.
const char* kQ = "q() :- e(X,Y), e(Y,Z), X >= 5, Z <= 5.";
const char* kViews =
    "v1(Z) :- e(X,Y), e(Y,Z), X >= 5.\n"
    "v2(X) :- e(X,Y), e(Y,Z), Z <= 5.\n";

ViewInstance inst_of(const std::string& text) { return parse_facts(text); }

}  // namespace

TEST_CASE("CQ images of views carry comparison atoms") {
  auto views = parse_views("v1(X,Y) :- e(X,Z), e(Z,Y), Z >= 5.");
  auto cqv = build_cq_views(views);
  REQUIRE(cqv.size() == 1);
  CHECK(cqv[0].head.pred == "v1");
  bool saw = false;
  for (const auto& sg : cqv[0].subgoals)
    if (sg.pred == "u_ge_5") {
      saw = true;
      CHECK(sg.args.size() == 1);
    }
  CHECK(saw);
  CHECK(cqv[0].acs.comparisons.empty());
}

TEST_CASE("inverse rules introduce one functional term per hidden variable") {
  auto cqv = build_cq_views(parse_views("v1(X,Y) :- e(X,Z), e(Z,Y), Z >= 5."));
  auto rules = inverse_rules(cqv);
  REQUIRE(rules.size() == 3);  // e, e, u_ge_5
  for (const auto& r : rules) {
    REQUIRE(r.body.size() == 1);
    CHECK(r.body[0].pred == "v1");
    for (const auto& t : r.head.args) {
      if (t.kind == DTerm::FUNC) {
        CHECK(t.name.rfind("f_v1_", 0) == 0);
        CHECK(t.args.size() == 2);  // the view's head arity
      }
    }
  }
}

TEST_CASE("MCR answers true instances and rejects false ones") {
  CQACQuery q = parse_query(kQ);
  auto views = parse_views(kViews);
  MCRProgram mcr = mcr_rsi1(q, views);
  CHECK_NOTHROW(mcr.program.check_valid());
  // v1(3): some path ends at 3 after a >=5 start; 3 <= 5 closes the query.
  CHECK(!certain_answers(mcr, inst_of("v1(3).")).empty());
  // v2(6): some path starts at 6 >= 5 and ends <= 5.
  CHECK(!certain_answers(mcr, inst_of("v2(6).")).empty());
  // Combination rule: v1(Z), v2(X) with X >= Z.
  CHECK(!certain_answers(mcr, inst_of("v1(3).\nv2(6).")).empty());
  // None of the three rewritings applies.
  CHECK(certain_answers(mcr, inst_of("v1(6).\nv2(3).")).empty());
  CHECK(certain_answers(mcr, inst_of("v1(6).")).empty());
  CHECK(certain_answers(mcr, inst_of("v2(3).")).empty());
}

TEST_CASE("hand-written rewritings are contained rewritings and in the MCR") {
  CQACQuery q = parse_query(kQ);
  auto views = parse_views(kViews);
  MCRProgram mcr = mcr_rsi1(q, views);
  const char* rewritings[] = {
      "r() :- v1(Z), Z <= 5.",
      "r() :- v2(X), X >= 5.",
      "r() :- v1(Z), v2(X), X >= Z.",
  };
  for (const char* text : rewritings) {
    CQACQuery r = parse_query(text);
    CAPTURE(text);
    CHECK(check_contained_rewriting(r, q, views));
    CHECK(contained_in_mcr(mcr, r, views));
  }
  // Dropping the comparison breaks containment.
  CQACQuery bad = parse_query("r() :- v1(Z).");
  CHECK(!check_contained_rewriting(bad, q, views));
  CHECK(!contained_in_mcr(mcr, bad, views));
}

TEST_CASE("chained views reach the query through transitive coupling") {
  CQACQuery q = parse_query("q() :- e(X,Z), e(Z,Y), X >= 5, Y <= 8.");
  auto views = parse_views(
      "v1(X,Y) :- e(X,Z), e(Z,Y), Z >= 5.\n"
      "v2(X,Y) :- e(X,Z), e(Z,Y), Z <= 8.\n");
  MCRProgram mcr = mcr_rsi1(q, views);
  // v1(1,2) guarantees e(s,2) with s >= 5; v2(2,3) guarantees e(2,t) with
  // t <= 8; the pair e(s,2), e(2,t) witnesses the query.
  CHECK(!certain_answers(mcr, inst_of("v1(1,2).\nv2(2,3).")).empty());
  CHECK(certain_answers(mcr, inst_of("v1(1,2).")).empty());
  // v2(9,3) alone is a witness: e(9,s), e(s,3) with 9 >= 5 and 3 <= 8.
  CHECK(!certain_answers(mcr, inst_of("v2(9,3).")).empty());
  // v2(4,9) is not: in e(4,s), e(s,9) with s <= 8, s may be below 5.
  CHECK(certain_answers(mcr, inst_of("v1(1,2).\nv2(4,9).")).empty());
}

TEST_CASE("certain answer oracle agrees on endpoint instances") {
  CQACQuery q = parse_query("q() :- e(X), X >= 5.");
  auto views = parse_views("v(X) :- e(X).");
  auto yes = certain_answers_oracle(q, views, inst_of("v(7)."));
  REQUIRE(yes.defined);
  CHECK(!yes.answers.empty());
  auto no = certain_answers_oracle(q, views, inst_of("v(3)."));
  REQUIRE(no.defined);
  CHECK(no.answers.empty());
  MCRProgram mcr = mcr_rsi1(q, views);
  CHECK(certain_answers(mcr, inst_of("v(7).")) == yes.answers);
  CHECK(certain_answers(mcr, inst_of("v(3).")) == no.answers);
}

TEST_CASE("unrealizable instances are reported undefined") {
  CQACQuery q = parse_query("q() :- e(X), X >= 5.");
  auto views = parse_views("v(X) :- e(X), X <= 3.");
  auto r = certain_answers_oracle(q, views, inst_of("v(5)."));
  CHECK(!r.defined);
}

TEST_CASE("head-variable comparisons are restored by the final rule") {
  CQACQuery q = parse_query("q(X) :- e(X,Y), Y <= 5, X <= 7.");
  auto views = parse_views("v(X,Y) :- e(X,Y).");
  CHECK_THROWS_AS(mcr_rsi1(q, views), FragmentError);
  MCRProgram mcr = mcr_rsi1_plus(q, views);
  bool saw_final = false;
  for (const auto& r : mcr.program.rules)
    if (r.tag == "headacs") saw_final = true;
  CHECK(saw_final);
  auto a1 = certain_answers(mcr, inst_of("v(3,4)."));
  CHECK(a1 == std::set<std::vector<Rational>>{{Rational(3)}});
  CHECK(certain_answers(mcr, inst_of("v(9,4).")).empty());   // violates X <= 7
  CHECK(certain_answers(mcr, inst_of("v(3,6).")).empty());   // violates Y <= 5
  auto o1 = certain_answers_oracle(q, views, inst_of("v(3,4)."));
  REQUIRE(o1.defined);
  CHECK(o1.answers == a1);
}

TEST_CASE("the fragment guard rejects unsupported comparison mixes") {
  auto views = parse_views("v(X) :- e(X).");
  // Two lower bounds.
  CHECK_THROWS_AS(mcr_rsi1(parse_query("q() :- e(X), e(Y), X >= 3, Y >= 5."), views),
                  FragmentError);
  // Var-var comparison.
  CHECK_THROWS_AS(mcr_rsi1(parse_query("q() :- e(X), e(Y), X <= Y."), views), FragmentError);
  // Mixed open and closed upper bounds.
  CHECK_THROWS_AS(mcr_rsi1(parse_query("q() :- e(X), e(Y), X <= 3, Y < 5."), views),
                  FragmentError);
}

TEST_CASE("MCR expansions are contained rewritings") {
  CQACQuery q = parse_query(kQ);
  auto views = parse_views(kViews);
  MCRProgram mcr = mcr_rsi1(q, views);
  // Depth 3 is the shortest complete unfolding: query rule, then a link
  // rule for each i-predicate, then an inverse rule for its builtin atom.
  auto exps = expansions_up_to_depth(mcr.program, 3);
  CHECK(!exps.empty());
  for (const auto& exp : exps) {
    if (!exp.acs.comparisons.empty() && !is_consistent(exp.acs)) continue;
    CAPTURE(exp.str());
    CHECK(check_contained_rewriting(exp, q, views));
  }
}
