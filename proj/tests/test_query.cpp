#include "doctest.h"

#include "cqac/parser.hpp"
#include "cqac/query.hpp"

using namespace cqac;

TEST_CASE("parse and print round-trip") {
  const std::string text = "q(X) :- e(X,Y), p(Y), X <= 5, Y != X.";
  CQACQuery q = parse_query(text);
  CHECK(q.head.pred == "q");
  CHECK(q.subgoals.size() == 2);
  CHECK(q.acs.comparisons.size() == 2);
  CQACQuery q2 = parse_query(q.str());
  CHECK(q2.str() == q.str());
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_query("q(X) :- e(X,"), ParseError);
  CHECK_THROWS_AS(parse_query("q(X) e(X,Y)."), ParseError);
  CHECK_THROWS_AS(parse_query(""), ParseError);
  // Facts are not queries.
  CHECK_THROWS_AS(parse_query("e(1,2)."), ParseError);
  CHECK(parse_facts("e(1,2).\ne(2,3).").relations.at("e").size() == 2);
}

TEST_CASE("normalize splits repeated variables and constants") {
  CQACQuery q = parse_query("q() :- e(X,X), e(X,5).");
  CQACQuery n = normalize(q);
  // No variable twice in relational subgoals, no constants there.
  std::set<std::string> seen;
  for (const auto& sg : n.subgoals)
    for (const auto& t : sg.args) {
      REQUIRE(t.is_var);
      CHECK(!seen.count(t.var));
      seen.insert(t.var);
    }
  // The bookkeeping equalities make it equivalent on a concrete database.
  Database db;
  db.add("e", {Rational(5), Rational(5)});
  CHECK(evaluates_nonempty(q, db));
  CHECK(evaluates_nonempty(n, db));
  Database db2;
  db2.add("e", {Rational(5), Rational(4)});
  CHECK(!evaluates_nonempty(q, db2));
  CHECK(!evaluates_nonempty(n, db2));
}

TEST_CASE("merge_equalities collapses classes and pins constants") {
  CQACQuery q = parse_query("q() :- e(X,Y), X = Y, Y = 5.");
  CQACQuery m = merge_equalities(q);
  // Both arguments become the constant 5; no equalities remain.
  for (const auto& c : m.acs.comparisons) CHECK(c.op != CompOp::EQ);
  REQUIRE(m.subgoals.size() == 1);
  CHECK(m.subgoals[0].args[0] == m.subgoals[0].args[1]);
}

TEST_CASE("evaluate answers non-Boolean queries") {
  CQACQuery q = parse_query("q(X) :- e(X,Y), Y > 3.");
  Database db;
  db.add("e", {Rational(1), Rational(2)});
  db.add("e", {Rational(1), Rational(4)});
  db.add("e", {Rational(2), Rational(9)});
  auto ans = evaluate(q, db);
  CHECK(ans == std::set<std::vector<Rational>>{{Rational(1)}, {Rational(2)}});
}

TEST_CASE("expansion unifies repeated view arguments") {
  // R'(X) :- V2(X,X), X < 4   with   V2(Y,Z) :- p(W), s(Y,Z), Y<=W, W<=Z
  // expands to p(W1), s(X,X), X<=W1, W1<=X, X<4 up to renaming.
  auto views = parse_views("v2(Y,Z) :- p(W), s(Y,Z), Y <= W, W <= Z.");
  CQACQuery r = parse_query("r(X) :- v2(X,X), X < 4.");
  CQACQuery exp = expand(r, views);
  REQUIRE(exp.subgoals.size() == 2);
  std::string wvar;
  for (const auto& sg : exp.subgoals) {
    if (sg.pred == "p") {
      REQUIRE(sg.args.size() == 1);
      wvar = sg.args[0].var;
    } else {
      CHECK(sg.pred == "s");
      CHECK(sg.args[0] == Term::variable("X"));
      CHECK(sg.args[1] == Term::variable("X"));
    }
  }
  REQUIRE(!wvar.empty());
  CHECK(implies(exp.acs, Comparison::make(Term::variable("X"), "<=", Term::variable(wvar))));
  CHECK(implies(exp.acs, Comparison::make(Term::variable(wvar), "<=", Term::variable("X"))));
  CHECK(implies(exp.acs, Comparison::make(Term::variable("X"), "<", Term::constant(Rational(4)))));
}

TEST_CASE("rectification imports expansion comparisons over rewriting variables") {
  auto views = parse_views("v2(Y,Z) :- p(W), s(Y,Z), Y <= W, W <= Z.");
  CQACQuery r = parse_query(
      "r(Y1) :- v2(Y1,Z1), v2(Y2,Z2), Z1 <= Y2, Y1 >= Z2, Y1 < 4.");
  CQACQuery rect = rectify(r, views);
  // The expansion forces Y1 <= Z1 and Y2 <= Z2 through the view body.
  CHECK(implies(rect.acs, Comparison::make(Term::variable("Y1"), "<=", Term::variable("Z1"))));
  CHECK(implies(rect.acs, Comparison::make(Term::variable("Y2"), "<=", Term::variable("Z2"))));
  // Rectification leaves the relational shape alone.
  CHECK(rect.subgoals.size() == r.subgoals.size());
}

TEST_CASE("workspace parsing separates rules and facts") {
  Workspace w = parse_workspace("q() :- e(X,Y), X <= 3.\ne(1,2).\ne(2,3).");
  CHECK(w.queries.size() == 1);
  CHECK(w.facts.relations.at("e").size() == 2);
}

TEST_CASE("rational constants parse in all positions") {
  CQACQuery q = parse_query("q() :- e(X), X >= 7/2, X != 5.5.");
  bool saw_half = false, saw_55 = false;
  for (const auto& c : q.acs.comparisons) {
    if (!c.lhs.is_var && c.lhs.val == Rational(7, 2)) saw_half = true;
    if (!c.rhs.is_var && c.rhs.val == Rational(7, 2)) saw_half = true;
    if (!c.lhs.is_var && c.lhs.val == Rational(11, 2)) saw_55 = true;
    if (!c.rhs.is_var && c.rhs.val == Rational(11, 2)) saw_55 = true;
  }
  CHECK(saw_half);
  CHECK(saw_55);
}
