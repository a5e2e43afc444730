#include <map>
#include <random>
#include <set>

#include "doctest.h"

#include "cqac/ac.hpp"

using namespace cqac;

namespace {

const std::vector<std::string> kOps = {"<", "<=", "=", "!=", ">", ">="};

Term rand_term(std::mt19937_64& rng, int n_vars, const std::vector<Rational>& consts) {
  if (rng() % 3 == 0) return Term::constant(consts[rng() % consts.size()]);
  return Term::variable("X" + std::to_string(1 + rng() % n_vars));
}

ACSet random_acset(std::mt19937_64& rng, int max_acs = 4, bool require_consistent = false) {
  const std::vector<Rational> consts = {Rational(3), Rational(5), Rational(7)};
  for (int attempt = 0; attempt < 64; attempt++) {
    ACSet acs;
    for (int i = 1; i <= 4; i++) acs.universe.insert("X" + std::to_string(i));
    int n = 1 + (int)(rng() % max_acs);
    for (int i = 0; i < n; i++) {
      Term a = rand_term(rng, 4, consts);
      Term b = rand_term(rng, 4, consts);
      if (!a.is_var && !b.is_var) {
        b = Term::variable("X" + std::to_string(1 + rng() % 4));
      }
      acs.add_term(a, kOps[rng() % kOps.size()], b);
    }
    if (!require_consistent || is_consistent(acs)) return acs;
  }
  return ACSet{};
}

bool satisfies(const Comparison& c, const std::map<std::string, Rational>& assign) {
  auto val = [&](const Term& t) { return t.is_var ? assign.at(t.var) : t.val; };
  Rational a = val(c.lhs), b = val(c.rhs);
  switch (c.op) {
    case CompOp::LT: return a < b;
    case CompOp::LE: return a <= b;
    case CompOp::EQ: return a == b;
    case CompOp::NEQ: return a != b;
  }
  return false;
}

bool satisfies_all(const std::vector<Comparison>& cs,
                   const std::map<std::string, Rational>& assign) {
  for (const auto& c : cs)
    if (!satisfies(c, assign)) return false;
  return true;
}

std::map<std::string, Rational> random_assignment(std::mt19937_64& rng,
                                                  const std::set<std::string>& vars) {
  static const std::vector<Rational> pool = {Rational(0), Rational(2),  Rational(3),
                                             Rational(4), Rational(5),  Rational(11, 2),
                                             Rational(6), Rational(7),  Rational(9)};
  std::map<std::string, Rational> a;
  for (const auto& v : vars) a[v] = pool[rng() % pool.size()];
  return a;
}

}  // namespace

TEST_CASE("comparison construction and complement") {
  Comparison c = Comparison::make(Term::variable("X"), ">", Term::constant(Rational(5)));
  CHECK(c.op == CompOp::LT);  // canonicalized to 5 < X
  CHECK(c.str() == "X > 5");
  Comparison nc = c.complement();
  CHECK(satisfies(nc, {{"X", Rational(5)}}));
  CHECK(!satisfies(nc, {{"X", Rational(6)}}));

  Comparison d = Comparison::make(Term::variable("X"), "!=", Term::variable("Y"));
  Comparison nd = d.complement();
  CHECK(nd.op == CompOp::EQ);
}

TEST_CASE("semi-interval classification and implication") {
  auto le5 = si_of(Comparison::make(Term::variable("X"), "<=", Term::constant(Rational(5))));
  auto lt7 = si_of(Comparison::make(Term::variable("X"), "<", Term::constant(Rational(7))));
  auto ge3 = si_of(Comparison::make(Term::variable("X"), ">=", Term::constant(Rational(3))));
  REQUIRE(le5);
  REQUIRE(lt7);
  REQUIRE(ge3);
  CHECK(le5->upper);
  CHECK(!le5->strict);
  CHECK(le5->implies(*lt7));   // X<=5 implies X<7
  CHECK(!lt7->implies(*le5));
  CHECK(!le5->implies(*ge3));
  CHECK(le5->pred_suffix() == "le_5");
  CHECK(si_of(Comparison::make(Term::variable("X"), "<", Term::variable("Y"))) == std::nullopt);
}

TEST_CASE("closure derives transitive and equality facts") {
  ACSet acs;
  acs.add_term(Term::variable("X"), "<", Term::variable("Y"));
  acs.add_term(Term::variable("Y"), "<", Term::variable("Z"));
  CHECK(implies(acs, Comparison::make(Term::variable("X"), "<", Term::variable("Z"))));
  CHECK(implies(acs, Comparison::make(Term::variable("X"), "!=", Term::variable("Z"))));

  ACSet eq;
  eq.add_term(Term::variable("X"), "<=", Term::variable("Y"));
  eq.add_term(Term::variable("Y"), "<=", Term::variable("X"));
  CHECK(implies(eq, Comparison::make(Term::variable("X"), "=", Term::variable("Y"))));
}

TEST_CASE("closure detects inconsistency through constants") {
  ACSet acs;
  acs.add_term(Term::variable("X"), "<", Term::constant(Rational(5)));
  acs.add_term(Term::variable("X"), ">", Term::constant(Rational(7)));
  CHECK(!is_consistent(acs));

  ACSet fine;
  fine.add_term(Term::variable("X"), "<", Term::constant(Rational(7)));
  fine.add_term(Term::variable("X"), ">", Term::constant(Rational(5)));
  CHECK(is_consistent(fine));
}

TEST_CASE("no-values-between rule derives inequations") {
  // X <= Z <= Y, X <= W <= Y, W != Z forces X != Y.
  ACSet acs;
  acs.add_term(Term::variable("X"), "<=", Term::variable("Z"));
  acs.add_term(Term::variable("Z"), "<=", Term::variable("Y"));
  acs.add_term(Term::variable("X"), "<=", Term::variable("W"));
  acs.add_term(Term::variable("W"), "<=", Term::variable("Y"));
  acs.add_term(Term::variable("W"), "!=", Term::variable("Z"));
  CHECK(implies(acs, Comparison::make(Term::variable("X"), "!=", Term::variable("Y"))));
}

TEST_CASE("closure idempotence on random sets") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; i++) {
    ACSet acs = random_acset(rng, 4, /*require_consistent=*/true);
    ACClosure c1 = closure(acs);
    REQUIRE(c1.consistent);
    ACSet again;
    again.universe = acs.universe;
    again.relevant_constants = acs.relevant_constants;
    for (const auto& c : c1.derived) again.add(c);
    ACClosure c2 = closure(again);
    REQUIRE(c2.consistent);
    std::set<std::string> s1, s2;
    for (const auto& c : c1.derived) s1.insert(c.str());
    for (const auto& c : c2.derived) s2.insert(c.str());
    CHECK(s1 == s2);
  }
}

TEST_CASE("closure soundness under random assignments") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; i++) {
    ACSet acs = random_acset(rng, 4, /*require_consistent=*/true);
    ACClosure cl = closure(acs);
    for (int t = 0; t < 40; t++) {
      auto a = random_assignment(rng, acs.universe);
      if (!satisfies_all(acs.comparisons, a)) continue;
      for (const auto& d : cl.derived) {
        CAPTURE(d.str());
        CHECK(satisfies(d, a));
      }
    }
  }
}

TEST_CASE("depth-one and full rule-8 closure agree on random sets") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; i++) {
    ACSet acs = random_acset(rng);
    ACClosure a = closure(acs, ClosureMode::DEPTH_ONE_RULE8);
    ACClosure b = closure(acs, ClosureMode::FULL_RULE8);
    REQUIRE(a.consistent == b.consistent);
    if (!a.consistent) continue;
    std::set<std::string> sa, sb;
    for (const auto& c : a.derived) sa.insert(c.str());
    for (const auto& c : b.derived) sb.insert(c.str());
    CHECK(sa == sb);
  }
}

TEST_CASE("implies agrees with single-disjunct implication_holds") {
  std::mt19937_64 rng(19);
  const std::vector<Rational> consts = {Rational(3), Rational(5), Rational(7)};
  for (int i = 0; i < 300; i++) {
    ACSet acs = random_acset(rng, 3, /*require_consistent=*/true);
    Term a = rand_term(rng, 4, consts);
    Term b = Term::variable("X" + std::to_string(1 + rng() % 4));
    if (!a.is_var && !b.is_var) continue;
    Comparison target = Comparison::make(a, kOps[rng() % kOps.size()], b);
    CHECK(implies(acs, target) == implication_holds(acs, {target}));
  }
}

TEST_CASE("two-disjunct implication needing both sides") {
  // X != Y and 5 <= Y and 5 <= X force X > 5 or Y > 5, but neither alone.
  ACSet acs;
  acs.add_term(Term::variable("X"), "!=", Term::variable("Y"));
  acs.add_term(Term::constant(Rational(5)), "<=", Term::variable("Y"));
  acs.add_term(Term::constant(Rational(5)), "<=", Term::variable("X"));
  Comparison x5 = Comparison::make(Term::variable("X"), ">", Term::constant(Rational(5)));
  Comparison y5 = Comparison::make(Term::variable("Y"), ">", Term::constant(Rational(5)));
  CHECK(!implies(acs, x5));
  CHECK(!implies(acs, y5));
  CHECK(implication_holds(acs, {x5, y5}));
  auto mf = minimal_form(acs, {x5, y5});
  CHECK(mf.size() == 2);

  // Adding a disjunct implied by nothing keeps the minimal core at size 2.
  Comparison x9 = Comparison::make(Term::variable("X"), "<=", Term::constant(Rational(9)));
  auto mf2 = minimal_form(acs, {x5, y5, x9});
  CHECK((mf2.size() == 1 || mf2.size() == 2));
  bool has_x9 = false;
  for (const auto& c : mf2)
    if (c == x9) has_x9 = true;
  if (!has_x9) CHECK(mf2.size() == 2);
}

TEST_CASE("closed-LSI disjunctions reduce to a single disjunct") {
  // Minimal containment implications whose rhs uses only var <= const
  // comparisons keep exactly one disjunct.
  std::mt19937_64 rng(23);
  const std::vector<Rational> consts = {Rational(3), Rational(5), Rational(7)};
  int seen = 0;
  for (int i = 0; i < 3000 && seen < 100; i++) {
    ACSet acs = random_acset(rng, 3, /*require_consistent=*/true);
    std::vector<Comparison> rhs;
    int m = 2 + (int)(rng() % 2);
    for (int k = 0; k < m; k++)
      rhs.push_back(Comparison::make(Term::variable("X" + std::to_string(1 + rng() % 4)), "<=",
                                     Term::constant(consts[rng() % consts.size()])));
    if (!implication_holds(acs, rhs)) continue;
    seen++;
    auto mf = minimal_form(acs, rhs);
    CAPTURE(i);
    CHECK(mf.size() == 1);
  }
  CHECK(seen >= 50);
}

TEST_CASE("closed-SI disjunctions reduce to at most two disjuncts") {
  std::mt19937_64 rng(29);
  const std::vector<Rational> consts = {Rational(3), Rational(5), Rational(7)};
  int seen = 0;
  for (int i = 0; i < 3000 && seen < 100; i++) {
    ACSet acs = random_acset(rng, 3, /*require_consistent=*/true);
    std::vector<Comparison> rhs;
    int m = 2 + (int)(rng() % 3);
    for (int k = 0; k < m; k++) {
      std::string op = (rng() % 2) ? "<=" : ">=";
      rhs.push_back(Comparison::make(Term::variable("X" + std::to_string(1 + rng() % 4)), op,
                                     Term::constant(consts[rng() % consts.size()])));
    }
    if (!implication_holds(acs, rhs)) continue;
    seen++;
    auto mf = minimal_form(acs, rhs);
    CAPTURE(i);
    CHECK(mf.size() <= 2);
  }
  CHECK(seen >= 50);
}

TEST_CASE("minimal_form result still implies and is minimal") {
  std::mt19937_64 rng(31);
  const std::vector<Rational> consts = {Rational(3), Rational(5), Rational(7)};
  for (int i = 0; i < 500; i++) {
    ACSet acs = random_acset(rng, 3, /*require_consistent=*/true);
    std::vector<Comparison> rhs;
    int m = 1 + (int)(rng() % 4);
    for (int k = 0; k < m; k++) {
      Term a = rand_term(rng, 4, consts);
      Term b = Term::variable("X" + std::to_string(1 + rng() % 4));
      rhs.push_back(Comparison::make(a, kOps[rng() % kOps.size()], b));
    }
    if (!implication_holds(acs, rhs)) continue;
    auto mf = minimal_form(acs, rhs);
    CHECK(implication_holds(acs, mf));
    for (size_t drop = 0; drop < mf.size(); drop++) {
      std::vector<Comparison> smaller;
      for (size_t k = 0; k < mf.size(); k++)
        if (k != drop) smaller.push_back(mf[k]);
      CHECK(!implication_holds(acs, smaller));
    }
  }
}
