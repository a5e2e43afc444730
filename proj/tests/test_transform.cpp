#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "doctest.h"

#include "cqac/containment.hpp"
#include "cqac/gen.hpp"
#include "cqac/parser.hpp"
#include "cqac/transform.hpp"

using namespace cqac;

namespace {

// Running pair: chain query with one lower and one upper bound against a
// longer chain with tighter bounds.
const char* kQ1 = "q() :- e(X,Y), e(Y,Z), X >= 5, Z <= 8.";
const char* kQ2 = "q() :- e(A,B), e(B,C), e(C,D), e(D,E), A >= 6, E <= 7.";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing golden file: " << path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, int> rules_by_tag(const DatalogProgram& p) {
  std::map<std::string, int> n;
  for (const auto& r : p.rules) n[r.tag]++;
  return n;
}

}  // namespace

TEST_CASE("chain query transformation matches its golden program") {
  DatalogProgram p = to_datalog(parse_query(kQ1), relevant_sis_of(parse_query(kQ2)));
  DatalogProgram golden = parse_datalog(slurp(std::string(TEST_DATA_DIR) +
                                              "/transform_running.dl"));
  CHECK(p.str() == golden.str());
}

TEST_CASE("chain query transformation has the expected rule inventory") {
  DatalogProgram p = to_datalog(parse_query(kQ1), relevant_sis_of(parse_query(kQ2)));
  auto tags = rules_by_tag(p);
  CHECK(tags["query"] == 1);
  CHECK(tags["mapping"] == 2);   // one per semi-interval of the query
  CHECK(tags["coupling"] == 4);  // one valid (lower, upper) constant pair
  CHECK(tags["link"] == 2);      // ge_6 -> ge_5 and le_7 -> le_8
  CHECK(p.rules.size() == 9);
  CHECK(p.idb.count("i_ge_5"));
  CHECK(p.idb.count("i_le_8"));
  CHECK(p.idb.count("j_ge_5"));
  CHECK(p.idb.count("j_le_8"));
  CHECK(p.builtin.count("u"));
  CHECK(p.builtin.count("u_ge_6"));
  CHECK(p.builtin.count("u_le_7"));
  // Link rules fire only when the relevant comparison implies the query's.
  for (const auto& r : p.rules) {
    if (r.tag != "link") continue;
    auto head_si = si_from_builtin_pred("u" + r.head.pred.substr(1));
    auto body_si = si_from_builtin_pred(r.body[0].pred);
    REQUIRE(head_si);
    REQUIRE(body_si);
    CHECK(body_si->implies(*head_si));
  }
}

TEST_CASE("contained query's CQ image matches its golden") {
  CQACQuery cq = to_cq(parse_query(kQ2));
  std::string golden = slurp(std::string(TEST_DATA_DIR) + "/contained_cq_running.cq");
  while (!golden.empty() && (golden.back() == '\n' || golden.back() == ' ')) golden.pop_back();
  CHECK(cq.str() == golden);
  // Exactly the two semi-interval atoms, over the query's own constants.
  int u_atoms = 0;
  for (const auto& sg : cq.subgoals)
    if (is_builtin_pred_name(sg.pred)) u_atoms++;
  CHECK(u_atoms == 2);
}

TEST_CASE("the transformed pair decides the running containment") {
  CQACQuery q1 = parse_query(kQ1), q2 = parse_query(kQ2);
  DatalogProgram p = to_datalog(q1, relevant_sis_of(q2));
  CHECK(contains_cq(p, to_cq(q2)));
  CHECK(containment_via_transform(q1, q2));
  // Loosening the contained query's bound below the threshold flips it.
  CQACQuery q2loose = parse_query("q() :- e(A,B), e(B,C), A >= 4, C <= 7.");
  CHECK(!containment_via_transform(q1, q2loose));
  CHECK(!entailment_check(q1, q2loose).holds);
}

TEST_CASE("rule counts follow the construction law") {
  std::mt19937_64 rng(404);
  GenOptions opt;
  opt.rsi1_closed = true;
  for (int i = 0; i < 50; i++) {
    CQACQuery q1 = random_query(rng, opt);
    CQACQuery q2 = random_query(rng, opt);
    CQACQuery m1 = merge_equalities(q1);
    std::vector<SI> rel = relevant_sis_of(q2);
    DatalogProgram p;
    try {
      p = to_datalog(m1, rel);
    } catch (const FragmentError&) {
      continue;
    }
    auto tags = rules_by_tag(p);
    std::vector<SI> q1sis;
    for (const auto& c : m1.acs.comparisons)
      if (auto s = si_of(c)) q1sis.push_back(*s);
    CHECK(tags["query"] == 1);
    CHECK(tags["mapping"] == (int)q1sis.size());
    CHECK(tags["coupling"] % 4 == 0);
    int links = 0;
    for (const auto& rs : rel)
      for (const auto& s : q1sis)
        if (rs.upper == s.upper && rs.implies(s)) links++;
    CHECK(tags["link"] <= links);  // deduplication may drop repeats
  }
}

TEST_CASE("fragment guard rejects non-RSI1 queries") {
  CHECK_THROWS_AS(require_rsi1(parse_query("q() :- e(X,Y), X >= 3, Y >= 5."), true),
                  FragmentError);
  CHECK_THROWS_AS(require_rsi1(parse_query("q() :- e(X,Y), X > 3."), true), FragmentError);
  CHECK_NOTHROW(require_rsi1(parse_query("q() :- e(X,Y), X >= 3, Y <= 5, X <= 9."), true));
  CHECK_THROWS_AS(require_rsi1(parse_query("q() :- e(X,Y), X <= Y."), true), FragmentError);
}

TEST_CASE("transformation handles constants pinned in the contained query") {
  CQACQuery q1 = parse_query("q() :- e(X), X >= 5.");
  CQACQuery q2 = parse_query("q() :- e(5).");
  CQACQuery q3 = parse_query("q() :- e(4).");
  CHECK(containment_via_transform(q1, q2));
  CHECK(!containment_via_transform(q1, q3));
  CHECK(entailment_check(q1, q2).holds);
  CHECK(!entailment_check(q1, q3).holds);
}

TEST_CASE("transformation decides non-Boolean pairs through head capture") {
  CQACQuery q1 = parse_query("q(X) :- e(X,Y), Y <= 5.");
  CQACQuery q2 = parse_query("q(X) :- e(X,Y), Y <= 3.");
  CHECK(containment_via_transform(q1, q2));
  CHECK(!containment_via_transform(q2, q1));
}

TEST_CASE("transformation agrees with entailment on a closed-RSI1 corpus") {
  std::mt19937_64 rng(405);
  GenOptions opt;
  opt.rsi1_closed = true;
  GenOptions any;
  int checked = 0;
  while (checked < 80) {
    auto [q1, q2] = random_pair(rng, opt, any);
    bool ent = entailment_check(q1, q2).holds;
    bool tr;
    try {
      tr = containment_via_transform(q1, q2);
    } catch (const FragmentError&) {
      continue;
    }
    checked++;
    CAPTURE(q1.str());
    CAPTURE(q2.str());
    CHECK(tr == ent);
  }
}

TEST_CASE("an inconsistent contained query is contained in anything") {
  CQACQuery q1 = parse_query("q() :- e(X,Y), X >= 5.");
  CQACQuery q2 = parse_query("q() :- e(X,Y), X < 3, X > 4.");
  CHECK(containment_via_transform(q1, q2));
  CHECK(entailment_check(q1, q2).holds);
}
