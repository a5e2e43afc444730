#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqac/errors.hpp"
#include "cqac/query.hpp"

namespace cqac {

// A containment mapping from the (normalized) containing query's variables to
// terms of the (normalized) contained query.
using ContainmentMapping = std::map<std::string, Term>;

struct ContainmentResult {
  bool holds = false;
  std::vector<ContainmentMapping> mappings;   // witness mappings when holds
  std::optional<Database> counterexample;     // canonical db when found
};

// Fragments with dedicated decision procedures, ordered from most to least
// specific; AUTO classification picks the first row that applies.
enum class FragmentClass {
  CQ,               // both queries comparison-free
  ONE_AC,           // containing query: one AC plus equations
  CLSI_HP,          // containing query: closed LSIs (or mirrored: closed RSIs) + equations
  RSI1_CLOSED,      // containing query: closed LSIs + one closed RSI (or mirror)
  LSI_HP_COND,      // containing query: LSIs with open ones, side conditions hold
  RSI1_MIXED_COND,  // LSIs + one RSI with open ones, side conditions hold
  GENERAL,
};

enum class Strategy { AUTO, ENTAILMENT, CANONICAL, HP, ONE_AC, RSI1 };

// All containment mappings between the normalized queries, in lexicographic
// order of target subgoal choices.  Throws when head arities differ.
std::vector<ContainmentMapping> enumerate_mappings(const CQACQuery& q1, const CQACQuery& q2);

// Decides q2 <= q1 via the containment entailment
//   beta2' => mu1(beta1') or ... or muk(beta1')
// distributed into containment implications.
ContainmentResult entailment_check(const CQACQuery& q1, const CQACQuery& q2);

// Canonical databases of q2 with respect to q1: all block partitions of
// vars(q2) plus the relevant constants (no two constants together), all block
// orders consistent with the constant order, instantiated with midpoints/0/±1
// interpolation; only instantiations whose generating assignment satisfies
// beta2 are kept.  Throws ScaleError past `bound` elements.
std::vector<Database> canonical_databases(const CQACQuery& q2, const CQACQuery& q1,
                                          int bound = scale_bound());
// Streaming variant; stops early when the callback returns false.
void for_each_canonical_database(
    const CQACQuery& q2, const CQACQuery& q1, int bound,
    const std::function<bool(const Database&, const std::map<std::string, Rational>&)>& fn);

// Brute-force oracle: q2 <= q1 iff evaluate(q2,D) is a subset of
// evaluate(q1,D) on every canonical database D.
ContainmentResult canonical_oracle_check(const CQACQuery& q1, const CQACQuery& q2,
                                         int bound = scale_bound());

// Variables of normalized q1 mapped identically by every containment mapping
// (always includes head variables); nullopt when there is no mapping.
std::optional<std::set<std::string>> single_mapping_vars(const CQACQuery& q1,
                                                         const CQACQuery& q2);

// Split of the containment test on single mapping variables:
//   q2 <= q1  iff  head_ok and q2 <= reduced_q1.
struct Reduction {
  bool applicable = false;      // false when there is no containment mapping
  bool head_ok = false;         // beta2 implies mu1(beta11) conjunct-by-conjunct
  ContainmentMapping mu1;
  std::vector<Comparison> beta11;  // ACs over single mapping variables
  CQACQuery reduced_q1;            // relational part plus remaining ACs
};
Reduction reduce_by_single_mapping(const CQACQuery& q1, const CQACQuery& q2);

FragmentClass classify_fragment(const CQACQuery& q1, const CQACQuery& q2);
std::string fragment_name(FragmentClass f);
std::string strategy_name(Strategy s);

// Fragment-specific fast procedures; explicit strategies throw FragmentError
// when the pair lies outside the fragment.
ContainmentResult fast_contains(const CQACQuery& q1, const CQACQuery& q2,
                                Strategy strategy = Strategy::AUTO);

}  // namespace cqac
