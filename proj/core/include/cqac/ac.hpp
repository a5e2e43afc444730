#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqac/term.hpp"

namespace cqac {

// Canonical comparison operators.  >= and > are normalized away at
// construction time by swapping sides; the original orientation is kept for
// printing.
enum class CompOp { LT, LE, EQ, NEQ };

enum class ACType {
  VAR_LT_VAR,
  VAR_LE_VAR,
  VAR_LT_CONST,   // X < c   (open left semi-interval)
  VAR_LE_CONST,   // X <= c  (closed left semi-interval)
  CONST_LT_VAR,   // c < X   (open right semi-interval)
  CONST_LE_VAR,   // c <= X  (closed right semi-interval)
  VAR_EQ_VAR,
  VAR_EQ_CONST,
  VAR_NEQ_VAR,
  VAR_NEQ_CONST,
};

// Semi-interval classification.
enum class SILabel { NONE, CLSI, OLSI, CRSI, ORSI };

struct Comparison {
  Term lhs;
  CompOp op = CompOp::LE;
  Term rhs;
  bool display_flipped = false;  // true when originally written with >/>= or
                                 // with sides in the non-canonical order

  // Builds a canonical comparison.  `op_token` is one of "<", "<=", "=",
  // "!=", ">=", ">".  At least one side must be a variable; fold
  // constant-constant comparisons before calling (see fold_constants).
  static Comparison make(Term lhs, const std::string& op_token, Term rhs);
  static Comparison make(Term lhs, CompOp op, Term rhs, bool flip_display = false);

  Comparison complement() const;  // negation: e.g. not(X<Y) == Y<=X
  std::string str() const;        // original orientation

  friend bool operator==(const Comparison& a, const Comparison& b) {
    return a.op == b.op && a.lhs == b.lhs && a.rhs == b.rhs;
  }
  friend bool operator<(const Comparison& a, const Comparison& b) {
    if (!(a.lhs == b.lhs)) return a.lhs < b.lhs;
    if (a.op != b.op) return (int)a.op < (int)b.op;
    return a.rhs < b.rhs;
  }
};

ACType classify_ac(const Comparison& c);
SILabel si_label(const Comparison& c);

// Semi-interval view of a var/const comparison: X (< | <= | > | >=) c.
struct SI {
  std::string var;
  bool upper = false;   // true: X <= c or X < c; false: X >= c or X > c
  bool strict = false;
  Rational c;

  bool implies(const SI& other) const;  // same var assumed; dense order
  std::string pred_suffix() const;      // e.g. "le_5", "gt_7_2"
};
std::optional<SI> si_of(const Comparison& c);
Comparison si_to_comparison(const SI& s);

// Evaluates a comparison whose two sides are both constants.
bool eval_const_comparison(const Rational& a, const std::string& op_token, const Rational& b);

// A conjunction of ACs together with the variable universe it constrains and
// the set of constants considered relevant when closing it.
struct ACSet {
  std::vector<Comparison> comparisons;      // deduplicated, insertion order
  std::set<std::string> universe;           // variables (superset of those used)
  std::set<Rational> relevant_constants;    // seeds c < c' facts in the closure
  bool false_fold = false;                  // a const-const AC folded to false

  void add(const Comparison& c);
  // Adds lhs op rhs, folding const-const comparisons; returns false when the
  // fold was false (the set is then marked inconsistent).
  bool add_term(const Term& lhs, const std::string& op_token, const Term& rhs);
  void add_all(const std::vector<Comparison>& cs);
  void note_constant(const Rational& c) { relevant_constants.insert(c); }
  bool contains(const Comparison& c) const;
};

enum class ClosureMode {
  DEPTH_ONE_RULE8,   // the no-two-elements-between rule fires only on
                     // inequations not themselves produced by it
  FULL_RULE8,
};

struct ACClosure {
  ACSet base;
  bool consistent = true;
  std::vector<Comparison> derived;          // fixpoint, canonical forms
  std::string contradiction_chain;          // human-readable witness when inconsistent

  bool contains(const Comparison& c) const;

private:
  friend ACClosure closure(const ACSet&, ClosureMode);
  std::set<Comparison> derived_set_;
};

ACClosure closure(const ACSet& acs, ClosureMode mode = ClosureMode::DEPTH_ONE_RULE8);

bool is_consistent(const ACSet& acs, ClosureMode mode = ClosureMode::DEPTH_ONE_RULE8);

// True iff acs entails target (by membership in the closure over the union of
// both constant sets).  Throws std::invalid_argument when acs is inconsistent.
bool implies(const ACSet& acs, const Comparison& target,
             ClosureMode mode = ClosureMode::DEPTH_ONE_RULE8);

// True iff lhs => d1 or d2 or ... (decided by conjoining all complements and
// testing inconsistency).  An inconsistent lhs makes this vacuously true; an
// empty disjunction holds only for an inconsistent lhs.
bool implication_holds(const ACSet& lhs, const std::vector<Comparison>& disjuncts,
                       ClosureMode mode = ClosureMode::DEPTH_ONE_RULE8);

// Minimal sub-disjunction that still holds; greedy elimination keeping
// earlier disjuncts.  Throws std::invalid_argument when the full implication
// does not hold.
std::vector<Comparison> minimal_form(const ACSet& lhs, const std::vector<Comparison>& disjuncts,
                                     ClosureMode mode = ClosureMode::DEPTH_ONE_RULE8);

std::string comp_op_token(CompOp op);

}  // namespace cqac
