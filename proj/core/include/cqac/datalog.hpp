#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqac/query.hpp"

namespace cqac {

// A Datalog term: a variable, a rational constant, an opaque symbolic
// constant, or a functional (Skolem) term.
struct DTerm {
  enum Kind { VAR, CONST, SYM, FUNC } kind = VAR;
  std::string name;         // VAR / SYM name, FUNC functor
  Rational val;             // CONST
  std::vector<DTerm> args;  // FUNC

  static DTerm variable(std::string n);
  static DTerm constant(Rational v);
  static DTerm symbol(std::string n);
  static DTerm func(std::string functor, std::vector<DTerm> as);

  bool is_ground() const;
  bool has_func() const;
  std::string str() const;

  friend bool operator==(const DTerm& a, const DTerm& b);
  friend bool operator!=(const DTerm& a, const DTerm& b) { return !(a == b); }
  friend bool operator<(const DTerm& a, const DTerm& b);
};

struct DAtom {
  std::string pred;
  std::vector<DTerm> args;
  std::string str() const;
  friend bool operator==(const DAtom& a, const DAtom& b) {
    return a.pred == b.pred && a.args == b.args;
  }
};

struct DatalogRule {
  DAtom head;
  std::vector<DAtom> body;
  std::string tag;  // provenance label, e.g. "mapping", "link"; "" if none
  std::string str() const;
};

// The comparison meaning of a builtin predicate name: "u" is binary <=,
// "u_tr" its transitive closure, "u_<op>_<num>" the semi-interval X op num
// (op in le/lt/ge/gt; "m" prefixes a negative numerator, a second numeric
// component is a denominator, e.g. u_gt_7_2 means X > 7/2).
std::optional<SI> si_from_builtin_pred(const std::string& pred);
bool is_builtin_pred_name(const std::string& pred);

struct DatalogProgram {
  std::map<std::string, int> edb;      // pred -> arity
  std::map<std::string, int> idb;
  std::map<std::string, int> builtin;  // comparison predicates (may also be derived)
  std::string query_pred;
  int query_arity = 0;
  std::vector<DatalogRule> rules;
  std::vector<DAtom> facts;            // ground facts given with the program

  int arity_of(const std::string& pred) const;  // -1 if undeclared
  // Declaration consistency, rule safety (head vars bound by a non-builtin
  // body atom or inside a functional head term whose args are bound),
  // builtin names parseable.  Throws std::invalid_argument on violation.
  void check_valid() const;
  std::string str() const;
};

// Text format: '@edb p 2', '@idb q 1', '@builtin u 2', '@query r 0'
// declarations, then rules 'h(X) :- p(X,Y), u(Y,X).' and ground facts
// 'p(1,2).'; '%'/'#' start comments.  Rules may carry a leading
// '@tag name' line.
DatalogProgram parse_datalog(const std::string& text);

using DDatabase = std::map<std::string, std::set<std::vector<DTerm>>>;

DDatabase to_ddatabase(const Database& db);
std::string ddatabase_str(const DDatabase& db);

// Bottom-up fixpoint over input (EDB facts plus any seeded derived facts).
// Builtin atoms are satisfied by stored/derived facts or, when all arguments
// are rational, by their comparison meaning; their computed extensions are
// materialized over the rational constants occurring in the input, the
// program facts and the rules.  Returns all derived facts (IDB and builtin),
// including the input.
DDatabase evaluate_program(const DatalogProgram& p, const DDatabase& input);
// Reference implementation (naive iteration) for differential testing.
DDatabase evaluate_program_naive(const DatalogProgram& p, const DDatabase& input);

// Query answers over a rational database; tuples containing non-rational
// terms (Skolem values) are dropped.
std::set<std::vector<Rational>> query_answers(const DatalogProgram& p, const Database& input);

// All expansions of the query predicate where each atom is unfolded through
// at most `depth` nested rule applications, as CQACQueries over the EDB
// predicates.  Builtin atoms branch:
// converted to the comparison they denote, or unfolded through rules deriving
// them.  Expansions retaining functional terms are dropped; results are
// deduplicated up to variable renaming.
std::vector<CQACQuery> expansions_up_to_depth(const DatalogProgram& p, int depth,
                                              size_t max_expansions = 100000);

// True iff the program derives its (frozen) query fact on the canonical
// database of cq: each variable of cq frozen to an opaque constant, facts
// from cq's relational subgoals (which may include builtin atoms).  cq's ACs
// must be empty or already reflected in builtin atoms.
bool contains_cq(const DatalogProgram& p, const CQACQuery& cq);

}  // namespace cqac
