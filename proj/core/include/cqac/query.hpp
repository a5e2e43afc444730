#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqac/ac.hpp"

namespace cqac {

struct Atom {
  std::string pred;
  std::vector<Term> args;

  std::string str() const;
  friend bool operator==(const Atom& a, const Atom& b) {
    return a.pred == b.pred && a.args == b.args;
  }
  friend bool operator<(const Atom& a, const Atom& b);
};

// A conjunctive query with arithmetic comparisons:
//   head(X,...) :- subgoal, ..., comparison, ... .
struct CQACQuery {
  Atom head;
  std::vector<Atom> subgoals;
  ACSet acs;

  std::set<std::string> body_variables() const;
  std::set<std::string> head_variables() const;
  std::set<Rational> constants() const;  // body + AC constants
  bool is_boolean() const { return head.args.empty(); }

  // Safety: every head and AC variable occurs in a relational subgoal.
  // Inconsistent AC sets are allowed (they denote the empty query).
  // Throws std::invalid_argument on violation.
  void check_valid() const;

  std::string str() const;
};

using ViewDefinition = CQACQuery;

// A finite database over rational constants.
struct Database {
  std::map<std::string, std::set<std::vector<Rational>>> relations;

  void add(const std::string& pred, std::vector<Rational> tuple);
  bool empty() const { return relations.empty(); }
  std::string str() const;
};

// A view instance: names each view relation with its extension.
using ViewInstance = Database;

// Rewrites q so that no variable occurs twice in relational subgoals and no
// constant occurs in them; repeats become fresh variables tied by = ACs
// ("<orig>_n", collision-checked), constants become Z = c equalities.
CQACQuery normalize(const CQACQuery& q);

// Substitutes away equalities entailed by the AC closure: variable classes
// collapse to one representative (or to a constant when a class is pinned),
// and = ACs among merged terms are dropped.  Throws when acs is inconsistent.
CQACQuery merge_equalities(const CQACQuery& q);

// Evaluates q over db; returns the set of head tuples.
std::set<std::vector<Rational>> evaluate(const CQACQuery& q, const Database& db);
bool evaluates_nonempty(const CQACQuery& q, const Database& db);

// Expands a rewriting (a CQAC over view predicates) through the view
// definitions; nondistinguished view variables become fresh variables.
CQACQuery expand(const CQACQuery& rewriting, const std::vector<ViewDefinition>& views);

// The rectified rewriting: r plus every closure AC of its expansion whose
// variables all occur in r.
CQACQuery rectify(const CQACQuery& rewriting, const std::vector<ViewDefinition>& views);

// Applies a variable substitution to terms/atoms/queries.
Term substitute(const Term& t, const std::map<std::string, Term>& sub);
Atom substitute(const Atom& a, const std::map<std::string, Term>& sub);
// Substitutes into a list of ACs; comparisons whose sides both become
// constants are folded (a false fold marks the result inconsistent).
ACSet substitute_acs(const std::vector<Comparison>& acs,
                     const std::map<std::string, Term>& sub);

// A fresh variable name based on `base` avoiding the `used` set; registers
// the result in `used`.
std::string fresh_var(const std::string& base, std::set<std::string>& used);

}  // namespace cqac
