#pragma once

#include "cqac/containment.hpp"
#include "cqac/datalog.hpp"
#include "cqac/transform.hpp"

namespace cqac {

// The CQ images of the views (same head predicates, u-atoms for ACs).
std::vector<ViewDefinition> build_cq_views(const std::vector<ViewDefinition>& views);

// Standard inverse rules: one rule per relational body atom of each view,
// nondistinguished variables replaced by functional terms f_<view>_<var> over
// the view's head arguments.
std::vector<DatalogRule> inverse_rules(const std::vector<ViewDefinition>& cq_views);

struct MCRProgram {
  DatalogProgram program;               // EDBs are the view predicates
  std::vector<ViewDefinition> cq_views; // CQ images used in the construction
};

// Algorithm MCR-RSI1: maximally contained rewriting of a closed-AC RSI1 query
// over CQAC views, as a recursive program with comparison builtins.  For
// non-Boolean queries, no AC may use a head variable (see mcr_rsi1_plus).
MCRProgram mcr_rsi1(const CQACQuery& q, const std::vector<ViewDefinition>& views);

// Algorithm MCR-RSI1+: ACs over head variables are stripped, the core MCR is
// built, and a final rule restores them as builtin subgoals.
MCRProgram mcr_rsi1_plus(const CQACQuery& q, const std::vector<ViewDefinition>& views);

// True iff r's view-expansion is contained in q.
bool check_contained_rewriting(const CQACQuery& r, const CQACQuery& q,
                               const std::vector<ViewDefinition>& views);

// True iff the (rectified) rewriting is contained in the MCR program, decided
// on the canonical database of its CQ image over the CQ views.
bool contained_in_mcr(const MCRProgram& mcr, const CQACQuery& r,
                      const std::vector<ViewDefinition>& views);

// Evaluates the MCR program on a view instance.
std::set<std::vector<Rational>> certain_answers(const MCRProgram& mcr, const ViewInstance& inst);

struct CertainAnswersResult {
  bool defined = true;  // false when no database realizes the instance
  std::set<std::vector<Rational>> answers;
};

// Brute force: freezes the instance into a query, expands it through the
// views, and intersects q's answers over the canonical databases of the
// expansion; tuples using values outside the instance are dropped.
CertainAnswersResult certain_answers_oracle(const CQACQuery& q,
                                            const std::vector<ViewDefinition>& views,
                                            const ViewInstance& inst, int bound = scale_bound());

}  // namespace cqac
