#pragma once

#include "cqac/datalog.hpp"
#include "cqac/errors.hpp"
#include "cqac/query.hpp"

namespace cqac {

// Requires every AC of q (after equality merging) to be a semi-interval with
// at most one lower bound (RSI); with closed_only, also non-strict.  Throws
// FragmentError naming the offending AC.
void require_rsi1(const CQACQuery& q, bool closed_only);

struct TransformOptions {
  bool use_u_tr = false;       // second-kind coupling joins through the u_tr IDB
  bool extended_links = false; // link rules with an extra u_tr hop (needs use_u_tr)
};

// The Datalog image of a Boolean RSI1 query: one query rule, one mapping rule
// per SI AC, four coupling rules per valid (lower, upper) constant pair, and
// one link rule per (relevant SI, implied q1 AC) pair.  The comparison
// predicates u / u_<op>_<c> are declared builtin.
DatalogProgram to_datalog(const CQACQuery& q1, const std::vector<SI>& relevant_sis,
                          const TransformOptions& opts = {});

// The CQ image of a CQAC: its relational subgoals plus u_<op>_<c>(X) for each
// SI in the closure of its ACs and u(X,Y) for each var-var X<=Y / X<Y there.
// Equalities are merged first; != content is dropped.
CQACQuery to_cq(const CQACQuery& q2);

// The SIs occurring in the closure of q2's ACs (deduplicated, ordered).
std::vector<SI> relevant_sis_of(const CQACQuery& q2);

// Decides q2 <= q1 by testing to_cq(q2) against to_datalog(q1).  q1 must be
// RSI1 with closed ACs (non-Boolean pairs are handled by conjoining a fresh
// head-capture subgoal to both queries).
bool containment_via_transform(const CQACQuery& q1, const CQACQuery& q2);

}  // namespace cqac
