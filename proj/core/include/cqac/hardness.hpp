#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cqac/query.hpp"

namespace cqac {

// A Pi2 quantified Boolean formula: forall p1..pn exists q1..qm [ body ].
struct Pi2Formula {
  struct Node {
    enum Kind { VAR, NOT, AND, OR } kind = VAR;
    std::string var;                  // for VAR
    std::vector<Node> kids;           // 1 for NOT, 2 for AND/OR
  };
  std::vector<std::string> universals;
  std::vector<std::string> existentials;
  Node body;
};

// Parses the prefix s-expression format, e.g.
//   (forall (p1 p2) (exists (q1) (or (not p1) q1)))
Pi2Formula parse_pi2_formula(const std::string& text);

// Exhaustive evaluation: true iff for every universal assignment some
// existential assignment satisfies the body.
bool eval_pi2sat(const Pi2Formula& f);

// Per-universal-variable gadget choices for the containment reduction.
enum class GadgetVariant {
  OSI_NEQ,        // contained: OSI + !=, containing: OSI
  OLSI_CONST,     // contained: LSI, containing: OLSI + constant in subgoals
  OLSI_CLSI_NEQ,  // contained: CLSI + !=, containing: OLSI
  NEQ_ONLY,       // both sides: != only
};
GadgetVariant gadget_variant_from_name(const std::string& name);
std::string gadget_variant_name(GadgetVariant v);

struct ReductionPair {
  CQACQuery q1;  // containing query
  CQACQuery q2;  // contained query
};

// Builds Boolean queries with: f satisfiable iff q2 is contained in q1.
ReductionPair reduce_pi2sat(const Pi2Formula& f, GadgetVariant v = GadgetVariant::OSI_NEQ);

}  // namespace cqac
