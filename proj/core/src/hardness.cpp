#include "cqac/hardness.hpp"

#include <functional>
#include <map>
#include <stdexcept>

#include "cqac/parser.hpp"

namespace cqac {

namespace {

Pi2Formula::Node parse_body(Lexer& lx) {
  if (lx.peek().kind == Token::IDENT) {
    Pi2Formula::Node n;
    n.kind = Pi2Formula::Node::VAR;
    n.var = lx.next().text;
    return n;
  }
  lx.expect_punct("(");
  std::string op = lx.expect(Token::IDENT, "'and', 'or' or 'not'").text;
  Pi2Formula::Node n;
  if (op == "not") {
    n.kind = Pi2Formula::Node::NOT;
    n.kids.push_back(parse_body(lx));
  } else if (op == "and" || op == "or") {
    n.kind = op == "and" ? Pi2Formula::Node::AND : Pi2Formula::Node::OR;
    n.kids.push_back(parse_body(lx));
    n.kids.push_back(parse_body(lx));
    // n-ary connectives fold to the left
    while (!(lx.peek().kind == Token::PUNCT && lx.peek().text == ")")) {
      Pi2Formula::Node wide;
      wide.kind = n.kind;
      wide.kids.push_back(std::move(n));
      wide.kids.push_back(parse_body(lx));
      n = std::move(wide);
    }
  } else {
    lx.fail("expected 'and', 'or' or 'not'");
  }
  lx.expect_punct(")");
  return n;
}

std::vector<std::string> parse_var_list(Lexer& lx) {
  std::vector<std::string> vs;
  lx.expect_punct("(");
  while (lx.peek().kind == Token::IDENT) vs.push_back(lx.next().text);
  lx.expect_punct(")");
  return vs;
}

bool eval_node(const Pi2Formula::Node& n, const std::map<std::string, bool>& env) {
  switch (n.kind) {
    case Pi2Formula::Node::VAR: {
      auto it = env.find(n.var);
      if (it == env.end()) throw std::invalid_argument("unbound formula variable " + n.var);
      return it->second;
    }
    case Pi2Formula::Node::NOT: return !eval_node(n.kids[0], env);
    case Pi2Formula::Node::AND: return eval_node(n.kids[0], env) && eval_node(n.kids[1], env);
    case Pi2Formula::Node::OR: return eval_node(n.kids[0], env) || eval_node(n.kids[1], env);
  }
  return false;
}

}  // namespace

Pi2Formula parse_pi2_formula(const std::string& text) {
  Lexer lx(text);
  Pi2Formula f;
  lx.expect_punct("(");
  if (lx.expect(Token::IDENT, "'forall'").text != "forall") lx.fail("expected 'forall'");
  f.universals = parse_var_list(lx);
  lx.expect_punct("(");
  if (lx.expect(Token::IDENT, "'exists'").text != "exists") lx.fail("expected 'exists'");
  f.existentials = parse_var_list(lx);
  f.body = parse_body(lx);
  lx.expect_punct(")");
  lx.expect_punct(")");
  if (lx.peek().kind != Token::END) lx.fail("trailing input after formula");
  return f;
}

bool eval_pi2sat(const Pi2Formula& f) {
  size_t n = f.universals.size(), m = f.existentials.size();
  for (size_t u = 0; u < (size_t{1} << n); u++) {
    std::map<std::string, bool> env;
    for (size_t i = 0; i < n; i++) env[f.universals[i]] = (u >> i) & 1;
    bool found = false;
    for (size_t e = 0; e < (size_t{1} << m) && !found; e++) {
      for (size_t j = 0; j < m; j++) env[f.existentials[j]] = (e >> j) & 1;
      found = eval_node(f.body, env);
    }
    if (!found) return false;
  }
  return true;
}

GadgetVariant gadget_variant_from_name(const std::string& name) {
  if (name == "osi-neq") return GadgetVariant::OSI_NEQ;
  if (name == "olsi-const") return GadgetVariant::OLSI_CONST;
  if (name == "olsi-clsi-neq") return GadgetVariant::OLSI_CLSI_NEQ;
  if (name == "neq-only") return GadgetVariant::NEQ_ONLY;
  throw std::invalid_argument("unknown gadget variant: " + name +
                              " (expected osi-neq|olsi-const|olsi-clsi-neq|neq-only)");
}

std::string gadget_variant_name(GadgetVariant v) {
  switch (v) {
    case GadgetVariant::OSI_NEQ: return "osi-neq";
    case GadgetVariant::OLSI_CONST: return "olsi-const";
    case GadgetVariant::OLSI_CLSI_NEQ: return "olsi-clsi-neq";
    case GadgetVariant::NEQ_ONLY: return "neq-only";
  }
  return "?";
}

ReductionPair reduce_pi2sat(const Pi2Formula& f, GadgetVariant v) {
  // Truth values are the rational constants e=1, f=0.
  const Term e = Term::constant(Rational(1));
  const Term fa = Term::constant(Rational(0));
  ReductionPair rp;
  rp.q1.head = {"q", {}};
  rp.q2.head = {"q", {}};

  // q2: ground subgoals encoding the Boolean operations.
  for (auto& t : std::vector<std::vector<Term>>{
           {e, e, e}, {e, fa, fa}, {fa, e, fa}, {fa, fa, fa}})
    rp.q2.subgoals.push_back({"a", t});
  for (auto& t : std::vector<std::vector<Term>>{
           {e, e, e}, {e, fa, e}, {fa, e, e}, {fa, fa, fa}})
    rp.q2.subgoals.push_back({"o", t});
  rp.q2.subgoals.push_back({"n", {e, fa}});
  rp.q2.subgoals.push_back({"n", {fa, e}});
  rp.q2.subgoals.push_back({"t", {e}});

  // Per-universal gadgets.
  std::map<std::string, Term> leaf_var;  // formula variable -> q1 tree leaf term
  for (size_t i = 0; i < f.universals.size(); i++) {
    std::string sfx = std::to_string(i + 1);
    std::string ai = "a" + sfx;
    Term Ti = Term::variable("T" + sfx);
    leaf_var[f.universals[i]] = Ti;
    switch (v) {
      case GadgetVariant::OSI_NEQ: {
        Term T1 = Term::variable("T1_" + sfx), T2 = Term::variable("T2_" + sfx);
        rp.q1.subgoals.push_back({ai, {T1, Ti}});
        rp.q1.subgoals.push_back({ai, {T2, Ti}});
        rp.q1.acs.add_term(T1, "<", Term::constant(Rational(7)));
        rp.q1.acs.add_term(Term::constant(Rational(7)), "<", T2);
        Term U = Term::variable("U" + sfx), V = Term::variable("V" + sfx),
             W = Term::variable("W" + sfx);
        rp.q2.subgoals.push_back({ai, {U, e}});
        rp.q2.subgoals.push_back({ai, {V, fa}});
        rp.q2.subgoals.push_back({ai, {W, e}});
        rp.q2.subgoals.push_back({ai, {W, fa}});
        rp.q2.acs.add_term(U, "<", Term::constant(Rational(7)));
        rp.q2.acs.add_term(Term::constant(Rational(7)), "<", V);
        rp.q2.acs.add_term(W, "!=", Term::constant(Rational(7)));
        break;
      }
      case GadgetVariant::OLSI_CONST: {
        Term X1 = Term::variable("X" + sfx);
        rp.q1.subgoals.push_back({ai, {X1, Term::constant(Rational(5)), Ti}});
        rp.q1.acs.add_term(X1, "<", Term::constant(Rational(5)));
        Term X = Term::variable("X2_" + sfx), Y = Term::variable("Y" + sfx);
        rp.q2.subgoals.push_back({ai, {X, Term::constant(Rational(5)), e}});
        rp.q2.subgoals.push_back({ai, {Y, X, fa}});
        rp.q2.acs.add_term(X, "<=", Term::constant(Rational(5)));
        rp.q2.acs.add_term(Y, "<", Term::constant(Rational(5)));
        break;
      }
      case GadgetVariant::OLSI_CLSI_NEQ: {
        Term X1 = Term::variable("X" + sfx);
        rp.q1.subgoals.push_back({ai, {X1, Ti}});
        rp.q1.acs.add_term(X1, "<", Term::constant(Rational(5)));
        Term X = Term::variable("X2_" + sfx), Y = Term::variable("Y" + sfx);
        rp.q2.subgoals.push_back({ai, {X, e}});
        rp.q2.subgoals.push_back({ai, {Y, fa}});
        rp.q2.acs.add_term(X, "<=", Term::constant(Rational(5)));
        rp.q2.acs.add_term(Y, "<=", Term::constant(Rational(5)));
        rp.q2.acs.add_term(X, "!=", Y);
        break;
      }
      case GadgetVariant::NEQ_ONLY: {
        Term X1 = Term::variable("X" + sfx), Y1 = Term::variable("Y1_" + sfx);
        rp.q1.subgoals.push_back({ai, {X1, Y1, Ti}});
        rp.q1.acs.add_term(X1, "!=", Y1);
        Term X = Term::variable("X2_" + sfx), Y = Term::variable("Y" + sfx),
             Z = Term::variable("Z" + sfx);
        rp.q2.subgoals.push_back({ai, {X, Y, e}});
        rp.q2.subgoals.push_back({ai, {Y, Z, fa}});
        rp.q2.acs.add_term(X, "!=", Z);
        break;
      }
    }
  }
  for (size_t j = 0; j < f.existentials.size(); j++)
    leaf_var[f.existentials[j]] = Term::variable("T" + std::to_string(f.universals.size() + j + 1));

  // q1: the formula tree over a/o/n, with t() at the root.
  int fresh = 0;
  std::function<Term(const Pi2Formula::Node&)> build = [&](const Pi2Formula::Node& n) -> Term {
    switch (n.kind) {
      case Pi2Formula::Node::VAR: {
        auto it = leaf_var.find(n.var);
        if (it == leaf_var.end())
          throw std::invalid_argument("formula variable " + n.var + " is not quantified");
        return it->second;
      }
      case Pi2Formula::Node::NOT: {
        Term t1 = build(n.kids[0]);
        Term t = Term::variable("TN" + std::to_string(++fresh));
        rp.q1.subgoals.push_back({"n", {t1, t}});
        return t;
      }
      case Pi2Formula::Node::AND:
      case Pi2Formula::Node::OR: {
        Term t1 = build(n.kids[0]), t2 = build(n.kids[1]);
        Term t = Term::variable("TN" + std::to_string(++fresh));
        rp.q1.subgoals.push_back({n.kind == Pi2Formula::Node::AND ? "a" : "o", {t1, t2, t}});
        return t;
      }
    }
    throw std::logic_error("bad node");
  };
  Term root = build(f.body);
  rp.q1.subgoals.push_back({"t", {root}});

  for (auto* q : {&rp.q1, &rp.q2})
    for (const auto& vv : q->body_variables()) q->acs.universe.insert(vv);
  rp.q1.check_valid();
  rp.q2.check_valid();
  return rp;
}

}  // namespace cqac
