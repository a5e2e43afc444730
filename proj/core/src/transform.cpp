#include "cqac/transform.hpp"

#include <algorithm>

namespace cqac {

namespace {

DTerm to_dterm(const Term& t) {
  return t.is_var ? DTerm::variable(t.var) : DTerm::constant(t.val);
}

DAtom to_datom(const Atom& a) {
  DAtom d{a.pred, {}};
  for (const auto& t : a.args) d.args.push_back(to_dterm(t));
  return d;
}

// Validity of (X <= Y) => X theta_u c_u or Y theta_l c_l, which coincides
// with the validity of the pairless disjunction itself.
bool coupling_pair_ok(const SI& lower, const SI& upper) {
  if (lower.c < upper.c) return true;
  return lower.c == upper.c && !(lower.strict && upper.strict);
}

}  // namespace

void require_rsi1(const CQACQuery& q, bool closed_only) {
  CQACQuery m = merge_equalities(q);
  int lower_bounds = 0;
  for (const auto& c : m.acs.comparisons) {
    auto si = si_of(c);
    if (!si)
      throw FragmentError("not an RSI1 query: comparison " + c.str() + " is not a semi-interval");
    if (closed_only && si->strict)
      throw FragmentError("not a closed-AC query: comparison " + c.str() + " is strict");
    if (!si->upper && ++lower_bounds > 1)
      throw FragmentError("not an RSI1 query: second lower bound " + c.str());
  }
}

DatalogProgram to_datalog(const CQACQuery& q1, const std::vector<SI>& relevant_sis,
                          const TransformOptions& opts) {
  CQACQuery q = merge_equalities(q1);
  if (!q.is_boolean()) {
    // Head tuples pass through the query rule untouched; the I/J machinery
    // must not involve them.
    std::set<std::string> hv = q.head_variables();
    for (const auto& c : q.acs.comparisons)
      for (const auto* t : {&c.lhs, &c.rhs})
        if (t->is_var && hv.count(t->var))
          throw FragmentError("comparison " + c.str() + " uses head variable " + t->var);
  }
  require_rsi1(q, false);

  DatalogProgram p;
  p.query_pred = q.head.pred + "_datalog";
  p.query_arity = (int)q.head.args.size();
  p.idb[p.query_pred] = p.query_arity;
  for (const auto& sg : q.subgoals) p.edb[sg.pred] = (int)sg.args.size();

  // The SI view of each AC, in declaration order.
  std::vector<SI> acs;
  for (const auto& c : q.acs.comparisons) acs.push_back(*si_of(c));
  for (const auto& si : acs) {
    p.idb["i_" + si.pred_suffix()] = 1;
    p.idb["j_" + si.pred_suffix()] = 1;
  }
  p.builtin["u"] = 2;
  if (opts.use_u_tr) p.idb["u_tr"] = 2;
  const std::string ju = opts.use_u_tr ? "u_tr" : "u";

  DatalogRule query_rule;
  query_rule.tag = "query";
  query_rule.head = {p.query_pred, {}};
  for (const auto& t : q.head.args) query_rule.head.args.push_back(to_dterm(t));
  for (const auto& sg : q.subgoals) query_rule.body.push_back(to_datom(sg));
  for (const auto& si : acs)
    query_rule.body.push_back({"i_" + si.pred_suffix(), {DTerm::variable(si.var)}});
  p.rules.push_back(query_rule);

  for (size_t k = 0; k < acs.size(); k++) {
    DatalogRule r;
    r.tag = "mapping";
    r.head = {"j_" + acs[k].pred_suffix(), {DTerm::variable(acs[k].var)}};
    for (size_t i = 0; i < query_rule.body.size(); i++)
      if (i != q.subgoals.size() + k) r.body.push_back(query_rule.body[i]);
    p.rules.push_back(std::move(r));
  }

  // Coupling rules per (lower-bound constant, upper-bound constant) pair.
  auto seen_pair = [&](std::vector<std::pair<std::string, std::string>>& v, const SI& a,
                       const SI& b) {
    auto key = std::make_pair(a.pred_suffix(), b.pred_suffix());
    if (std::find(v.begin(), v.end(), key) != v.end()) return true;
    v.push_back(key);
    return false;
  };
  std::vector<std::pair<std::string, std::string>> pairs;
  DTerm X = DTerm::variable("X"), Y = DTerm::variable("Y");
  for (const auto& lo : acs) {
    if (lo.upper) continue;
    for (const auto& up : acs) {
      if (!up.upper || !coupling_pair_ok(lo, up) || seen_pair(pairs, lo, up)) continue;
      std::string il = "i_" + lo.pred_suffix(), iu = "i_" + up.pred_suffix();
      std::string jl = "j_" + lo.pred_suffix(), ju2 = "j_" + up.pred_suffix();
      p.rules.push_back({{iu, {X}}, {{jl, {X}}}, "coupling"});
      p.rules.push_back({{il, {X}}, {{ju2, {X}}}, "coupling"});
      p.rules.push_back({{iu, {X}}, {{jl, {Y}}, {ju, {X, Y}}}, "coupling"});
      p.rules.push_back({{il, {X}}, {{ju2, {Y}}, {ju, {Y, X}}}, "coupling"});
    }
  }

  // Link rules (with an optional u_tr hop) from the relevant SIs.
  std::vector<std::pair<std::string, std::string>> links;
  for (const auto& rs : relevant_sis) {
    for (const auto& si : acs) {
      if (rs.upper != si.upper || !rs.implies(si)) continue;
      std::string up = "u_" + rs.pred_suffix(), ip = "i_" + si.pred_suffix();
      if (std::find(links.begin(), links.end(), std::make_pair(up, ip)) != links.end()) continue;
      links.emplace_back(up, ip);
      p.builtin[up] = 1;
      p.rules.push_back({{ip, {X}}, {{up, {X}}}, "link"});
      if (opts.extended_links) {
        if (si.upper)
          p.rules.push_back({{ip, {X}}, {{up, {Y}}, {"u_tr", {X, Y}}}, "extlink"});
        else
          p.rules.push_back({{ip, {X}}, {{up, {Y}}, {"u_tr", {Y, X}}}, "extlink"});
      }
    }
  }

  if (opts.use_u_tr) {
    DTerm Z = DTerm::variable("Z");
    p.rules.push_back({{"u_tr", {X, Y}}, {{"u", {X, Y}}}, "tc"});
    p.rules.push_back({{"u_tr", {X, Y}}, {{"u", {X, Z}}, {"u_tr", {Z, Y}}}, "tc"});
  }
  p.check_valid();
  return p;
}

std::vector<SI> relevant_sis_of(const CQACQuery& q2) {
  CQACQuery q = merge_equalities(q2);
  ACClosure cl = closure(q.acs);
  if (!cl.consistent) throw std::invalid_argument("inconsistent comparisons in " + q2.str());
  std::vector<SI> out;
  auto add = [&](const Comparison& c) {
    if (auto si = si_of(c)) {
      for (const auto& s : out)
        if (s.var == si->var && s.upper == si->upper && s.strict == si->strict && s.c == si->c)
          return;
      out.push_back(*si);
    }
  };
  for (const auto& c : q.acs.comparisons) add(c);
  for (const auto& c : cl.derived) add(c);
  // A constant pinned in a relational subgoal acts as its own closed SI pair
  // {>= c, <= c}; record them var-less so link rules can pick them up.
  auto add_const = [&](const Rational& v, bool upper) {
    for (const auto& s : out)
      if (s.var.empty() && s.upper == upper && !s.strict && s.c == v) return;
    out.push_back(SI{"", upper, false, v});
  };
  for (const auto& sg : q.subgoals)
    for (const auto& t : sg.args)
      if (!t.is_var) {
        add_const(t.val, false);
        add_const(t.val, true);
      }
  return out;
}

CQACQuery to_cq(const CQACQuery& q2) {
  CQACQuery q = merge_equalities(q2);
  ACClosure cl = closure(q.acs);
  if (!cl.consistent) throw std::invalid_argument("inconsistent comparisons in " + q2.str());
  CQACQuery out;
  out.head = q.head;
  out.subgoals = q.subgoals;
  for (const auto& si : relevant_sis_of(q2))
    out.subgoals.push_back({"u_" + si.pred_suffix(),
                            {si.var.empty() ? Term::constant(si.c) : Term::variable(si.var)}});
  std::vector<Comparison> vv;
  auto add_vv = [&](const Comparison& c) {
    if ((c.op != CompOp::LE && c.op != CompOp::LT) || !c.lhs.is_var || !c.rhs.is_var ||
        c.lhs == c.rhs)
      return;
    for (const auto& d : vv)
      if (d.lhs == c.lhs && d.rhs == c.rhs) return;
    vv.push_back(c);
    out.subgoals.push_back({"u", {c.lhs, c.rhs}});
  };
  for (const auto& c : q.acs.comparisons) add_vv(c);
  for (const auto& c : cl.derived) add_vv(c);
  for (const auto& v : out.body_variables()) out.acs.universe.insert(v);
  return out;
}

bool containment_via_transform(const CQACQuery& q1in, const CQACQuery& q2in) {
  if (q1in.head.args.size() != q2in.head.args.size())
    throw std::invalid_argument("head arities differ");
  CQACQuery q1 = q1in, q2 = q2in;
  if (!q1.is_boolean()) {
    // Capture the head tuple in a fresh relational subgoal on both sides.
    q1.subgoals.push_back({"head_capture", q1.head.args});
    q2.subgoals.push_back({"head_capture", q2.head.args});
    q1.head.args.clear();
    q2.head.args.clear();
  }
  CQACQuery m1 = merge_equalities(q1);
  require_rsi1(m1, true);
  if (!is_consistent(q2.acs)) return true;  // empty query is contained in anything
  DatalogProgram prog = to_datalog(m1, relevant_sis_of(q2));
  return contains_cq(prog, to_cq(q2));
}

}  // namespace cqac
