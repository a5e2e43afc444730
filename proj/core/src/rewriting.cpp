#include "cqac/rewriting.hpp"

#include <algorithm>
#include <cctype>

namespace cqac {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = (char)tolower((unsigned char)c);
  return s;
}

DTerm to_dterm(const Term& t) {
  return t.is_var ? DTerm::variable(t.var) : DTerm::constant(t.val);
}

std::string comparison_builtin(CompOp op) {
  switch (op) {
    case CompOp::LT: return "lt";
    case CompOp::LE: return "le";
    case CompOp::EQ: return "eq";
    case CompOp::NEQ: return "neq";
  }
  return "?";
}

// SI inventory of a view's merged AC closure, by (upper, strict, constant).
std::vector<SI> view_si_inventory(const ViewDefinition& v) { return relevant_sis_of(v); }

// Theorem-style fragment check for the MCR construction: closed RSI1, or one
// of the open/closed mixes under their constant-disjointness constraints.
void check_mcr_fragment(const CQACQuery& q, const std::vector<ViewDefinition>& views) {
  CQACQuery m = merge_equalities(q);
  std::vector<SI> lsis, rsis;
  for (const auto& c : m.acs.comparisons) {
    auto si = si_of(c);
    if (!si) throw FragmentError("comparison " + c.str() + " is not a semi-interval");
    (si->upper ? lsis : rsis).push_back(*si);
  }
  if (rsis.size() > 1) throw FragmentError("more than one right semi-interval comparison");
  bool lsi_open = std::any_of(lsis.begin(), lsis.end(), [](const SI& s) { return s.strict; });
  bool lsi_all_open = std::all_of(lsis.begin(), lsis.end(), [](const SI& s) { return s.strict; });
  bool rsi_open = !rsis.empty() && rsis[0].strict;
  if (!lsi_open && !rsi_open) return;  // closed RSI1

  auto view_shares = [&](bool upper, bool strict_is_closed, const Rational& c) {
    for (const auto& v : views)
      for (const auto& s : view_si_inventory(v))
        if (s.upper == upper && !s.strict && s.c == c) return true;
    return false;
  };
  if (!lsi_open && rsi_open) {
    // open RSI: its constant must not appear in a closed RSI of any view
    if (view_shares(false, true, rsis[0].c))
      throw FragmentError("open RSI constant shared with a closed RSI in a view");
    return;
  }
  if (lsi_all_open && !rsi_open) {
    std::set<Rational> cs;
    for (const auto& s : lsis) {
      if (!cs.insert(s.c).second) throw FragmentError("open LSI constants are not distinct");
      if (view_shares(true, true, s.c))
        throw FragmentError("open LSI constant shared with a closed LSI in a view");
    }
    return;
  }
  if (lsi_all_open && rsi_open) {
    std::set<Rational> cs;
    for (const auto& s : lsis) cs.insert(s.c);
    for (const auto& s : rsis) cs.insert(s.c);
    if (cs.size() != lsis.size() + rsis.size())
      throw FragmentError("open SI constants are not distinct");
    for (const auto& s : lsis)
      if (view_shares(true, true, s.c) || view_shares(false, true, s.c))
        throw FragmentError("open SI constant shared with a closed SI in a view");
    for (const auto& s : rsis)
      if (view_shares(true, true, s.c) || view_shares(false, true, s.c))
        throw FragmentError("open SI constant shared with a closed SI in a view");
    return;
  }
  throw FragmentError("mixed open and closed left semi-intervals are not supported");
}

}  // namespace

std::vector<ViewDefinition> build_cq_views(const std::vector<ViewDefinition>& views) {
  std::vector<ViewDefinition> out;
  for (const auto& v : views) out.push_back(to_cq(v));
  return out;
}

std::vector<DatalogRule> inverse_rules(const std::vector<ViewDefinition>& cq_views) {
  std::vector<DatalogRule> out;
  for (const auto& v : cq_views) {
    std::set<std::string> hv = v.head_variables();
    DAtom view_atom{v.head.pred, {}};
    std::vector<DTerm> head_args;
    for (const auto& t : v.head.args) head_args.push_back(to_dterm(t));
    view_atom.args = head_args;

    std::map<std::string, DTerm> skolem;
    std::set<std::string> used_names;
    for (const auto& var : v.body_variables()) {
      if (hv.count(var)) continue;
      std::string base = "f_" + lower(v.head.pred) + "_" + lower(var), name = base;
      for (int i = 2; used_names.count(name); i++) name = base + "_" + std::to_string(i);
      used_names.insert(name);
      skolem[var] = DTerm::func(name, head_args);
    }
    for (const auto& sg : v.subgoals) {
      DatalogRule r;
      r.tag = "inverse";
      r.head.pred = sg.pred;
      for (const auto& t : sg.args) {
        if (t.is_var && skolem.count(t.var)) r.head.args.push_back(skolem[t.var]);
        else r.head.args.push_back(to_dterm(t));
      }
      r.body.push_back(view_atom);
      out.push_back(std::move(r));
    }
  }
  return out;
}

MCRProgram mcr_rsi1(const CQACQuery& q, const std::vector<ViewDefinition>& views) {
  check_mcr_fragment(q, views);
  std::vector<ViewDefinition> cq_views = build_cq_views(views);

  // Relevant SIs: the views' SI content plus closed SIs for every constant of
  // the query and the views.
  std::vector<SI> relevant;
  auto add_si = [&](const SI& s) {
    for (const auto& r : relevant)
      if (r.upper == s.upper && r.strict == s.strict && r.c == s.c) return;
    relevant.push_back(s);
  };
  for (const auto& v : views)
    for (const auto& s : view_si_inventory(v)) add_si(s);
  std::set<Rational> cs = merge_equalities(q).constants();
  for (const auto& v : views) {
    auto vc = v.constants();
    cs.insert(vc.begin(), vc.end());
  }
  for (const auto& c : cs) {
    add_si({"", true, false, c});
    add_si({"", false, false, c});
  }

  TransformOptions opts;
  opts.use_u_tr = true;
  opts.extended_links = true;
  DatalogProgram p = to_datalog(q, relevant, opts);

  // The original relations are now derived from view facts by inverse rules.
  for (auto& [pred, ar] : p.edb) p.idb[pred] = ar;
  p.edb.clear();
  for (const auto& v : views) p.edb[v.head.pred] = (int)v.head.args.size();
  for (const auto& v : cq_views)
    for (const auto& sg : v.subgoals) {
      if (is_builtin_pred_name(sg.pred)) {
        if (!p.builtin.count(sg.pred)) p.builtin[sg.pred] = (int)sg.args.size();
      } else if (p.arity_of(sg.pred) < 0) {
        p.idb[sg.pred] = (int)sg.args.size();  // relation used by a view only
      }
    }
  for (auto& r : inverse_rules(cq_views)) p.rules.push_back(std::move(r));
  p.check_valid();
  return {std::move(p), std::move(cq_views)};
}

MCRProgram mcr_rsi1_plus(const CQACQuery& q, const std::vector<ViewDefinition>& views) {
  std::set<std::string> hv = q.head_variables();
  auto head_only = [&](const Comparison& c) {
    return (!c.lhs.is_var || hv.count(c.lhs.var)) && (!c.rhs.is_var || hv.count(c.rhs.var));
  };
  CQACQuery core = q;
  core.head.pred += "_core";
  core.acs = ACSet{};
  core.acs.universe = q.acs.universe;
  std::vector<Comparison> head_acs;
  for (const auto& c : q.acs.comparisons)
    (head_only(c) ? head_acs : core.acs.comparisons).push_back(c);
  for (const auto& c : core.acs.comparisons) {
    if (!c.lhs.is_var) core.acs.note_constant(c.lhs.val);
    if (!c.rhs.is_var) core.acs.note_constant(c.rhs.val);
  }

  MCRProgram mcr = mcr_rsi1(core, views);
  DatalogProgram& p = mcr.program;
  DatalogRule final_rule;
  final_rule.tag = "headacs";
  final_rule.head.pred = q.head.pred + "_datalog";
  for (const auto& t : q.head.args) final_rule.head.args.push_back(to_dterm(t));
  final_rule.body.push_back({p.query_pred, final_rule.head.args});
  for (const auto& c : head_acs) {
    std::string b = comparison_builtin(c.op);
    if (!p.builtin.count(b)) p.builtin[b] = 2;
    final_rule.body.push_back({b, {to_dterm(c.lhs), to_dterm(c.rhs)}});
  }
  p.query_pred = final_rule.head.pred;
  p.query_arity = (int)final_rule.head.args.size();
  p.idb[p.query_pred] = p.query_arity;
  p.rules.push_back(std::move(final_rule));
  p.check_valid();
  return mcr;
}

bool check_contained_rewriting(const CQACQuery& r, const CQACQuery& q,
                               const std::vector<ViewDefinition>& views) {
  CQACQuery exp = expand(rectify(r, views), views);
  if (exp.acs.false_fold || !is_consistent(exp.acs)) return true;  // empty rewriting
  return entailment_check(q, exp).holds;
}

bool contained_in_mcr(const MCRProgram& mcr, const CQACQuery& r,
                      const std::vector<ViewDefinition>& views) {
  CQACQuery rect = rectify(r, views);
  if (rect.acs.false_fold || !is_consistent(rect.acs)) return true;
  return contains_cq(mcr.program, to_cq(rect));
}

std::set<std::vector<Rational>> certain_answers(const MCRProgram& mcr, const ViewInstance& inst) {
  return query_answers(mcr.program, inst);
}

CertainAnswersResult certain_answers_oracle(const CQACQuery& q,
                                            const std::vector<ViewDefinition>& views,
                                            const ViewInstance& inst, int bound) {
  CertainAnswersResult res;
  // Freeze the instance: one variable per distinct constant, full order ACs
  // among them and against the query/view constants.
  std::set<Rational> ivals;
  for (const auto& [pred, tuples] : inst.relations)
    for (const auto& t : tuples) ivals.insert(t.begin(), t.end());
  std::map<Rational, std::string> var_of;
  int k = 0;
  for (const auto& c : ivals) var_of[c] = "IC" + std::to_string(k++);

  CQACQuery ri;
  ri.head = {"frozen_instance", {}};
  for (const auto& [pred, tuples] : inst.relations)
    for (const auto& t : tuples) {
      Atom a{pred, {}};
      for (const auto& c : t) a.args.push_back(Term::variable(var_of[c]));
      ri.subgoals.push_back(std::move(a));
    }
  for (auto it = ivals.begin(); it != ivals.end(); ++it) {
    auto jt = it;
    for (++jt; jt != ivals.end(); ++jt)
      ri.acs.add_term(Term::variable(var_of[*it]), "<", Term::variable(var_of[*jt]));
  }
  std::set<Rational> qc = q.constants();
  for (const auto& v : views) {
    auto vc = v.constants();
    qc.insert(vc.begin(), vc.end());
  }
  for (const auto& c : ivals)
    for (const auto& d : qc) {
      std::string op = c < d ? "<" : (c == d ? "=" : ">");
      ri.acs.add_term(Term::variable(var_of[c]), op, Term::constant(d));
    }
  for (const auto& v : ri.body_variables()) ri.acs.universe.insert(v);

  CQACQuery exp = expand(ri, views);
  if (exp.acs.false_fold || !is_consistent(exp.acs)) {
    res.defined = false;  // no database produces this instance
    return res;
  }

  bool first = true;
  bool any_db = false;
  std::set<std::vector<Rational>> inter;
  for_each_canonical_database(
      exp, q, bound, [&](const Database& db, const std::map<std::string, Rational>& assign) {
        any_db = true;
        std::map<Rational, Rational> back;  // canonical value -> instance constant
        for (const auto& [c, var] : var_of) back[assign.at(var)] = c;
        std::set<std::vector<Rational>> here;
        for (const auto& tup : evaluate(q, db)) {
          std::vector<Rational> tr;
          bool ok = true;
          for (const auto& v : tup) {
            auto it = back.find(v);
            if (it == back.end()) { ok = false; break; }
            tr.push_back(it->second);
          }
          if (ok) here.insert(std::move(tr));
        }
        if (first) {
          inter = std::move(here);
          first = false;
        } else {
          std::set<std::vector<Rational>> keep;
          std::set_intersection(inter.begin(), inter.end(), here.begin(), here.end(),
                                std::inserter(keep, keep.begin()));
          inter = std::move(keep);
        }
        return !inter.empty() || first;
      });
  if (!any_db) {
    res.defined = false;
    return res;
  }
  res.answers = std::move(inter);
  return res;
}

}  // namespace cqac
