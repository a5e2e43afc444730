#include "cqac/query.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace cqac {

std::string Atom::str() const {
  std::string s = pred + "(";
  for (size_t i = 0; i < args.size(); i++) {
    if (i) s += ",";
    s += args[i].str();
  }
  return s + ")";
}

bool operator<(const Atom& a, const Atom& b) {
  if (a.pred != b.pred) return a.pred < b.pred;
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size();
  for (size_t i = 0; i < a.args.size(); i++) {
    if (a.args[i] != b.args[i]) return a.args[i] < b.args[i];
  }
  return false;
}

std::set<std::string> CQACQuery::body_variables() const {
  std::set<std::string> vs;
  for (const auto& sg : subgoals)
    for (const auto& t : sg.args)
      if (t.is_var) vs.insert(t.var);
  return vs;
}

std::set<std::string> CQACQuery::head_variables() const {
  std::set<std::string> vs;
  for (const auto& t : head.args)
    if (t.is_var) vs.insert(t.var);
  return vs;
}

std::set<Rational> CQACQuery::constants() const {
  std::set<Rational> cs;
  for (const auto& sg : subgoals)
    for (const auto& t : sg.args)
      if (!t.is_var) cs.insert(t.val);
  for (const auto& c : acs.comparisons) {
    if (!c.lhs.is_var) cs.insert(c.lhs.val);
    if (!c.rhs.is_var) cs.insert(c.rhs.val);
  }
  return cs;
}

void CQACQuery::check_valid() const {
  std::set<std::string> body = body_variables();
  for (const auto& v : head_variables())
    if (!body.count(v))
      throw std::invalid_argument("unsafe query " + head.pred + ": head variable " + v +
                                  " not bound by a relational subgoal");
  for (const auto& c : acs.comparisons)
    for (const Term* t : {&c.lhs, &c.rhs})
      if (t->is_var && !body.count(t->var))
        throw std::invalid_argument("unsafe query " + head.pred + ": comparison variable " +
                                    t->var + " not bound by a relational subgoal");
}

std::string CQACQuery::str() const {
  std::string s = head.str() + " :- ";
  bool first = true;
  for (const auto& sg : subgoals) {
    if (!first) s += ", ";
    s += sg.str();
    first = false;
  }
  for (const auto& c : acs.comparisons) {
    if (!first) s += ", ";
    s += c.str();
    first = false;
  }
  return s + ".";
}

void Database::add(const std::string& pred, std::vector<Rational> tuple) {
  relations[pred].insert(std::move(tuple));
}

std::string Database::str() const {
  std::ostringstream os;
  for (const auto& [pred, tuples] : relations)
    for (const auto& t : tuples) {
      os << pred << "(";
      for (size_t i = 0; i < t.size(); i++) {
        if (i) os << ",";
        os << t[i].str();
      }
      os << ").\n";
    }
  return os.str();
}

std::string fresh_var(const std::string& base, std::set<std::string>& used) {
  if (!used.count(base)) {
    used.insert(base);
    return base;
  }
  for (int i = 1;; i++) {
    std::string cand = base + "_" + std::to_string(i);
    if (!used.count(cand)) {
      used.insert(cand);
      return cand;
    }
  }
}

CQACQuery normalize(const CQACQuery& q) {
  CQACQuery out;
  out.head = q.head;
  out.acs = q.acs;
  std::set<std::string> used = q.body_variables();
  for (const auto& v : q.head_variables()) used.insert(v);
  std::set<std::string> seen;
  for (const auto& sg : q.subgoals) {
    Atom a;
    a.pred = sg.pred;
    for (const auto& t : sg.args) {
      if (!t.is_var) {
        // Lift the constant to a fresh variable tied by Z = c.
        std::string z = fresh_var("Z", used);
        a.args.push_back(Term::variable(z));
        out.acs.add(Comparison::make(Term::variable(z), CompOp::EQ, t));
      } else if (seen.count(t.var)) {
        std::string v2 = fresh_var(t.var, used);
        a.args.push_back(Term::variable(v2));
        out.acs.add(Comparison::make(Term::variable(t.var), CompOp::EQ, Term::variable(v2)));
      } else {
        seen.insert(t.var);
        a.args.push_back(t);
      }
    }
    out.subgoals.push_back(std::move(a));
  }
  for (const auto& v : out.body_variables()) out.acs.universe.insert(v);
  return out;
}

CQACQuery merge_equalities(const CQACQuery& q) {
  ACClosure cl = closure(q.acs);
  if (!cl.consistent)
    throw std::invalid_argument("merge_equalities: inconsistent comparisons; " +
                                cl.contradiction_chain);
  // Union-find over variables; a class pinned to a constant maps to it.
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& v) {
    auto it = parent.find(v);
    if (it == parent.end() || it->second == v) return v;
    std::string r = find(it->second);
    parent[v] = r;
    return r;
  };
  auto unite = [&](const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra != rb) parent[std::min(ra, rb) == ra ? rb : ra] = std::min(ra, rb);
  };
  std::map<std::string, Rational> pinned;
  for (const auto& c : cl.derived) {
    if (c.op != CompOp::EQ) continue;
    if (c.lhs.is_var && c.rhs.is_var) unite(c.lhs.var, c.rhs.var);
  }
  for (const auto& c : cl.derived) {
    if (c.op != CompOp::EQ) continue;
    if (c.lhs.is_var && !c.rhs.is_var) pinned[find(c.lhs.var)] = c.rhs.val;
  }
  std::map<std::string, Term> sub;
  for (const auto& v : q.body_variables()) {
    std::string r = find(v);
    auto it = pinned.find(r);
    if (it != pinned.end()) sub[v] = Term::constant(it->second);
    else if (r != v) sub[v] = Term::variable(r);
  }
  CQACQuery out;
  out.head = substitute(q.head, sub);
  for (const auto& sg : q.subgoals) out.subgoals.push_back(substitute(sg, sub));
  for (const auto& c : q.acs.comparisons) {
    Term l = substitute(c.lhs, sub), r = substitute(c.rhs, sub);
    if (l == r) continue;
    if (!l.is_var && !r.is_var) continue;  // consistent fold, closure vouched for it
    if (c.op == CompOp::EQ) continue;      // merged or pinned away
    out.acs.add(Comparison::make(l, c.op, r, c.display_flipped));
  }
  for (const auto& k : q.acs.relevant_constants) out.acs.note_constant(k);
  for (const auto& v : out.body_variables()) out.acs.universe.insert(v);
  return out;
}

Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
  if (!t.is_var) return t;
  auto it = sub.find(t.var);
  return it == sub.end() ? t : it->second;
}

Atom substitute(const Atom& a, const std::map<std::string, Term>& sub) {
  Atom out;
  out.pred = a.pred;
  for (const auto& t : a.args) out.args.push_back(substitute(t, sub));
  return out;
}

ACSet substitute_acs(const std::vector<Comparison>& acs, const std::map<std::string, Term>& sub) {
  ACSet out;
  for (const auto& c : acs) {
    Term l = substitute(c.lhs, sub), r = substitute(c.rhs, sub);
    out.add_term(l, comp_op_token(c.op), r);
  }
  return out;
}

namespace {

bool check_ground_ac(const Comparison& c, const std::map<std::string, Rational>& env,
                     bool* decided) {
  auto value = [&](const Term& t, Rational* out) {
    if (!t.is_var) { *out = t.val; return true; }
    auto it = env.find(t.var);
    if (it == env.end()) return false;
    *out = it->second;
    return true;
  };
  Rational a, b;
  if (!value(c.lhs, &a) || !value(c.rhs, &b)) {
    *decided = false;
    return true;
  }
  *decided = true;
  switch (c.op) {
    case CompOp::LT: return a < b;
    case CompOp::LE: return a <= b;
    case CompOp::EQ: return a == b;
    case CompOp::NEQ: return a != b;
  }
  return false;
}

}  // namespace

std::set<std::vector<Rational>> evaluate(const CQACQuery& q, const Database& db) {
  std::set<std::vector<Rational>> results;
  std::map<std::string, Rational> env;
  static const std::set<std::vector<Rational>> kEmpty;

  std::function<void(size_t)> go = [&](size_t i) {
    if (i == q.subgoals.size()) {
      for (const auto& c : q.acs.comparisons) {
        bool decided;
        if (!check_ground_ac(c, env, &decided) || !decided) return;
      }
      std::vector<Rational> tuple;
      for (const auto& t : q.head.args)
        tuple.push_back(t.is_var ? env.at(t.var) : t.val);
      results.insert(std::move(tuple));
      return;
    }
    const Atom& sg = q.subgoals[i];
    auto it = db.relations.find(sg.pred);
    const auto& tuples = it == db.relations.end() ? kEmpty : it->second;
    for (const auto& tup : tuples) {
      if (tup.size() != sg.args.size()) continue;
      std::vector<std::string> bound;
      bool ok = true;
      for (size_t k = 0; k < tup.size() && ok; k++) {
        const Term& t = sg.args[k];
        if (!t.is_var) {
          ok = t.val == tup[k];
        } else {
          auto e = env.find(t.var);
          if (e == env.end()) {
            env[t.var] = tup[k];
            bound.push_back(t.var);
          } else {
            ok = e->second == tup[k];
          }
        }
      }
      if (ok) {
        // Prune on ACs already fully bound.
        bool pruned = false;
        for (const auto& c : q.acs.comparisons) {
          bool decided;
          if (!check_ground_ac(c, env, &decided) && decided) { pruned = true; break; }
        }
        if (!pruned) go(i + 1);
      }
      for (const auto& v : bound) env.erase(v);
    }
  };
  go(0);
  return results;
}

bool evaluates_nonempty(const CQACQuery& q, const Database& db) {
  return !evaluate(q, db).empty();
}

CQACQuery expand(const CQACQuery& rewriting, const std::vector<ViewDefinition>& views) {
  std::map<std::string, const ViewDefinition*> by_name;
  for (const auto& v : views) by_name[v.head.pred] = &v;
  CQACQuery out;
  out.head = rewriting.head;
  out.acs = rewriting.acs;
  std::set<std::string> used = rewriting.body_variables();
  for (const auto& v : rewriting.head_variables()) used.insert(v);
  int occurrence = 0;
  for (const auto& sg : rewriting.subgoals) {
    auto it = by_name.find(sg.pred);
    if (it == by_name.end())
      throw std::invalid_argument("expand: no view definition for predicate " + sg.pred);
    const ViewDefinition& v = *it->second;
    if (v.head.args.size() != sg.args.size())
      throw std::invalid_argument("expand: arity mismatch on view " + sg.pred);
    occurrence++;
    std::map<std::string, Term> sub;
    // Distinguished variables take the rewriting's terms.
    for (size_t k = 0; k < sg.args.size(); k++) {
      const Term& hv = v.head.args[k];
      if (!hv.is_var) {
        if (!(hv == sg.args[k]) && sg.args[k].is_var) {
          // view head pins a constant; tie the rewriting variable to it
          out.acs.add(Comparison::make(sg.args[k], CompOp::EQ, hv));
          continue;
        }
        if (!(hv == sg.args[k]))
          throw std::invalid_argument("expand: constant clash on view " + sg.pred);
        continue;
      }
      auto prev = sub.find(hv.var);
      if (prev != sub.end()) {
        // repeated head variable: equate the two rewriting terms
        if (!(prev->second == sg.args[k]))
          out.acs.add_term(prev->second, "=", sg.args[k]);
      } else {
        sub[hv.var] = sg.args[k];
      }
    }
    // Nondistinguished variables become fresh ones.
    for (const auto& bv : v.body_variables()) {
      if (sub.count(bv)) continue;
      sub[bv] = Term::variable(fresh_var(sg.pred + "_" + bv + "_" + std::to_string(occurrence), used));
    }
    for (const auto& vsg : v.subgoals) out.subgoals.push_back(substitute(vsg, sub));
    ACSet sacs = substitute_acs(v.acs.comparisons, sub);
    if (sacs.false_fold) out.acs.false_fold = true;
    for (const auto& c : sacs.comparisons) out.acs.add(c);
    for (const auto& k : sacs.relevant_constants) out.acs.note_constant(k);
  }
  for (const auto& v : out.body_variables()) out.acs.universe.insert(v);
  return out;
}

CQACQuery rectify(const CQACQuery& rewriting, const std::vector<ViewDefinition>& views) {
  CQACQuery exp = expand(rewriting, views);
  ACClosure cl = closure(exp.acs);
  if (!cl.consistent)
    throw std::invalid_argument("rectify: expansion comparisons are inconsistent; " +
                                cl.contradiction_chain);
  CQACQuery out = rewriting;
  std::set<std::string> rvars = rewriting.body_variables();
  for (const auto& c : cl.derived) {
    if (c.op == CompOp::LE && c.lhs == c.rhs) continue;  // reflexive
    bool inside = true;
    for (const Term* t : {&c.lhs, &c.rhs})
      if (t->is_var && !rvars.count(t->var)) inside = false;
    if (inside) out.acs.add(c);
  }
  for (const auto& v : out.body_variables()) out.acs.universe.insert(v);
  return out;
}

}  // namespace cqac
