#include "cqac/datalog.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "cqac/parser.hpp"

namespace cqac {

DTerm DTerm::variable(std::string n) {
  DTerm t;
  t.kind = VAR;
  t.name = std::move(n);
  return t;
}
DTerm DTerm::constant(Rational v) {
  DTerm t;
  t.kind = CONST;
  t.val = v;
  return t;
}
DTerm DTerm::symbol(std::string n) {
  DTerm t;
  t.kind = SYM;
  t.name = std::move(n);
  return t;
}
DTerm DTerm::func(std::string functor, std::vector<DTerm> as) {
  DTerm t;
  t.kind = FUNC;
  t.name = std::move(functor);
  t.args = std::move(as);
  return t;
}

bool DTerm::is_ground() const {
  if (kind == VAR) return false;
  for (const auto& a : args)
    if (!a.is_ground()) return false;
  return true;
}

bool DTerm::has_func() const {
  if (kind == FUNC) return true;
  for (const auto& a : args)
    if (a.has_func()) return true;
  return false;
}

std::string DTerm::str() const {
  switch (kind) {
    case VAR:
    case SYM: return name;
    case CONST: return val.str();
    case FUNC: {
      std::string s = name + "(";
      for (size_t i = 0; i < args.size(); i++) s += (i ? "," : "") + args[i].str();
      return s + ")";
    }
  }
  return "?";
}

bool operator==(const DTerm& a, const DTerm& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == DTerm::CONST) return a.val == b.val;
  return a.name == b.name && a.args == b.args;
}

bool operator<(const DTerm& a, const DTerm& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.kind == DTerm::CONST) return a.val < b.val;
  if (a.name != b.name) return a.name < b.name;
  return a.args < b.args;
}

std::string DAtom::str() const {
  std::string s = pred + "(";
  for (size_t i = 0; i < args.size(); i++) s += (i ? "," : "") + args[i].str();
  return s + ")";
}

std::string DatalogRule::str() const {
  std::string s = head.str();
  if (!body.empty()) {
    s += " :- ";
    for (size_t i = 0; i < body.size(); i++) s += (i ? ", " : "") + body[i].str();
  }
  return s + ".";
}

std::optional<SI> si_from_builtin_pred(const std::string& pred) {
  if (pred.rfind("u_", 0) != 0) return std::nullopt;
  std::string rest = pred.substr(2);
  SI si;
  if (rest.rfind("le_", 0) == 0) si.upper = true, si.strict = false;
  else if (rest.rfind("lt_", 0) == 0) si.upper = true, si.strict = true;
  else if (rest.rfind("ge_", 0) == 0) si.upper = false, si.strict = false;
  else if (rest.rfind("gt_", 0) == 0) si.upper = false, si.strict = true;
  else return std::nullopt;
  rest = rest.substr(3);
  bool neg = false;
  if (!rest.empty() && rest[0] == 'm') neg = true, rest = rest.substr(1);
  std::string num = rest, den = "1";
  auto us = rest.find('_');
  if (us != std::string::npos) {
    num = rest.substr(0, us);
    den = rest.substr(us + 1);
  }
  auto all_digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return isdigit(c); });
  };
  if (!all_digits(num) || !all_digits(den)) return std::nullopt;
  si.c = Rational((neg ? -1 : 1) * std::stoll(num), std::stoll(den));
  return si;
}

bool is_builtin_pred_name(const std::string& pred) {
  return pred == "u" || pred == "lt" || pred == "le" || pred == "eq" || pred == "neq" ||
         si_from_builtin_pred(pred).has_value();
}

int DatalogProgram::arity_of(const std::string& pred) const {
  for (auto* m : {&edb, &idb, &builtin}) {
    auto it = m->find(pred);
    if (it != m->end()) return it->second;
  }
  return -1;
}

void DatalogProgram::check_valid() const {
  auto declared_once = [&](const std::string& p) {
    return edb.count(p) + idb.count(p) + builtin.count(p) == 1;
  };
  for (auto* m : {&edb, &idb, &builtin})
    for (const auto& [p, a] : *m) {
      if (!declared_once(p))
        throw std::invalid_argument("predicate " + p + " declared in more than one class");
      if (a < 0) throw std::invalid_argument("negative arity for " + p);
    }
  for (const auto& [p, a] : builtin) {
    if (p == "u" || p == "lt" || p == "le" || p == "eq" || p == "neq") {
      if (a != 2) throw std::invalid_argument("builtin " + p + " must be binary");
    } else if (auto s = si_from_builtin_pred(p)) {
      if (a != 1) throw std::invalid_argument("builtin " + p + " must be unary");
    } else {
      throw std::invalid_argument("builtin " + p + " has no comparison meaning");
    }
  }
  if (arity_of(query_pred) != query_arity)
    throw std::invalid_argument("query predicate " + query_pred + " undeclared or arity mismatch");
  auto check_atom = [&](const DAtom& a, const char* where) {
    int ar = arity_of(a.pred);
    if (ar < 0) throw std::invalid_argument(std::string(where) + ": undeclared predicate " + a.pred);
    if ((int)a.args.size() != ar)
      throw std::invalid_argument(std::string(where) + ": arity mismatch for " + a.pred);
  };
  std::function<void(const DTerm&, std::set<std::string>&)> vars_of =
      [&](const DTerm& t, std::set<std::string>& out) {
        if (t.kind == DTerm::VAR) out.insert(t.name);
        for (const auto& a : t.args) vars_of(a, out);
      };
  for (const auto& r : rules) {
    check_atom(r.head, "rule head");
    if (edb.count(r.head.pred))
      throw std::invalid_argument("rule head over EDB predicate " + r.head.pred);
    std::set<std::string> bound;
    for (const auto& b : r.body) {
      check_atom(b, "rule body");
      for (const auto& t : b.args) vars_of(t, bound);
    }
    std::set<std::string> hv;
    for (const auto& t : r.head.args) vars_of(t, hv);
    for (const auto& v : hv)
      if (!bound.count(v))
        throw std::invalid_argument("unsafe rule: head variable " + v + " unbound in " + r.str());
  }
  for (const auto& f : facts) {
    check_atom(f, "fact");
    for (const auto& t : f.args)
      if (!t.is_ground()) throw std::invalid_argument("non-ground fact " + f.str());
  }
}

std::string DatalogProgram::str() const {
  std::ostringstream os;
  for (const auto& [p, a] : edb) os << "@edb " << p << " " << a << "\n";
  for (const auto& [p, a] : idb) os << "@idb " << p << " " << a << "\n";
  for (const auto& [p, a] : builtin) os << "@builtin " << p << " " << a << "\n";
  os << "@query " << query_pred << " " << query_arity << "\n";
  std::string last_tag;
  for (const auto& r : rules) {
    if (r.tag != last_tag && !r.tag.empty()) os << "@tag " << r.tag << "\n";
    last_tag = r.tag;
    os << r.str() << "\n";
  }
  for (const auto& f : facts) os << f.str() << ".\n";
  return os.str();
}

namespace {

DTerm parse_dterm(Lexer& lx) {
  const Token& t = lx.peek();
  if (t.kind == Token::VAR) return DTerm::variable(lx.next().text);
  if (t.kind == Token::NUMBER) return DTerm::constant(lx.next().value);
  if (t.kind == Token::PUNCT && t.text == "-" && lx.peek2().kind == Token::NUMBER) {
    lx.next();
    return DTerm::constant(Rational(0) - lx.next().value);
  }
  if (t.kind == Token::IDENT) {
    std::string name = lx.next().text;
    if (!lx.accept("(")) return DTerm::symbol(name);
    std::vector<DTerm> args;
    if (!lx.accept(")")) {
      do args.push_back(parse_dterm(lx));
      while (lx.accept(","));
      lx.expect_punct(")");
    }
    return DTerm::func(name, std::move(args));
  }
  lx.fail("expected a term");
}

DAtom parse_datom(Lexer& lx) {
  DAtom a;
  a.pred = lx.expect(Token::IDENT, "predicate name").text;
  lx.expect_punct("(");
  if (!lx.accept(")")) {
    do a.args.push_back(parse_dterm(lx));
    while (lx.accept(","));
    lx.expect_punct(")");
  }
  return a;
}

}  // namespace

DatalogProgram parse_datalog(const std::string& text) {
  Lexer lx(text);
  DatalogProgram p;
  std::string tag;
  bool query_seen = false;
  while (lx.peek().kind != Token::END) {
    if (lx.accept("@")) {
      std::string kw = lx.expect(Token::IDENT, "declaration keyword").text;
      if (kw == "tag") {
        tag = lx.expect(Token::IDENT, "tag name").text;
        continue;
      }
      std::string pred = lx.expect(Token::IDENT, "predicate name").text;
      const Token& nt = lx.expect(Token::NUMBER, "arity");
      if (nt.value.den() != 1 || nt.value.num() < 0) lx.fail("arity must be a natural number");
      int ar = (int)nt.value.num();
      if (kw == "edb") p.edb[pred] = ar;
      else if (kw == "idb") p.idb[pred] = ar;
      else if (kw == "builtin") p.builtin[pred] = ar;
      else if (kw == "query") {
        if (query_seen) lx.fail("duplicate @query declaration");
        query_seen = true;
        p.query_pred = pred;
        p.query_arity = ar;
      } else lx.fail("unknown declaration @" + kw);
      continue;
    }
    DAtom head = parse_datom(lx);
    if (lx.accept(":-")) {
      DatalogRule r;
      r.head = std::move(head);
      r.tag = tag;
      do r.body.push_back(parse_datom(lx));
      while (lx.accept(","));
      lx.expect_punct(".");
      p.rules.push_back(std::move(r));
    } else {
      lx.expect_punct(".");
      p.facts.push_back(std::move(head));
    }
  }
  if (!query_seen) throw ParseError("missing @query declaration", 1, 1);
  p.check_valid();
  return p;
}

DDatabase to_ddatabase(const Database& db) {
  DDatabase out;
  for (const auto& [pred, tuples] : db.relations)
    for (const auto& t : tuples) {
      std::vector<DTerm> row;
      for (const auto& v : t) row.push_back(DTerm::constant(v));
      out[pred].insert(std::move(row));
    }
  return out;
}

std::string ddatabase_str(const DDatabase& db) {
  std::ostringstream os;
  for (const auto& [pred, tuples] : db)
    for (const auto& t : tuples) {
      DAtom a{pred, t};
      os << a.str() << ".\n";
    }
  return os.str();
}

namespace {

using Env = std::map<std::string, DTerm>;

// Matches a (possibly non-ground) pattern against a ground term.
bool match(const DTerm& pat, const DTerm& val, Env& env) {
  if (pat.kind == DTerm::VAR) {
    auto it = env.find(pat.name);
    if (it != env.end()) return it->second == val;
    env[pat.name] = val;
    return true;
  }
  if (pat.kind != val.kind) return false;
  if (pat.kind == DTerm::CONST) return pat.val == val.val;
  if (pat.name != val.name || pat.args.size() != val.args.size()) return false;
  for (size_t i = 0; i < pat.args.size(); i++)
    if (!match(pat.args[i], val.args[i], env)) return false;
  return true;
}

DTerm apply_env(const DTerm& t, const Env& env) {
  if (t.kind == DTerm::VAR) {
    auto it = env.find(t.name);
    return it == env.end() ? t : it->second;
  }
  if (t.kind == DTerm::FUNC) {
    DTerm out = t;
    for (auto& a : out.args) a = apply_env(a, env);
    return out;
  }
  return t;
}

bool builtin_holds_ground(const DatalogProgram& p, const std::string& pred,
                          const std::vector<DTerm>& args) {
  // Reflexive <=/= hold on any ground term, including Skolem values.
  if ((pred == "u" || pred == "le" || pred == "eq") && args.size() == 2 && args[0] == args[1])
    return true;
  for (const auto& a : args)
    if (a.kind != DTerm::CONST) return false;
  if (pred == "u" || pred == "le") return args[0].val <= args[1].val;
  if (pred == "lt") return args[0].val < args[1].val;
  if (pred == "eq") return args[0].val == args[1].val;
  if (pred == "neq") return args[0].val != args[1].val;
  SI si = *si_from_builtin_pred(pred);
  const Rational& x = args[0].val;
  if (si.upper) return si.strict ? x < si.c : x <= si.c;
  return si.strict ? x > si.c : x >= si.c;
}

struct Evaluator {
  const DatalogProgram& p;
  DDatabase db;

  explicit Evaluator(const DatalogProgram& prog, const DDatabase& input) : p(prog), db(input) {
    for (const auto& f : p.facts) db[f.pred].insert(f.args);
    materialize_builtins();
  }

  // Computed extensions of the builtins over the rational active domain.
  void materialize_builtins() {
    if (p.builtin.empty()) return;
    std::set<Rational> dom;
    auto note = [&](const DTerm& t) {
      if (t.kind == DTerm::CONST) dom.insert(t.val);
      for (const auto& a : t.args)
        if (a.kind == DTerm::CONST) dom.insert(a.val);
    };
    for (const auto& [pred, tuples] : db)
      for (const auto& t : tuples)
        for (const auto& v : t) note(v);
    for (const auto& r : p.rules) {
      for (const auto& t : r.head.args) note(t);
      for (const auto& b : r.body)
        for (const auto& t : b.args) note(t);
    }
    for (const auto& [pred, ar] : p.builtin) {
      if (auto si = si_from_builtin_pred(pred)) dom.insert(si->c);
    }
    for (const auto& [pred, ar] : p.builtin) {
      if (ar == 2) {
        for (const auto& a : dom)
          for (const auto& b : dom)
            if (builtin_holds_ground(p, pred, {DTerm::constant(a), DTerm::constant(b)}))
              db[pred].insert({DTerm::constant(a), DTerm::constant(b)});
      } else {
        for (const auto& a : dom)
          if (builtin_holds_ground(p, pred, {DTerm::constant(a)}))
            db[pred].insert({DTerm::constant(a)});
      }
    }
  }

  // Joins r.body with env, requiring the atom at delta_pos to match from
  // delta (delta_pos < 0: no requirement).  Emits instantiated heads.
  void fire(const DatalogRule& r, size_t idx, Env env, int delta_pos, const DDatabase& delta,
            std::vector<std::pair<std::string, std::vector<DTerm>>>& out) {
    if (idx == r.body.size()) {
      std::vector<DTerm> head;
      for (const auto& t : r.head.args) head.push_back(apply_env(t, env));
      out.emplace_back(r.head.pred, std::move(head));
      return;
    }
    const DAtom& b = r.body[idx];
    const DDatabase& src = ((int)idx == delta_pos) ? delta : db;
    // A fully ground builtin atom over rationals holds by computation.
    if ((int)idx != delta_pos && p.builtin.count(b.pred)) {
      std::vector<DTerm> args;
      bool ground = true;
      for (const auto& t : b.args) {
        DTerm g = apply_env(t, env);
        if (!g.is_ground()) ground = false;
        args.push_back(std::move(g));
      }
      if (ground) {
        auto it = db.find(b.pred);
        bool stored = it != db.end() && it->second.count(args);
        if (stored || builtin_holds_ground(p, b.pred, args))
          fire(r, idx + 1, env, delta_pos, delta, out);
        return;
      }
    }
    auto it = src.find(b.pred);
    if (it == src.end()) return;
    for (const auto& fact : it->second) {
      Env e2 = env;
      bool ok = true;
      for (size_t i = 0; i < b.args.size() && ok; i++)
        ok = match(apply_env(b.args[i], e2), fact[i], e2);
      if (ok) fire(r, idx + 1, e2, delta_pos, delta, out);
    }
  }

  void run_seminaive() {
    DDatabase delta = db;
    bool first = true;
    while (true) {
      std::vector<std::pair<std::string, std::vector<DTerm>>> produced;
      for (const auto& r : p.rules) {
        if (first && r.body.empty()) fire(r, 0, {}, -1, delta, produced);
        for (size_t i = 0; i < r.body.size(); i++) fire(r, 0, {}, (int)i, delta, produced);
      }
      first = false;
      DDatabase next_delta;
      for (auto& [pred, tuple] : produced)
        if (db[pred].insert(tuple).second) next_delta[pred].insert(std::move(tuple));
      if (next_delta.empty()) break;
      delta = std::move(next_delta);
    }
  }

  void run_naive() {
    while (true) {
      std::vector<std::pair<std::string, std::vector<DTerm>>> produced;
      for (const auto& r : p.rules) fire(r, 0, {}, -1, {}, produced);
      bool grew = false;
      for (auto& [pred, tuple] : produced) grew |= db[pred].insert(std::move(tuple)).second;
      if (!grew) break;
    }
  }
};

}  // namespace

DDatabase evaluate_program(const DatalogProgram& p, const DDatabase& input) {
  Evaluator ev(p, input);
  ev.run_seminaive();
  return std::move(ev.db);
}

DDatabase evaluate_program_naive(const DatalogProgram& p, const DDatabase& input) {
  Evaluator ev(p, input);
  ev.run_naive();
  return std::move(ev.db);
}

std::set<std::vector<Rational>> query_answers(const DatalogProgram& p, const Database& input) {
  DDatabase out = evaluate_program(p, to_ddatabase(input));
  std::set<std::vector<Rational>> ans;
  auto it = out.find(p.query_pred);
  if (it == out.end()) return ans;
  for (const auto& t : it->second) {
    std::vector<Rational> row;
    bool rational = true;
    for (const auto& v : t) {
      if (v.kind != DTerm::CONST) {
        rational = false;
        break;
      }
      row.push_back(v.val);
    }
    if (rational) ans.insert(std::move(row));
  }
  return ans;
}

namespace {

// Unification of two (possibly non-ground) terms; env applies to both.
bool unify(DTerm a, DTerm b, Env& env) {
  a = apply_env(a, env);
  b = apply_env(b, env);
  if (a.kind == DTerm::VAR) {
    if (b.kind == DTerm::VAR && b.name == a.name) return true;
    env[a.name] = b;
    // keep env idempotent
    for (auto& [k, v] : env) v = apply_env(v, env);
    return true;
  }
  if (b.kind == DTerm::VAR) return unify(b, a, env);
  if (a.kind != b.kind) return false;
  if (a.kind == DTerm::CONST) return a.val == b.val;
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); i++)
    if (!unify(a.args[i], b.args[i], env)) return false;
  return true;
}

struct ExpState {
  std::vector<DAtom> goals;        // pending (non-converted) atoms
  std::vector<int> gdepth;         // per-atom unfold depth, parallel to goals
  std::vector<Comparison> acs;     // converted builtin atoms
  std::vector<DTerm> head_args;    // query head tuple under the unifiers so far
};

std::optional<Term> to_query_term(const DTerm& t) {
  if (t.kind == DTerm::VAR) return Term::variable(t.name);
  if (t.kind == DTerm::CONST) return Term::constant(t.val);
  return std::nullopt;
}

// Canonical renaming key for duplicate elimination.
std::string canonical_key(const CQACQuery& q) {
  std::map<std::string, std::string> ren;
  auto name_of = [&](const std::string& v) {
    auto it = ren.find(v);
    if (it != ren.end()) return it->second;
    std::string n = "V" + std::to_string(ren.size());
    ren[v] = n;
    return n;
  };
  std::ostringstream os;
  auto term_str = [&](const Term& t) { return t.is_var ? name_of(t.var) : t.val.str(); };
  for (const auto& h : q.head.args) os << term_str(h) << ";";
  os << "|";
  std::vector<std::string> parts;
  for (const auto& sg : q.subgoals) {
    std::string s = sg.pred + "(";
    for (const auto& a : sg.args) s += term_str(a) + ",";
    parts.push_back(s + ")");
  }
  for (const auto& c : q.acs.comparisons)
    parts.push_back(term_str(c.lhs) + comp_op_token(c.op) + term_str(c.rhs));
  std::sort(parts.begin(), parts.end());
  for (const auto& s : parts) os << s << "&";
  return os.str();
}

}  // namespace

std::vector<CQACQuery> expansions_up_to_depth(const DatalogProgram& p, int depth,
                                              size_t max_expansions) {
  std::vector<CQACQuery> out;
  std::set<std::string> seen;
  size_t fresh = 0;

  DAtom root;
  root.pred = p.query_pred;
  for (int i = 0; i < p.query_arity; i++) root.args.push_back(DTerm::variable("A" + std::to_string(i)));

  std::vector<ExpState> stack{{{root}, {0}, {}, root.args}};
  size_t explored = 0;
  while (!stack.empty()) {
    if (++explored > max_expansions)
      throw ScaleError("expansion search exceeded " + std::to_string(max_expansions) + " states");
    ExpState st = std::move(stack.back());
    stack.pop_back();

    // Find the first atom needing work.
    int pick = -1;
    bool pick_builtin = false;
    for (size_t i = 0; i < st.goals.size() && pick < 0; i++) {
      const std::string& pr = st.goals[i].pred;
      if (p.idb.count(pr)) pick = (int)i;
      else if (p.builtin.count(pr)) pick = (int)i, pick_builtin = true;
      else {
        // EDB atom: must be Skolem-free to denote a view atom.
        for (const auto& a : st.goals[i].args)
          if (a.has_func()) { pick = -2; break; }
      }
    }
    if (pick == -2) continue;  // dead: Skolem stuck in an EDB atom
    if (pick < 0) {
      // Fully expanded: emit as a CQAC query over the EDB predicates.
      CQACQuery q;
      q.head.pred = p.query_pred;
      bool ok = true;
      for (const auto& a : st.head_args) {
        auto t = to_query_term(a);
        if (!t) { ok = false; break; }
        q.head.args.push_back(*t);
      }
      if (!ok) continue;
      for (const auto& g : st.goals) {
        Atom sg{g.pred, {}};
        for (const auto& a : g.args) {
          auto t = to_query_term(a);
          if (!t) { ok = false; break; }
          sg.args.push_back(*t);
          if (!t->is_var) q.acs.note_constant(t->val);
        }
        if (!ok) break;
        q.subgoals.push_back(std::move(sg));
      }
      if (!ok) continue;
      // Comparisons over variables no relational subgoal binds arise from
      // builtin chains; by density of the order they are equivalent to some
      // directly-linked expansion, so keep only the safe ones.
      std::set<std::string> bound = q.body_variables();
      for (const auto& c : st.acs)
        for (const Term* t : {&c.lhs, &c.rhs})
          if (t->is_var && !bound.count(t->var)) ok = false;
      if (!ok) continue;
      for (const auto& c : st.acs) q.acs.add(c);
      for (const auto& v : q.body_variables()) q.acs.universe.insert(v);
      std::string key = canonical_key(q);
      if (seen.insert(key).second) out.push_back(std::move(q));
      continue;
    }

    const DAtom goal = st.goals[pick];
    // Option: interpret a builtin atom as the comparison it denotes.
    if (pick_builtin) {
      bool convertible = true;
      std::vector<Term> ts;
      for (const auto& a : goal.args) {
        auto t = to_query_term(a);
        if (!t) { convertible = false; break; }
        ts.push_back(*t);
      }
      if (convertible) {
        ExpState nx = st;
        nx.goals.erase(nx.goals.begin() + pick);
        nx.gdepth.erase(nx.gdepth.begin() + pick);
        std::string op;
        if (goal.pred == "u" || goal.pred == "le") op = "<=";
        else if (goal.pred == "lt") op = "<";
        else if (goal.pred == "eq") op = "=";
        else if (goal.pred == "neq") op = "!=";
        if (!op.empty()) {
          if (!ts[0].is_var && !ts[1].is_var) {
            if (eval_const_comparison(ts[0].val, op, ts[1].val)) stack.push_back(std::move(nx));
          } else if (ts[0] == ts[1]) {
            if (op == "<=" || op == "=") stack.push_back(std::move(nx));
          } else {
            nx.acs.push_back(Comparison::make(ts[0], op, ts[1]));
            stack.push_back(std::move(nx));
          }
        } else {
          SI si = *si_from_builtin_pred(goal.pred);
          si.var = "";
          Term c = Term::constant(si.c);
          std::string op = si.upper ? (si.strict ? "<" : "<=") : (si.strict ? ">" : ">=");
          if (ts[0].is_var) {
            nx.acs.push_back(Comparison::make(ts[0], op, c));
            stack.push_back(std::move(nx));
          } else if (eval_const_comparison(ts[0].val, op, si.c)) {
            stack.push_back(std::move(nx));
          }
        }
      }
    }
    // Option: unfold through each rule deriving the predicate.
    if (st.gdepth[pick] >= depth) continue;
    for (const auto& r : p.rules) {
      if (r.head.pred != goal.pred) continue;
      // Rename rule variables apart.
      std::set<std::string> rule_vars;
      std::function<void(const DTerm&)> collect = [&](const DTerm& t) {
        if (t.kind == DTerm::VAR) rule_vars.insert(t.name);
        for (const auto& a : t.args) collect(a);
      };
      for (const auto& t : r.head.args) collect(t);
      for (const auto& b : r.body)
        for (const auto& t : b.args) collect(t);
      Env rn;
      for (const auto& v : rule_vars) rn[v] = DTerm::variable("R" + std::to_string(fresh) + "_" + v);
      fresh++;
      Env mgu;
      bool ok = true;
      for (size_t i = 0; i < goal.args.size() && ok; i++)
        ok = unify(goal.args[i], apply_env(r.head.args[i], rn), mgu);
      if (!ok) continue;
      ExpState nx;
      nx.acs = st.acs;
      for (size_t i = 0; i < st.goals.size(); i++) {
        if ((int)i == pick) {
          for (const auto& b : r.body) {
            DAtom nb{b.pred, {}};
            for (const auto& t : b.args) nb.args.push_back(apply_env(apply_env(t, rn), mgu));
            nx.goals.push_back(std::move(nb));
            nx.gdepth.push_back(st.gdepth[pick] + 1);
          }
        } else {
          DAtom ng{st.goals[i].pred, {}};
          for (const auto& t : st.goals[i].args) ng.args.push_back(apply_env(t, mgu));
          nx.goals.push_back(std::move(ng));
          nx.gdepth.push_back(st.gdepth[i]);
        }
      }
      for (const auto& t : st.head_args) nx.head_args.push_back(apply_env(t, mgu));
      // The mgu may bind variables already used in converted comparisons;
      // apply it there too (bindings are var/const only in that case).
      bool acs_ok = true;
      for (auto& c : nx.acs) {
        auto fix = [&](Term& t) {
          if (!t.is_var) return true;
          auto it = mgu.find(t.var);
          if (it == mgu.end()) return true;
          auto nt = to_query_term(apply_env(it->second, mgu));
          if (!nt) return false;
          t = *nt;
          return true;
        };
        if (!fix(c.lhs) || !fix(c.rhs)) { acs_ok = false; break; }
        if (!c.lhs.is_var && !c.rhs.is_var) {
          if (!eval_const_comparison(c.lhs.val, comp_op_token(c.op), c.rhs.val)) {
            acs_ok = false;
            break;
          }
        }
      }
      if (!acs_ok) continue;
      std::erase_if(nx.acs, [](const Comparison& c) { return !c.lhs.is_var && !c.rhs.is_var; });
      stack.push_back(std::move(nx));
    }
  }
  return out;
}

bool contains_cq(const DatalogProgram& p, const CQACQuery& cq) {
  auto freeze = [](const Term& t) {
    return t.is_var ? DTerm::symbol("$" + t.var) : DTerm::constant(t.val);
  };
  DDatabase input;
  for (const auto& sg : cq.subgoals) {
    std::vector<DTerm> row;
    for (const auto& a : sg.args) row.push_back(freeze(a));
    input[sg.pred].insert(std::move(row));
  }
  DDatabase out = evaluate_program(p, input);
  std::vector<DTerm> want;
  for (const auto& a : cq.head.args) want.push_back(freeze(a));
  auto it = out.find(p.query_pred);
  return it != out.end() && it->second.count(want) > 0;
}

}  // namespace cqac
