#include "cqac/ac.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cqac {

Comparison Comparison::make(Term lhs, const std::string& op_token, Term rhs) {
  if (!lhs.is_var && !rhs.is_var)
    throw std::invalid_argument("constant-constant comparison must be folded: " +
                                lhs.str() + " " + op_token + " " + rhs.str());
  if (op_token == "<") return make(lhs, CompOp::LT, rhs);
  if (op_token == "<=") return make(lhs, CompOp::LE, rhs);
  if (op_token == "=") return make(lhs, CompOp::EQ, rhs);
  if (op_token == "!=") return make(lhs, CompOp::NEQ, rhs);
  if (op_token == ">") return make(rhs, CompOp::LT, lhs, true);
  if (op_token == ">=") return make(rhs, CompOp::LE, lhs, true);
  throw std::invalid_argument("unknown comparison operator: " + op_token);
}

Comparison Comparison::make(Term lhs, CompOp op, Term rhs, bool flip_display) {
  Comparison c;
  c.lhs = std::move(lhs);
  c.op = op;
  c.rhs = std::move(rhs);
  c.display_flipped = flip_display;
  if ((op == CompOp::EQ || op == CompOp::NEQ) && c.rhs < c.lhs) {
    std::swap(c.lhs, c.rhs);
    c.display_flipped = !flip_display;
  }
  return c;
}

Comparison Comparison::complement() const {
  switch (op) {
    case CompOp::LT: return make(rhs, CompOp::LE, lhs);
    case CompOp::LE: return make(rhs, CompOp::LT, lhs);
    case CompOp::EQ: return make(lhs, CompOp::NEQ, rhs);
    case CompOp::NEQ: return make(lhs, CompOp::EQ, rhs);
  }
  throw std::logic_error("bad op");
}

std::string comp_op_token(CompOp op) {
  switch (op) {
    case CompOp::LT: return "<";
    case CompOp::LE: return "<=";
    case CompOp::EQ: return "=";
    case CompOp::NEQ: return "!=";
  }
  return "?";
}

std::string Comparison::str() const {
  if (!display_flipped) return lhs.str() + " " + comp_op_token(op) + " " + rhs.str();
  std::string tok;
  switch (op) {
    case CompOp::LT: tok = ">"; break;
    case CompOp::LE: tok = ">="; break;
    case CompOp::EQ: tok = "="; break;
    case CompOp::NEQ: tok = "!="; break;
  }
  return rhs.str() + " " + tok + " " + lhs.str();
}

ACType classify_ac(const Comparison& c) {
  bool lv = c.lhs.is_var, rv = c.rhs.is_var;
  switch (c.op) {
    case CompOp::LT:
      if (lv && rv) return ACType::VAR_LT_VAR;
      return lv ? ACType::VAR_LT_CONST : ACType::CONST_LT_VAR;
    case CompOp::LE:
      if (lv && rv) return ACType::VAR_LE_VAR;
      return lv ? ACType::VAR_LE_CONST : ACType::CONST_LE_VAR;
    case CompOp::EQ:
      return (lv && rv) ? ACType::VAR_EQ_VAR : ACType::VAR_EQ_CONST;
    case CompOp::NEQ:
      return (lv && rv) ? ACType::VAR_NEQ_VAR : ACType::VAR_NEQ_CONST;
  }
  throw std::logic_error("bad op");
}

SILabel si_label(const Comparison& c) {
  switch (classify_ac(c)) {
    case ACType::VAR_LT_CONST: return SILabel::OLSI;
    case ACType::VAR_LE_CONST: return SILabel::CLSI;
    case ACType::CONST_LT_VAR: return SILabel::ORSI;
    case ACType::CONST_LE_VAR: return SILabel::CRSI;
    default: return SILabel::NONE;
  }
}

std::optional<SI> si_of(const Comparison& c) {
  SI s;
  switch (classify_ac(c)) {
    case ACType::VAR_LT_CONST:
      s = {c.lhs.var, true, true, c.rhs.val};
      return s;
    case ACType::VAR_LE_CONST:
      s = {c.lhs.var, true, false, c.rhs.val};
      return s;
    case ACType::CONST_LT_VAR:
      s = {c.rhs.var, false, true, c.lhs.val};
      return s;
    case ACType::CONST_LE_VAR:
      s = {c.rhs.var, false, false, c.lhs.val};
      return s;
    default:
      return std::nullopt;
  }
}

Comparison si_to_comparison(const SI& s) {
  Term v = Term::variable(s.var), k = Term::constant(s.c);
  if (s.upper) return Comparison::make(v, s.strict ? CompOp::LT : CompOp::LE, k);
  return Comparison::make(k, s.strict ? CompOp::LT : CompOp::LE, v, true);
}

bool SI::implies(const SI& other) const {
  if (upper != other.upper) return false;
  // Dense order: X < c implies X <= c' iff c <= c'; X <= c implies X < c'
  // iff c < c'.
  if (upper) {
    if (strict && !other.strict) return c <= other.c;
    if (!strict && other.strict) return c < other.c;
    return c <= other.c;
  }
  if (strict && !other.strict) return c >= other.c;
  if (!strict && other.strict) return c > other.c;
  return c >= other.c;
}

std::string SI::pred_suffix() const {
  std::string op = upper ? (strict ? "lt" : "le") : (strict ? "gt" : "ge");
  std::string num = c.num() < 0 ? "m" + std::to_string(-c.num()) : std::to_string(c.num());
  if (c.den() != 1) num += "_" + std::to_string(c.den());
  return op + "_" + num;
}

bool eval_const_comparison(const Rational& a, const std::string& op_token, const Rational& b) {
  if (op_token == "<") return a < b;
  if (op_token == "<=") return a <= b;
  if (op_token == "=") return a == b;
  if (op_token == "!=") return a != b;
  if (op_token == ">") return a > b;
  if (op_token == ">=") return a >= b;
  throw std::invalid_argument("unknown comparison operator: " + op_token);
}

void ACSet::add(const Comparison& c) {
  if (c.lhs.is_var) universe.insert(c.lhs.var); else relevant_constants.insert(c.lhs.val);
  if (c.rhs.is_var) universe.insert(c.rhs.var); else relevant_constants.insert(c.rhs.val);
  if (!contains(c)) comparisons.push_back(c);
}

bool ACSet::add_term(const Term& lhs, const std::string& op_token, const Term& rhs) {
  if (!lhs.is_var && !rhs.is_var) {
    relevant_constants.insert(lhs.val);
    relevant_constants.insert(rhs.val);
    if (!eval_const_comparison(lhs.val, op_token, rhs.val)) {
      false_fold = true;
      return false;
    }
    return true;  // trivially true, not stored
  }
  add(Comparison::make(lhs, op_token, rhs));
  return true;
}

void ACSet::add_all(const std::vector<Comparison>& cs) {
  for (const auto& c : cs) add(c);
}

bool ACSet::contains(const Comparison& c) const {
  return std::find(comparisons.begin(), comparisons.end(), c) != comparisons.end();
}

namespace {

// Saturation engine over the elements (variables + relevant constants).
// Internally tracks <=, < and != flags per ordered element pair; = is implied
// by <= in both directions.  The implemented implications are:
//   (1) reflexivity of <=        (2) < gives <=        (3) < gives !=
//   (4) <= and != give <         (5) != is symmetric    (6) < is transitive
//   (7) <= is transitive         (8) X<=Z<=Y, X<=W<=Y, W!=Z give X!=Y
//   (9) <= both ways gives =     plus c < c' seeds for relevant constants.
struct Engine {
  std::vector<Term> elems;
  std::map<std::string, int> var_ix;
  std::map<Rational, int> const_ix;
  int n = 0;
  std::vector<uint8_t> le, lt, nq, nq_from8;
  // Provenance for the contradiction witness: rule id plus premise flag ids.
  struct Prov {
    int rule = 0;
    int prem[5] = {-1, -1, -1, -1, -1};
  };
  std::vector<Prov> prov;  // indexed by flag id
  bool changed = false;

  enum Kind { LE = 0, LT = 1, NQ = 2 };
  int fid(Kind k, int i, int j) const { return ((int)k * n + i) * n + j; }

  explicit Engine(const ACSet& s) {
    std::set<std::string> vars = s.universe;
    std::set<Rational> consts = s.relevant_constants;
    for (const auto& c : s.comparisons) {
      for (const Term* t : {&c.lhs, &c.rhs}) {
        if (t->is_var) vars.insert(t->var); else consts.insert(t->val);
      }
    }
    for (const auto& v : vars) {
      var_ix[v] = (int)elems.size();
      elems.push_back(Term::variable(v));
    }
    for (const auto& c : consts) {
      const_ix[c] = (int)elems.size();
      elems.push_back(Term::constant(c));
    }
    n = (int)elems.size();
    le.assign((size_t)n * n, 0);
    lt.assign((size_t)n * n, 0);
    nq.assign((size_t)n * n, 0);
    nq_from8.assign((size_t)n * n, 0);
    prov.assign((size_t)3 * n * n, Prov{});
    for (int i = 0; i < n; i++) set(LE, i, i, 1);  // rule (1), constants included
    // Seed the order among relevant constants.
    std::vector<std::pair<Rational, int>> cs(const_ix.begin(), const_ix.end());
    for (size_t i = 0; i < cs.size(); i++)
      for (size_t j = i + 1; j < cs.size(); j++)
        set(LT, cs[i].second, cs[j].second, 0);
    for (const auto& c : s.comparisons) {
      int a = ix(c.lhs), b = ix(c.rhs);
      switch (c.op) {
        case CompOp::LT: set(LT, a, b, 0); break;
        case CompOp::LE: set(LE, a, b, 0); break;
        case CompOp::EQ: set(LE, a, b, 0); set(LE, b, a, 0); break;
        case CompOp::NEQ: set(NQ, a, b, 0); break;
      }
    }
  }

  int ix(const Term& t) const {
    return t.is_var ? var_ix.at(t.var) : const_ix.at(t.val);
  }

  bool set(Kind k, int i, int j, int rule, int p1 = -1, int p2 = -1, int p3 = -1,
           int p4 = -1, int p5 = -1) {
    std::vector<uint8_t>& m = k == LE ? le : (k == LT ? lt : nq);
    size_t at = (size_t)i * n + j;
    if (m[at]) return false;
    m[at] = 1;
    Prov& p = prov[fid(k, i, j)];
    p.rule = rule;
    p.prem[0] = p1; p.prem[1] = p2; p.prem[2] = p3; p.prem[3] = p4; p.prem[4] = p5;
    changed = true;
    return true;
  }

  void saturate(ClosureMode mode) {
    do {
      changed = false;
      for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
          size_t at = (size_t)i * n + j;
          if (lt[at]) {
            set(LE, i, j, 2, fid(LT, i, j));                    // (2)
            set(NQ, i, j, 3, fid(LT, i, j));                    // (3)
          }
          if (nq[at]) set(NQ, j, i, 5, fid(NQ, i, j));          // (5)
          if (le[at] && nq[at] && i != j)
            set(LT, i, j, 4, fid(LE, i, j), fid(NQ, i, j));     // (4)
        }
      for (int i = 0; i < n; i++)
        for (int k = 0; k < n; k++) {
          if (!le[(size_t)i * n + k] && !lt[(size_t)i * n + k]) continue;
          for (int j = 0; j < n; j++) {
            if (le[(size_t)i * n + k] && le[(size_t)k * n + j])
              set(LE, i, j, 7, fid(LE, i, k), fid(LE, k, j));   // (7)
            if (lt[(size_t)i * n + k] && lt[(size_t)k * n + j])
              set(LT, i, j, 6, fid(LT, i, k), fid(LT, k, j));   // (6)
          }
        }
      // (8): X<=Z<=Y and X<=W<=Y with W!=Z force X!=Y (densely ordered
      // domain).  The depth-one mode only consumes inequations that rule (8)
      // did not itself produce.
      for (int x = 0; x < n; x++)
        for (int y = 0; y < n; y++) {
          if (nq[(size_t)x * n + y]) continue;
          bool found = false;
          for (int z = 0; z < n && !found; z++) {
            if (!le[(size_t)x * n + z] || !le[(size_t)z * n + y]) continue;
            for (int w = 0; w < n && !found; w++) {
              if (!le[(size_t)x * n + w] || !le[(size_t)w * n + y]) continue;
              if (!nq[(size_t)w * n + z]) continue;
              if (mode == ClosureMode::DEPTH_ONE_RULE8 && nq_from8[(size_t)w * n + z])
                continue;
              set(NQ, x, y, 8, fid(LE, x, z), fid(LE, z, y), fid(LE, x, w),
                  fid(LE, w, y), fid(NQ, w, z));
              nq_from8[(size_t)x * n + y] = 1;
              found = true;
            }
          }
        }
    } while (changed);
  }

  bool inconsistent(int* where = nullptr) const {
    for (int i = 0; i < n; i++) {
      if (lt[(size_t)i * n + i] || nq[(size_t)i * n + i]) {
        if (where) *where = i;
        return true;
      }
    }
    return false;
  }

  std::string flag_str(int id) const {
    int k = id / (n * n), rest = id % (n * n);
    int i = rest / n, j = rest % n;
    const char* tok = k == LE ? "<=" : (k == LT ? "<" : "!=");
    return elems[i].str() + " " + tok + " " + elems[j].str();
  }

  void chain(int id, std::set<int>& seen, std::vector<std::string>& out) const {
    if (seen.count(id)) return;
    seen.insert(id);
    const Prov& p = prov[id];
    for (int q : p.prem)
      if (q >= 0) chain(q, seen, out);
    std::ostringstream os;
    os << flag_str(id);
    if (p.rule == 0)
      os << " (given)";
    else
      os << " (by rule " << p.rule << ")";
    out.push_back(os.str());
  }

  std::string contradiction_text() const {
    int i = -1;
    if (!inconsistent(&i)) return "";
    int id = lt[(size_t)i * n + i] ? fid(LT, i, i) : fid(NQ, i, i);
    std::set<int> seen;
    std::vector<std::string> steps;
    chain(id, seen, steps);
    std::ostringstream os;
    os << "contradiction: derived " << flag_str(id) << "; chain:";
    for (const auto& s : steps) os << "\n  " << s;
    return os.str();
  }
};

}  // namespace

bool ACClosure::contains(const Comparison& c) const { return derived_set_.count(c) > 0; }

ACClosure closure(const ACSet& acs, ClosureMode mode) {
  ACClosure out;
  out.base = acs;
  if (acs.false_fold) {
    out.consistent = false;
    out.contradiction_chain = "contradiction: a constant-constant comparison folded to false";
    return out;
  }
  Engine e(acs);
  e.saturate(mode);
  if (e.inconsistent()) {
    out.consistent = false;
    out.contradiction_chain = e.contradiction_text();
    return out;
  }
  int n = e.n;
  auto add = [&](const Comparison& c) {
    if (out.derived_set_.insert(c).second) out.derived.push_back(c);
  };
  for (int i = 0; i < n; i++) {
    for (int j = 0; j < n; j++) {
      bool cc = !e.elems[i].is_var && !e.elems[j].is_var;
      if (cc) continue;  // constant-constant facts stay implicit
      if (i == j) {
        if (e.le[(size_t)i * n + i] && e.elems[i].is_var)
          add(Comparison::make(e.elems[i], CompOp::LE, e.elems[i]));
        continue;
      }
      size_t at = (size_t)i * n + j;
      if (e.le[at]) add(Comparison::make(e.elems[i], CompOp::LE, e.elems[j]));
      if (e.lt[at]) add(Comparison::make(e.elems[i], CompOp::LT, e.elems[j]));
      if (e.nq[at] && i < j) add(Comparison::make(e.elems[i], CompOp::NEQ, e.elems[j]));
      if (e.le[at] && e.le[(size_t)j * n + i] && i < j)
        add(Comparison::make(e.elems[i], CompOp::EQ, e.elems[j]));
    }
  }
  return out;
}

bool is_consistent(const ACSet& acs, ClosureMode mode) { return closure(acs, mode).consistent; }

bool implies(const ACSet& acs, const Comparison& target, ClosureMode mode) {
  if (!is_consistent(acs, mode))
    throw std::invalid_argument("implies: left-hand side is inconsistent");
  // Trivial targets are decided directly; the closure does not enumerate
  // reflexive equalities or constant-constant facts.
  if (target.lhs == target.rhs)
    return target.op == CompOp::LE || target.op == CompOp::EQ;
  if (!target.lhs.is_var && !target.rhs.is_var)
    return eval_const_comparison(target.lhs.val, comp_op_token(target.op), target.rhs.val);
  ACSet work = acs;
  if (target.lhs.is_var) work.universe.insert(target.lhs.var);
  else work.relevant_constants.insert(target.lhs.val);
  if (target.rhs.is_var) work.universe.insert(target.rhs.var);
  else work.relevant_constants.insert(target.rhs.val);
  ACClosure cl = closure(work, mode);
  if (!cl.consistent)
    throw std::invalid_argument("implies: left-hand side is inconsistent");
  return cl.contains(target);
}

bool implication_holds(const ACSet& lhs, const std::vector<Comparison>& disjuncts,
                       ClosureMode mode) {
  ACSet work = lhs;
  for (const auto& d : disjuncts) work.add(d.complement());
  return !is_consistent(work, mode);
}

std::vector<Comparison> minimal_form(const ACSet& lhs, const std::vector<Comparison>& disjuncts,
                                     ClosureMode mode) {
  std::vector<Comparison> kept;
  for (const auto& d : disjuncts)  // dedup keeping earliest
    if (std::find(kept.begin(), kept.end(), d) == kept.end()) kept.push_back(d);
  if (!implication_holds(lhs, kept, mode))
    throw std::invalid_argument("minimal_form: implication does not hold");
  for (int i = (int)kept.size() - 1; i >= 0; i--) {
    std::vector<Comparison> trial = kept;
    trial.erase(trial.begin() + i);
    if (implication_holds(lhs, trial, mode)) kept = std::move(trial);
  }
  return kept;
}

}  // namespace cqac
