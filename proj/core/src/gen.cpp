#include "cqac/gen.hpp"

#include <algorithm>

namespace cqac {

namespace {

int pick(std::mt19937_64& rng, int lo, int hi) {
  return (int)std::uniform_int_distribution<int>(lo, hi)(rng);
}

template <typename T>
const T& choose(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[(size_t)pick(rng, 0, (int)v.size() - 1)];
}

}  // namespace

CQACQuery random_query(std::mt19937_64& rng, const GenOptions& opt, const std::string& head_pred) {
  static const std::vector<std::pair<std::string, int>> schema = {{"e", 2}, {"p", 1}};
  for (int attempt = 0; attempt < 64; attempt++) {
    CQACQuery q;
    std::vector<std::string> vars;
    for (int i = 1; i <= opt.max_vars; i++) vars.push_back("X" + std::to_string(i));
    int ns = pick(rng, 1, opt.max_subgoals);
    std::set<std::string> used;
    for (int i = 0; i < ns; i++) {
      const auto& [pred, ar] = schema[(size_t)pick(rng, 0, (int)schema.size() - 1)];
      Atom a{pred, {}};
      for (int j = 0; j < ar; j++) {
        const std::string& v = choose(rng, vars);
        a.args.push_back(Term::variable(v));
        used.insert(v);
      }
      q.subgoals.push_back(std::move(a));
    }
    std::vector<std::string> uvec(used.begin(), used.end());
    int na = pick(rng, 0, opt.max_acs);
    bool have_rsi = false;
    for (int i = 0; i < na; i++) {
      Term x = Term::variable(choose(rng, uvec));
      if (opt.rsi1_closed) {
        Term c = Term::constant(choose(rng, opt.constants));
        if (!have_rsi && pick(rng, 0, 2) == 0) {
          q.acs.add_term(x, ">=", c);
          have_rsi = true;
        } else {
          q.acs.add_term(x, "<=", c);
        }
      } else if (pick(rng, 0, 1) == 0 && uvec.size() > 1) {
        static const std::vector<std::string> vops = {"<", "<=", "=", "!="};
        Term y = Term::variable(choose(rng, uvec));
        if (y == x) continue;
        q.acs.add_term(x, choose(rng, vops), y);
      } else {
        static const std::vector<std::string> cops = {"<", "<=", "=", "!=", ">=", ">"};
        q.acs.add_term(x, choose(rng, cops), Term::constant(choose(rng, opt.constants)));
      }
    }
    q.head.pred = head_pred;
    for (int i = 0; i < opt.head_arity; i++) q.head.args.push_back(Term::variable(choose(rng, uvec)));
    for (const auto& v : used) q.acs.universe.insert(v);
    if (q.acs.false_fold || !is_consistent(q.acs)) continue;
    return q;
  }
  throw std::runtime_error("failed to generate a consistent random query");
}

std::pair<CQACQuery, CQACQuery> random_pair(std::mt19937_64& rng, const GenOptions& o1,
                                            const GenOptions& o2) {
  CQACQuery q1 = random_query(rng, o1, "q");
  GenOptions o2h = o2;
  o2h.head_arity = o1.head_arity;
  CQACQuery q2 = random_query(rng, o2h, "q");
  return {std::move(q1), std::move(q2)};
}

Database random_database(std::mt19937_64& rng, const std::map<std::string, int>& preds,
                         const std::vector<Rational>& domain, int max_facts) {
  Database db;
  for (const auto& [pred, ar] : preds) {
    int n = pick(rng, 0, max_facts);
    for (int i = 0; i < n; i++) {
      std::vector<Rational> t;
      for (int j = 0; j < ar; j++) t.push_back(choose(rng, domain));
      db.add(pred, std::move(t));
    }
  }
  return db;
}

namespace {

Pi2Formula::Node random_node(std::mt19937_64& rng, const std::vector<std::string>& vars,
                             int& budget) {
  Pi2Formula::Node n;
  if (budget <= 1 || pick(rng, 0, 2) == 0) {
    n.kind = Pi2Formula::Node::VAR;
    n.var = choose(rng, vars);
    budget -= 1;
    return n;
  }
  budget -= 1;
  int k = pick(rng, 0, 2);
  n.kind = k == 0 ? Pi2Formula::Node::NOT : (k == 1 ? Pi2Formula::Node::AND : Pi2Formula::Node::OR);
  n.kids.push_back(random_node(rng, vars, budget));
  if (n.kind != Pi2Formula::Node::NOT) n.kids.push_back(random_node(rng, vars, budget));
  return n;
}

}  // namespace

Pi2Formula random_pi2_formula(std::mt19937_64& rng, int n_univ, int n_exist, int max_nodes) {
  Pi2Formula f;
  std::vector<std::string> vars;
  for (int i = 1; i <= n_univ; i++) {
    f.universals.push_back("p" + std::to_string(i));
    vars.push_back(f.universals.back());
  }
  for (int i = 1; i <= n_exist; i++) {
    f.existentials.push_back("q" + std::to_string(i));
    vars.push_back(f.existentials.back());
  }
  int budget = max_nodes;
  f.body = random_node(rng, vars, budget);
  return f;
}

}  // namespace cqac
