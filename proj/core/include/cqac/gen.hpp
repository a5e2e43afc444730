#pragma once

#include <random>

#include "cqac/hardness.hpp"
#include "cqac/query.hpp"

namespace cqac {

// Knobs for the random corpus used by the self-test and the test suite.
struct GenOptions {
  int max_subgoals = 3;
  int max_vars = 4;
  std::vector<Rational> constants = {Rational(3), Rational(5), Rational(7)};
  int max_acs = 2;
  bool rsi1_closed = false;  // only closed SIs with at most one lower bound
  int head_arity = 0;
};

// A random consistent query over the fixed schema e/2, p/1.
CQACQuery random_query(std::mt19937_64& rng, const GenOptions& opt,
                       const std::string& head_pred = "q");

// A (containing, contained) candidate pair with matching heads.
std::pair<CQACQuery, CQACQuery> random_pair(std::mt19937_64& rng, const GenOptions& o1,
                                            const GenOptions& o2);

Database random_database(std::mt19937_64& rng, const std::map<std::string, int>& preds,
                         const std::vector<Rational>& domain, int max_facts);

Pi2Formula random_pi2_formula(std::mt19937_64& rng, int n_univ, int n_exist, int max_nodes);

}  // namespace cqac
