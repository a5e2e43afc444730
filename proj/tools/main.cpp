// cqac: command-line front-end for the CQAC containment / rewriting library.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cqac/containment.hpp"
#include "cqac/datalog.hpp"
#include "cqac/errors.hpp"
#include "cqac/gen.hpp"
#include "cqac/hardness.hpp"
#include "cqac/parser.hpp"
#include "cqac/query.hpp"
#include "cqac/rewriting.hpp"
#include "cqac/transform.hpp"

using nlohmann::json;
using namespace cqac;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitScale = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path, 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A bare list of comparisons: "X <= 5, Y < X." (commas/periods optional
// separators, one or more statements).
ACSet parse_acset(const std::string& text) {
  ACSet acs;
  Lexer lx(text);
  auto term_of = [&](const Token& t) {
    if (t.kind == Token::NUMBER) return Term::constant(t.value);
    if (t.kind == Token::VAR) return Term::variable(t.text);
    throw ParseError("expected a variable or a number, got '" + t.text + "'", t.line, t.col);
  };
  while (lx.peek().kind != Token::END) {
    Token lhs = lx.next();
    Token op = lx.next();
    if (op.kind != Token::PUNCT)
      throw ParseError("expected a comparison operator", op.line, op.col);
    Token rhs = lx.next();
    if (!acs.add_term(term_of(lhs), op.text, term_of(rhs)))
      acs.false_fold = true;
    while (lx.accept(",") || lx.accept(".")) {
    }
  }
  return acs;
}

json mapping_json(const ContainmentMapping& m) {
  json j = json::object();
  for (const auto& [v, t] : m) j[v] = t.str();
  return j;
}

void print_result(const std::string& verdict, const json& j, bool as_json) {
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << verdict << "\n";
  }
}

int cmd_contains(const std::string& f1, const std::string& f2, const std::string& strategy,
                 bool as_json) {
  CQACQuery q1 = parse_query(slurp(f1));
  CQACQuery q2 = parse_query(slurp(f2));
  ContainmentResult r;
  if (strategy == "oracle") {
    r = canonical_oracle_check(q1, q2);
  } else if (strategy == "entailment") {
    r = entailment_check(q1, q2);
  } else {
    Strategy s = Strategy::AUTO;
    if (strategy == "hp") s = Strategy::HP;
    else if (strategy == "one-ac") s = Strategy::ONE_AC;
    else if (strategy == "rsi1") s = Strategy::RSI1;
    else if (strategy != "auto")
      throw CLI::ValidationError("unknown strategy: " + strategy);
    r = fast_contains(q1, q2, s);
  }
  json j;
  j["verdict"] = r.holds ? "CONTAINED" : "NOT_CONTAINED";
  j["strategy"] = strategy;
  j["mappings"] = json::array();
  for (const auto& m : r.mappings) j["mappings"].push_back(mapping_json(m));
  if (r.counterexample) j["counterexample"] = r.counterexample->str();
  std::string text = r.holds ? "CONTAINED" : "NOT CONTAINED";
  if (!as_json && r.counterexample)
    text += "\ncounterexample database:\n" + r.counterexample->str();
  print_result(text, j, as_json);
  return kExitOk;
}

int cmd_closure(const std::string& file, bool as_json) {
  ACSet acs = parse_acset(slurp(file));
  ACClosure cl = closure(acs);
  json j;
  j["consistent"] = cl.consistent;
  j["derived"] = json::array();
  std::ostringstream text;
  if (!cl.consistent) {
    text << "INCONSISTENT";
    if (!cl.contradiction_chain.empty()) text << " (" << cl.contradiction_chain << ")";
    text << "\n";
    j["contradiction"] = cl.contradiction_chain;
  } else {
    for (const auto& c : cl.derived) {
      j["derived"].push_back(c.str());
      text << c.str() << "\n";
    }
  }
  print_result(text.str(), j, as_json);
  return kExitOk;
}

int cmd_normalize(const std::string& file, bool as_json) {
  CQACQuery q = normalize(parse_query(slurp(file)));
  json j;
  j["query"] = q.str();
  print_result(q.str(), j, as_json);
  return kExitOk;
}

int cmd_transform(const std::string& f1, const std::string& relevant, bool as_json) {
  CQACQuery q1 = parse_query(slurp(f1));
  std::vector<SI> sis;
  if (!relevant.empty()) sis = relevant_sis_of(parse_query(slurp(relevant)));
  DatalogProgram p = to_datalog(q1, sis);
  json j;
  j["program"] = p.str();
  if (!relevant.empty()) {
    CQACQuery cq = to_cq(parse_query(slurp(relevant)));
    j["contained_cq"] = cq.str();
    if (!as_json) {
      std::cout << p.str() << "\n% contained query as CQ:\n% " << cq.str() << "\n";
      return kExitOk;
    }
  }
  print_result(p.str(), j, as_json);
  return kExitOk;
}

int cmd_mcr(const std::string& qfile, const std::string& viewsfile, bool plus, bool as_json,
            const std::string& emit_golden) {
  CQACQuery q = parse_query(slurp(qfile));
  auto views = parse_views(slurp(viewsfile));
  MCRProgram mcr = plus ? mcr_rsi1_plus(q, views) : mcr_rsi1(q, views);
  if (!emit_golden.empty()) {
    std::ofstream out(emit_golden);
    out << mcr.program.str();
  }
  json j;
  j["program"] = mcr.program.str();
  j["cq_views"] = json::array();
  for (const auto& v : mcr.cq_views) j["cq_views"].push_back(v.str());
  print_result(mcr.program.str(), j, as_json);
  return kExitOk;
}

int cmd_certain(const std::string& qfile, const std::string& viewsfile,
                const std::string& instfile, bool use_oracle, bool as_json) {
  CQACQuery q = parse_query(slurp(qfile));
  auto views = parse_views(slurp(viewsfile));
  ViewInstance inst = parse_facts(slurp(instfile));
  json j;
  std::ostringstream text;
  std::set<std::vector<Rational>> answers;
  if (use_oracle) {
    auto r = certain_answers_oracle(q, views, inst);
    j["defined"] = r.defined;
    if (!r.defined) {
      print_result("UNDEFINED (no database realizes the instance)", j, as_json);
      return kExitOk;
    }
    answers = r.answers;
  } else {
    answers = certain_answers(mcr_rsi1_plus(q, views), inst);
    j["defined"] = true;
  }
  j["answers"] = json::array();
  for (const auto& tup : answers) {
    json row = json::array();
    std::string sep;
    text << "(";
    for (const auto& v : tup) {
      row.push_back(v.str());
      text << sep << v.str();
      sep = ",";
    }
    text << ")\n";
    j["answers"].push_back(row);
  }
  if (answers.empty()) text << "(no certain answers)\n";
  print_result(text.str(), j, as_json);
  return kExitOk;
}

int cmd_gen_hard(const std::string& file, const std::string& variant, bool as_json) {
  Pi2Formula f = parse_pi2_formula(slurp(file));
  ReductionPair rp = reduce_pi2sat(f, gadget_variant_from_name(variant));
  json j;
  j["q1"] = rp.q1.str();
  j["q2"] = rp.q2.str();
  j["formula_true"] = eval_pi2sat(f);
  std::ostringstream text;
  text << "% containing query\n" << rp.q1.str() << "\n% contained query\n" << rp.q2.str() << "\n";
  print_result(text.str(), j, as_json);
  return kExitOk;
}

int cmd_selftest(int corpus_size, unsigned long long seed, bool as_json) {
  std::mt19937_64 rng(seed);
  GenOptions opt;
  int checked = 0, transform_checked = 0, discrepancies = 0;
  json failures = json::array();
  while (checked < corpus_size) {
    auto [q1, q2] = random_pair(rng, opt, opt);
    ContainmentResult ent = entailment_check(q1, q2);
    ContainmentResult orc;
    try {
      orc = canonical_oracle_check(q1, q2);
    } catch (const ScaleError&) {
      continue;
    }
    ++checked;
    bool bad = ent.holds != orc.holds;
    bool q1_rsi1 = true;
    try {
      require_rsi1(merge_equalities(q1), /*closed_only=*/true);
    } catch (const FragmentError&) {
      q1_rsi1 = false;
    }
    if (q1_rsi1) {
      ++transform_checked;
      if (containment_via_transform(q1, q2) != ent.holds) bad = true;
    }
    if (fast_contains(q1, q2).holds != ent.holds) bad = true;
    if (bad) {
      ++discrepancies;
      json f;
      f["q1"] = q1.str();
      f["q2"] = q2.str();
      f["entailment"] = ent.holds;
      f["oracle"] = orc.holds;
      failures.push_back(f);
      std::cerr << "discrepancy (seed " << seed << "):\n  " << q1.str() << "\n  " << q2.str()
                << "\n";
    }
  }
  json j;
  j["seed"] = seed;
  j["checked"] = checked;
  j["transform_checked"] = transform_checked;
  j["discrepancies"] = discrepancies;
  j["failures"] = failures;
  std::ostringstream text;
  text << "checked " << checked << " pairs (" << transform_checked
       << " through the Datalog transformation), " << discrepancies << " discrepancies\n";
  print_result(text.str(), j, as_json);
  return discrepancies == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Containment and view-rewriting toolchain for conjunctive queries with "
               "arithmetic comparisons"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "emit JSON instead of plain text");

  std::string f1, f2, strategy = "auto";
  auto* contains = app.add_subcommand("contains", "decide q2 <= q1");
  contains->add_option("q1", f1, "containing query file")->required();
  contains->add_option("q2", f2, "contained query file")->required();
  contains->add_option("--strategy", strategy,
                       "auto|hp|one-ac|rsi1|entailment|oracle (default auto)");

  std::string acfile;
  auto* closure_cmd = app.add_subcommand("closure", "closure of a comparison set");
  closure_cmd->add_option("acset", acfile, "comparison list file")->required();

  std::string nfile;
  auto* normalize_cmd = app.add_subcommand("normalize", "normalize a query");
  normalize_cmd->add_option("query", nfile, "query file")->required();

  std::string tfile, relevant;
  auto* transform_cmd = app.add_subcommand("transform", "Datalog image of an RSI1 query");
  transform_cmd->add_option("q1", tfile, "containing query file")->required();
  transform_cmd->add_option("--relevant", relevant,
                            "contained query file supplying the relevant comparisons");

  std::string mq, mviews, emit_golden;
  bool plus = false;
  auto* mcr_cmd = app.add_subcommand("mcr", "maximally contained rewriting program");
  mcr_cmd->add_option("query", mq, "query file")->required();
  mcr_cmd->add_option("--views", mviews, "view definitions file")->required();
  mcr_cmd->add_flag("--plus", plus, "allow comparisons on head variables");
  mcr_cmd->add_option("--emit-golden", emit_golden, "also write the program to this path");

  std::string cq_, cviews, cinst;
  bool use_oracle = false;
  auto* certain_cmd = app.add_subcommand("certain", "certain answers over a view instance");
  certain_cmd->add_option("query", cq_, "query file")->required();
  certain_cmd->add_option("--views", cviews, "view definitions file")->required();
  certain_cmd->add_option("--instance", cinst, "view instance fact file")->required();
  certain_cmd->add_flag("--oracle", use_oracle, "use the brute-force oracle");

  std::string gfile, variant = "osi-neq";
  auto* gen_cmd = app.add_subcommand("gen-hard", "containment pair from a Pi2 formula");
  gen_cmd->add_option("formula", gfile, "formula file (prefix s-expression)")->required();
  gen_cmd->add_option("--variant", variant, "osi-neq|olsi-const|olsi-clsi-neq|neq-only");

  int corpus_size = 50;
  unsigned long long seed = 1;
  auto* selftest_cmd = app.add_subcommand("selftest", "random-corpus oracle agreement");
  selftest_cmd->add_option("--corpus-size", corpus_size, "pairs to check (default 50)");
  selftest_cmd->add_option("--seed", seed, "RNG seed (default 1)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
    if (*contains) return cmd_contains(f1, f2, strategy, as_json);
    if (*closure_cmd) return cmd_closure(acfile, as_json);
    if (*normalize_cmd) return cmd_normalize(nfile, as_json);
    if (*transform_cmd) return cmd_transform(tfile, relevant, as_json);
    if (*mcr_cmd) return cmd_mcr(mq, mviews, plus, as_json, emit_golden);
    if (*certain_cmd) return cmd_certain(cq_, cviews, cinst, use_oracle, as_json);
    if (*gen_cmd) return cmd_gen_hard(gfile, variant, as_json);
    if (*selftest_cmd) return cmd_selftest(corpus_size, seed, as_json);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitUsage : kExitOk;
  } catch (const ParseError& e) {
    std::cerr << "error (parse): " << e.what() << "\n";
    return kExitUsage;
  } catch (const FragmentError& e) {
    std::cerr << "error (fragment): " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScaleError& e) {
    std::cerr << "error (scale-bound): " << e.what() << "\n";
    return kExitScale;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
