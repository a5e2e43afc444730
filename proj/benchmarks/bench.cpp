#include <benchmark/benchmark.h>

#include <random>

#include "cqac/containment.hpp"
#include "cqac/datalog.hpp"
#include "cqac/gen.hpp"
#include "cqac/parser.hpp"
#include "cqac/transform.hpp"

using namespace cqac;

static void BM_Closure(benchmark::State& state) {
  ACSet acs;
  int n = (int)state.range(0);
  for (int i = 0; i < n; i++) {
    acs.add_term(Term::variable("X" + std::to_string(i)), "<=",
                 Term::variable("X" + std::to_string(i + 1)));
  }
  acs.add_term(Term::variable("X0"), ">=", Term::constant(Rational(5)));
  acs.add_term(Term::variable("X" + std::to_string(n)), "<=", Term::constant(Rational(7)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(closure(acs));
  }
}
BENCHMARK(BM_Closure)->Arg(4)->Arg(8)->Arg(16);

static void BM_EntailmentCheck(benchmark::State& state) {
  CQACQuery q1 = parse_query("q() :- e(X,Y), e(Y,Z), X >= 5, Z <= 8.");
  CQACQuery q2 =
      parse_query("q() :- e(A,B), e(B,C), e(C,D), e(D,E), A >= 6, E <= 7.");
  for (auto _ : state) {
    benchmark::DoNotOptimize(entailment_check(q1, q2));
  }
}
BENCHMARK(BM_EntailmentCheck);

static void BM_TransformContainment(benchmark::State& state) {
  CQACQuery q1 = parse_query("q() :- e(X,Y), e(Y,Z), X >= 5, Z <= 8.");
  CQACQuery q2 =
      parse_query("q() :- e(A,B), e(B,C), e(C,D), e(D,E), A >= 6, E <= 7.");
  for (auto _ : state) {
    benchmark::DoNotOptimize(containment_via_transform(q1, q2));
  }
}
BENCHMARK(BM_TransformContainment);

static void BM_DatalogFixpoint(benchmark::State& state) {
  DatalogProgram p = parse_datalog(
      "@edb edge 2\n@idb path 2\n@query path 2\n"
      "path(X,Y) :- edge(X,Y).\npath(X,Y) :- edge(X,Z), path(Z,Y).\n");
  std::mt19937_64 rng(7);
  Database db;
  int n = (int)state.range(0);
  for (int i = 0; i < n; i++)
    db.add("edge", {Rational((long long)(rng() % 20)), Rational((long long)(rng() % 20))});
  DDatabase input = to_ddatabase(db);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_program(p, input));
  }
}
BENCHMARK(BM_DatalogFixpoint)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
