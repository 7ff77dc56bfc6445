// Serial vs OpenMP timings for the two data-parallel kernels: frontier
// expansion inside the reachability closure, and whole-theory model checking.
// Run with --benchmark_filter=... to pick one family.

#include <benchmark/benchmark.h>

#include "treecert/encode.hpp"
#include "treecert/json_io.hpp"
#include "treecert/oracle.hpp"

using namespace treecert;

namespace {

const LoadedProblem& pts_problem() {
  static LoadedProblem p =
      load_problem_file(std::string(TREECERT_CORPUS_DIR) + "/twoway_token_pts.json");
  return p;
}

const LoadedProblem& rtmc_problem() {
  static LoadedProblem p =
      load_problem_file(std::string(TREECERT_CORPUS_DIR) + "/twoway_token_rtmc.json");
  return p;
}

void bm_reach_pts(benchmark::State& state, bool parallel) {
  const LoadedProblem& p = pts_problem();
  ReachOptions ro;
  ro.size_bound = static_cast<uint32_t>(state.range(0));
  ro.parallel = parallel;
  uint64_t visited = 0;
  for (auto _ : state) visited = reachable_pts(*p.pts, ro).size();
  state.counters["visited"] = static_cast<double>(visited);
}

void bm_reach_rtmc(benchmark::State& state, bool parallel) {
  const LoadedProblem& p = rtmc_problem();
  ReachOptions ro;
  ro.size_bound = static_cast<uint32_t>(state.range(0));
  ro.parallel = parallel;
  uint64_t visited = 0;
  for (auto _ : state) visited = reachable_rtmc(*p.rtmc, ro).size();
  state.counters["visited"] = static_cast<double>(visited);
}

void bm_check_model(benchmark::State& state, bool parallel) {
  const LoadedProblem& p = rtmc_problem();
  // A deterministic, valid model: the one read off the determinized initial
  // automaton. Checking it evaluates every clause under every assignment.
  static Theory th = encode_loaded(p);
  static FiniteModel model = std::get<FiniteModel>(model_from_invariant(
      *p.rtmc, determinize(p.rtmc->init, p.rtmc->alphabet), p.rtmc_options));
  CheckOptions co;
  co.parallel = parallel;
  bool ok = true;
  for (auto _ : state) ok = check_model(model, th, co).satisfied && ok;
  if (!ok) state.SkipWithError("model failed its theory");
}

}  // namespace

BENCHMARK_CAPTURE(bm_reach_pts, serial, false)->Arg(9)->Arg(11)->Arg(13)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_reach_pts, parallel, true)->Arg(9)->Arg(11)->Arg(13)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_reach_rtmc, serial, false)->Arg(7)->Arg(9)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_reach_rtmc, parallel, true)->Arg(7)->Arg(9)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_check_model, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_check_model, parallel, true)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
