// Serial against OpenMP neighbor scans, and the estimator against the
// brute-force reference, on generated snapshots.

#include <benchmark/benchmark.h>

#include "cosknn/estimator.hpp"
#include "cosknn/generators.hpp"
#include "cosknn/kernels.hpp"
#include "cosknn/reference.hpp"

using namespace cosknn;

namespace {

DatabaseSnapshot make_snapshot(std::size_t n) {
  ScenarioConfig cfg;
  cfg.d = 8;
  cfg.mask_process = MaskProcess::example2_incremental;
  cfg.reveal_process = RevealProcess::bernoulli_growth;
  cfg.new_user_mask_law = NewUserMaskLaw::same_as_M1;
  return gen_scenario_run(1, cfg, n).snapshot(cfg);
}

template <bool Parallel>
void BM_Scan(benchmark::State& state) {
  const auto snap = make_snapshot(static_cast<std::size_t>(state.range(0)));
  const auto cand = kernels::eligible_rows_serial(snap);
  std::vector<double> scores(cand.size());
  const auto q = snap.new_user_vector().entries();
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::score_rows_parallel(snap, q, Psi::identity, cand, scores);
    } else {
      kernels::score_rows_serial(snap, q, Psi::identity, cand, scores);
    }
    benchmark::DoNotOptimize(scores.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cand.size()));
}

void BM_Estimate(benchmark::State& state) {
  const auto snap = make_snapshot(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate(snap, 20, Psi::identity).value);
}

void BM_BruteForce(benchmark::State& state) {
  const auto snap = make_snapshot(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::brute_force_estimate(snap, 20, Psi::identity).value);
}

}  // namespace

BENCHMARK(BM_Scan<false>)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 18);
BENCHMARK(BM_Scan<true>)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 18);
BENCHMARK(BM_Estimate)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_BruteForce)->Arg(1 << 12)->Arg(1 << 16);

BENCHMARK_MAIN();
