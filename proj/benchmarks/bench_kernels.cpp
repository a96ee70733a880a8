#include <benchmark/benchmark.h>

#include "sketchkrylov/sketchkrylov.hpp"

namespace sk = sketchkrylov;

namespace {

void BM_GemmFine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const sk::Matrix A = sk::gaussian_matrix(n, n, 1, 0);
  const sk::Matrix B = sk::gaussian_matrix(n, n, 2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sk::multiply(A, B));
  state.SetItemsProcessed(state.iterations() * 2 * n * n * n);
}
BENCHMARK(BM_GemmFine)->Arg(64)->Arg(128)->Arg(256);

void BM_GemmCoarse(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const sk::Matrix A = sk::gaussian_matrix(n, n, 1, 0);
  const sk::Matrix B = sk::gaussian_matrix(n, n, 2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sk::multiply(A, B, sk::PrecisionSpec::coarse()));
  state.SetItemsProcessed(state.iterations() * 2 * n * n * n);
}
BENCHMARK(BM_GemmCoarse)->Arg(64)->Arg(128)->Arg(256);

void BM_SketchApply(benchmark::State& state, sk::SketchKind kind) {
  const std::size_t n = 8192, w = 10;
  const auto k = static_cast<std::size_t>(state.range(0));
  const sk::SketchOperator theta = sk::SketchOperator::make(kind, k, n, 3);
  const sk::Matrix X = sk::gaussian_matrix(n, w, 4, 0);
  for (auto _ : state) benchmark::DoNotOptimize(theta.apply(X));
}
BENCHMARK_CAPTURE(BM_SketchApply, srht, sk::SketchKind::srht)->Arg(200)->Arg(800);
BENCHMARK_CAPTURE(BM_SketchApply, rademacher, sk::SketchKind::rademacher)->Arg(200)->Arg(800);

void BM_Rbgs(benchmark::State& state) {
  const std::size_t n = 8192, m = 60;
  const sk::Matrix W = sk::gen_synthetic_51(n, m);
  const sk::SketchOperator theta = sk::SketchOperator::make(sk::SketchKind::srht, 400, n, 5);
  sk::RbgsConfig cfg;
  cfg.partition = sk::BlockPartition::uniform(m, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sk::rbgs(W, theta, cfg));
}
BENCHMARK(BM_Rbgs)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ClassicBgs(benchmark::State& state, sk::BgsVariant variant) {
  const std::size_t n = 8192, m = 60;
  const sk::Matrix W = sk::gen_synthetic_51(n, m);
  sk::ClassicBgsConfig cfg;
  cfg.variant = variant;
  cfg.partition = sk::BlockPartition::uniform(m, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sk::classic_bgs(W, cfg));
}
BENCHMARK_CAPTURE(BM_ClassicBgs, bcgs2, sk::BgsVariant::bcgs2)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ClassicBgs, bmgs, sk::BgsVariant::bmgs)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
