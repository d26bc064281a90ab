#include <benchmark/benchmark.h>

#include "isosurf/catalog.hpp"
#include "isosurf/congruence.hpp"
#include "isosurf/family.hpp"
#include "isosurf/higher_forms.hpp"

using namespace isosurf;

static void BM_JetEval(benchmark::State& state) {
  const auto& c = *catalog_get("veronese-s4").chart;
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(jet_eval(c, {1.0, 2.0}, order));
}
BENCHMARK(BM_JetEval)->Arg(2)->Arg(4)->Arg(8);

static void BM_OsculatingFlag(benchmark::State& state) {
  const auto& c = *catalog_get("equilateral-s5").chart;
  for (auto _ : state) benchmark::DoNotOptimize(osculating_flag(c, {0.4, 1.1}));
}
BENCHMARK(BM_OsculatingFlag);

static void BM_IsotropyReport(benchmark::State& state) {
  const auto& c = *catalog_get("equilateral-s5").chart;
  AnalysisOptions o;
  o.jobs = 1;
  const GridSpec g = GridSpec::for_chart(c, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(isotropy_report(c, g, o));
}
BENCHMARK(BM_IsotropyReport)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_IntegrateFamily(benchmark::State& state) {
  const auto& c = *catalog_get("equilateral-s5").chart;
  const GridSpec g = GridSpec::for_chart(c, static_cast<int>(state.range(0)));
  FamilyParams p;
  p.theta = 0.785;
  p.jobs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_family(c, g, p));
}
BENCHMARK(BM_IntegrateFamily)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_MonodromyDefect(benchmark::State& state) {
  const MonodromyEvaluator ev(*catalog_get("clifford-s3").chart, 1024, {}, 1);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.defect(t));
    t += 0.01;
  }
}
BENCHMARK(BM_MonodromyDefect);

static void BM_Congruence(benchmark::State& state) {
  const auto& c = *catalog_get("equilateral-s5").chart;
  const SampledImmersion s = sample(c, GridSpec::for_chart(c, 64), 1);
  for (auto _ : state) benchmark::DoNotOptimize(congruence_test(s, s));
}
BENCHMARK(BM_Congruence);

BENCHMARK_MAIN();
