#include <benchmark/benchmark.h>

#include "diagbound/likelihood.hpp"
#include "diagbound/netgen.hpp"
#include "diagbound/oracle.hpp"
#include "diagbound/posterior.hpp"
#include "diagbound/search.hpp"

using namespace diagbound;

namespace {

Network net(std::size_t diseases, std::size_t findings, std::uint64_t seed = 1) {
  GenSpec spec;
  spec.seed = seed;
  spec.n_diseases = diseases;
  spec.n_findings = findings;
  return generate(spec);
}

}  // namespace

static void BM_SearchToPmin(benchmark::State& state) {
  Network n = net(static_cast<std::size_t>(state.range(0)), 2 * static_cast<std::size_t>(state.range(0)));
  Evidence e = sample_case(n, 3, 11, 9).evidence;
  std::size_t nodes = 0;
  for (auto _ : state) {
    Search s(n, e);
    s.run();
    nodes = s.nodes_created();
    benchmark::DoNotOptimize(s.total_error());
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_SearchToPmin)->Arg(20)->Arg(100)->Arg(576)->Unit(benchmark::kMillisecond);

static void BM_ScaleCase(benchmark::State& state) {
  Network n = net(576, 4000, 576);
  Evidence e = sample_case(n, 4000, 11, 9).evidence;
  for (auto _ : state) {
    Search s(n, e);
    s.run();
    benchmark::DoNotOptimize(assemble(s).total_error);
  }
}
BENCHMARK(BM_ScaleCase)->Unit(benchmark::kMillisecond)->Iterations(1);

static void BM_ExpandOnce(benchmark::State& state) {
  Network n = net(static_cast<std::size_t>(state.range(0)), 4 * static_cast<std::size_t>(state.range(0)));
  Evidence e = sample_case(n, 5, 11, 9).evidence;
  for (auto _ : state) {
    Search s(n, e);
    s.expand();
    benchmark::DoNotOptimize(s.log_ubr());
  }
}
BENCHMARK(BM_ExpandOnce)->Arg(100)->Arg(576)->Unit(benchmark::kMicrosecond);

static void BM_MepScan(benchmark::State& state) {
  Network n = net(576, 4000);
  Evidence e = sample_case(n, 7, 11, 9).evidence;
  AbsorbedEvidence a = absorb(n, e);
  NodeLikelihoodCache root = root_cache(a);
  for (auto _ : state) {
    double acc = 0.0;
    for (DiseaseId d = 0; d < n.disease_count(); ++d) acc += log_mep(a, root, d);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_MepScan);

static void BM_Oracle(benchmark::State& state) {
  Network n = net(static_cast<std::size_t>(state.range(0)), 30);
  Evidence e = sample_case(n, 2, 6).evidence;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_exact(n, e).log_r_total);
}
BENCHMARK(BM_Oracle)->Arg(12)->Arg(16)->Arg(18)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
