#include <benchmark/benchmark.h>

#include "arbgraph/arbitration.hpp"
#include "arbgraph/graph_builder.hpp"
#include "arbgraph/simulation.hpp"

using namespace arbgraph;

namespace {

GeneratedScenario scenario_of_size(int conflicts) {
    ScenarioKnobs k;
    k.conflicts = conflicts;
    k.uncontested_true = conflicts / 2;
    k.max_supporters = 3;
    k.noisy_supporters = 2;
    k.homonym_noise = conflicts / 4;
    k.redundant_paraphrases = conflicts / 2;
    k.arbitrator_error = 0.1;
    return generate_scenario(k, 42);
}

void BM_BuildGraph(benchmark::State& state) {
    const auto gen = scenario_of_size(static_cast<int>(state.range(0)));
    const OracleBackend backend(gen.table);
    for (auto _ : state) {
        auto g = build_graph(gen.scenario.query, gen.scenario.documents, backend, PipelineConfig{});
        benchmark::DoNotOptimize(g);
    }
    state.counters["claims"] = static_cast<double>(gen.scenario.documents.size());
}
BENCHMARK(BM_BuildGraph)->Arg(10)->Arg(40)->Arg(160);

void BM_MineCandidates(benchmark::State& state) {
    const auto gen = scenario_of_size(static_cast<int>(state.range(0)));
    const OracleBackend backend(gen.table);
    const auto pool = ingest_documents(gen.scenario.query, gen.scenario.documents, backend);
    const auto nodes = normalize_claims(pool.claims, PipelineConfig{});
    for (auto _ : state) {
        auto pairs = mine_candidates(nodes, 0.6);
        benchmark::DoNotOptimize(pairs);
    }
    state.counters["nodes"] = static_cast<double>(nodes.size());
}
BENCHMARK(BM_MineCandidates)->Arg(10)->Arg(40)->Arg(160);

void BM_Arbitration(benchmark::State& state) {
    const auto gen = scenario_of_size(static_cast<int>(state.range(0)));
    const OracleBackend backend(gen.table);
    PipelineConfig cfg;
    cfg.budget_k = 8;
    const auto g = build_graph(gen.scenario.query, gen.scenario.documents, backend, cfg);
    for (auto _ : state) {
        auto r = run_arbitration(g, backend, cfg);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_Arbitration)->Arg(10)->Arg(40)->Arg(160);

void BM_PolicySweep(benchmark::State& state) {
    SweepSpec spec;
    spec.parameter = SweepParameter::Policy;
    spec.grid = default_sweep_grid(spec.parameter);
    spec.knobs = default_sweep_knobs(spec.parameter);
    spec.scenarios = 20;
    spec.base = default_sweep_config(spec.parameter);
    for (auto _ : state) {
        auto rows = sweep(spec, static_cast<std::size_t>(state.range(0)));
        benchmark::DoNotOptimize(rows);
    }
}
BENCHMARK(BM_PolicySweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
