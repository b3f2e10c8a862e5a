#include "km/algebra.hpp"
#include "km/hilbert.hpp"
#include "km/interpolation.hpp"
#include "km/kripke.hpp"
#include "km/parser.hpp"
#include "km/search.hpp"
#include "km/selftest.hpp"

#include <benchmark/benchmark.h>

using namespace km;

namespace {

void BM_ProveFlagship(benchmark::State& state) {
    const Sequent s = parse_sequent("box p => q | (q -> p)");
    for (auto _ : state)
        benchmark::DoNotOptimize(prove(s));
}
BENCHMARK(BM_ProveFlagship);

// Fresh prover per iteration, so the verdict cache starts empty.
void BM_ProveCorpus(benchmark::State& state) {
    const auto corpus = sequent_corpus(200, 1, static_cast<std::uint64_t>(state.range(0)));
    const bool plain = state.range(1) != 0;
    for (auto _ : state) {
        Prover p(plain ? plain_search_config() : SearchConfig{});
        for (const Sequent& s : corpus)
            benchmark::DoNotOptimize(p.provable(s));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.size()));
}
BENCHMARK(BM_ProveCorpus)->Args({15, 0})->Args({15, 1})->Args({25, 0})->Args({25, 1})->Unit(benchmark::kMillisecond);

void BM_Interpolate(benchmark::State& state) {
    const auto formulas = formula_corpus(50, 2024, static_cast<std::uint64_t>(state.range(0)));
    InterpConfig cfg;
    cfg.mode = state.range(1) ? InterpMode::Greedy : InterpMode::Full;
    for (auto _ : state)
        for (Formula f : formulas) {
            benchmark::DoNotOptimize(exists_p("p", f, cfg));
            benchmark::DoNotOptimize(forall_p("p", f, cfg));
        }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(formulas.size()));
}
BENCHMARK(BM_Interpolate)->Args({10, 0})->Args({10, 1})->Args({15, 0})->Args({15, 1})->Unit(benchmark::kMillisecond);

void BM_VerifyInterpolant(benchmark::State& state) {
    const auto formulas = formula_corpus(20, 2024, 15);
    for (auto _ : state) {
        Prover prover;
        for (Formula f : formulas)
            benchmark::DoNotOptimize(verify_interpolant("p", f, InterpConfig{}, VerifyBudget{}, prover));
    }
}
BENCHMARK(BM_VerifyInterpolant)->Unit(benchmark::kMillisecond);

void BM_CountermodelSearch(benchmark::State& state) {
    const Sequent s = parse_sequent("=> p -> box p");
    const auto worlds = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(countermodel_search(s, worlds));
}
BENCHMARK(BM_CountermodelSearch)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

void BM_ModelEvaluation(benchmark::State& state) {
    const auto formulas = formula_corpus(100, 3, 15);
    std::vector<FiniteModel> models;
    for_each_model({"p", "q", "r"}, 3, [&](const FiniteModel& m) {
        models.push_back(m);
        return models.size() < 200;
    });
    for (auto _ : state)
        for (const FiniteModel& m : models) {
            ModelEvaluator ev(m);
            for (Formula f : formulas)
                benchmark::DoNotOptimize(ev.truth(f));
        }
}
BENCHMARK(BM_ModelEvaluation)->Unit(benchmark::kMillisecond);

void BM_AlgebraEntailment(benchmark::State& state) {
    const auto& algebras = enumerate_km_algebras(5);
    const auto formulas = formula_corpus(100, 4, 12);
    for (auto _ : state)
        for (Formula f : formulas)
            benchmark::DoNotOptimize(entails_on(algebras, {}, f));
}
BENCHMARK(BM_AlgebraEntailment)->Unit(benchmark::kMillisecond);

void BM_HilbertCheck(benchmark::State& state) {
    const auto& fixtures = hilbert_fixtures();
    for (auto _ : state)
        for (const HFixture& fx : fixtures)
            benchmark::DoNotOptimize(check_hproof(fx.proof));
}
BENCHMARK(BM_HilbertCheck);

} // namespace

BENCHMARK_MAIN();
