#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "cdmn/compiler.hpp"
#include "cdmn/grounding.hpp"
#include "cdmn/oracle.hpp"
#include "cdmn/solver.hpp"

namespace {

const char* const kModels[] = {"map_coloring", "who_killed_agatha", "monkey_business", "balanced_assignment",
                               "burger"};

std::string source(int i) {
    std::ifstream in(std::string(CDMN_CORPUS_DIR) + "/" + kModels[i] + ".cdmn");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void set_name(benchmark::State& state) { state.SetLabel(kModels[state.range(0)]); }

void BM_Parse(benchmark::State& state) {
    const std::string text = source(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cdmn::parse_model(text));
    set_name(state);
}

void BM_Compile(benchmark::State& state) {
    const std::string text = source(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cdmn::compile_source(text));
    set_name(state);
}

void BM_Ground(benchmark::State& state) {
    const cdmn::CompiledModel m = cdmn::compile_source(source(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(cdmn::ground(m));
    set_name(state);
}

void BM_Solve(benchmark::State& state) {
    const cdmn::CompiledModel m = cdmn::compile_source(source(static_cast<int>(state.range(0))));
    const cdmn::GroundProblem gp = cdmn::ground(m);
    cdmn::SolveOptions options;
    options.max_models = 0;
    options.verify = false;
    std::size_t models = 0;
    for (auto _ : state) models = cdmn::solve(gp, options).models.size();
    state.counters["models"] = static_cast<double>(models);
    set_name(state);
}

// Solver against exhaustive enumeration on the same model.
void BM_BruteForce(benchmark::State& state) {
    const cdmn::CompiledModel m = cdmn::compile_source(source(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(cdmn::brute_force_models(m.theory, m.structure));
    set_name(state);
}

void BM_FullScaleFirstIncumbent(benchmark::State& state) {
    std::ifstream in(std::string(CDMN_CORPUS_DIR) + "/balanced_assignment_full.cdmn");
    std::ostringstream buf;
    buf << in.rdbuf();
    const cdmn::CompiledModel m = cdmn::compile_source(buf.str());
    const cdmn::GroundProblem gp = cdmn::ground(m);
    double objective = 0;
    for (auto _ : state) {
        cdmn::SolveOptions options;
        options.verify = false;
        cdmn::SolveResult r = cdmn::solve(gp, options, [](const cdmn::ModelResult&) { return false; });
        if (r.objective) objective = static_cast<double>(r.objective->number().num());
    }
    state.counters["objective"] = objective;
}

}  // namespace

BENCHMARK(BM_Parse)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Compile)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Ground)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForce)->Arg(0)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FullScaleFirstIncumbent)->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
