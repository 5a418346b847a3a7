#include <benchmark/benchmark.h>

#include "drslf/drslf.hpp"

using namespace drslf;

namespace {

struct Problem {
    IndexedDataset data;
    FactorState x;
    Hyperparams h;
};

Problem make_problem(std::size_t users, std::size_t services, std::size_t rank) {
    Problem p;
    const auto synth = synth_lowrank(users, services, rank, 0.05, 0.01, 7);
    p.data = build_index(synth.data, Role::train);
    p.h.f = rank;
    p.x = init_factors(users, services, p.h);
    return p;
}

void BM_GnHvp(benchmark::State& state) {
    const Problem p = make_problem(339, 1000, static_cast<std::size_t>(state.range(0)));
    CurvatureContext ctx(p.x, p.data, p.h);
    ParamVector v(p.x.shape());
    v.fill(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(ctx.gn_hvp(v));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(p.data.size()));
}
BENCHMARK(BM_GnHvp)->Arg(5)->Arg(20);

void BM_DampedHvp(benchmark::State& state) {
    const Problem p = make_problem(339, 1000, static_cast<std::size_t>(state.range(0)));
    CurvatureContext ctx(p.x, p.data, p.h);
    ParamVector v(p.x.shape());
    ParamVector out(p.x.shape());
    v.fill(0.5);
    for (auto _ : state) {
        ctx.damped_hvp(v, out);
        benchmark::DoNotOptimize(out.values().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(p.data.size()));
}
BENCHMARK(BM_DampedHvp)->Arg(5)->Arg(20);

void BM_Gradient(benchmark::State& state) {
    const Problem p = make_problem(339, 1000, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(gradient(p.x, p.data, p.h));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(p.data.size()));
}
BENCHMARK(BM_Gradient)->Arg(5)->Arg(20);

void BM_CgSolve(benchmark::State& state) {
    const Problem p = make_problem(339, 1000, 20);
    CurvatureContext ctx(p.x, p.data, p.h);
    const ParamVector g = gradient(p.x, p.data, p.h);
    const LinearOperator op = [&ctx](const ParamVector& in, ParamVector& out) { ctx.damped_hvp(in, out); };
    const auto iters = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(cg_solve(op, g, 1e-300, iters));
}
BENCHMARK(BM_CgSolve)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
