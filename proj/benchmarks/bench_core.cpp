#include "osp/bae.hpp"
#include "osp/fusion.hpp"
#include "osp/grid.hpp"
#include "osp/qtm.hpp"
#include "osp/tba.hpp"

#include <benchmark/benchmark.h>

using namespace osp;

static void BM_SolveState(benchmark::State& st)
{
    const ModelParams p = ModelParams::from_u(static_cast<int>(st.range(0)), 0.05);
    for (auto _ : st) benchmark::DoNotOptimize(solve_state(1, p));
}
BENCHMARK(BM_SolveState)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_DvfEval(benchmark::State& st)
{
    const ModelParams p = ModelParams::from_u(12, 0.05);
    const BetheState s = solve_state(1, p);
    const int m = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(dvf_eval(m, cplx(0.3, 0.1), s, p));
}
BENCHMARK(BM_DvfEval)->DenseRange(1, 5);

static void BM_BuildQtm(benchmark::State& st)
{
    const ModelParams p = ModelParams::from_u(static_cast<int>(st.range(0)), 0.05);
    for (auto _ : st) benchmark::DoNotOptimize(build_qtm_sector(p, 0.0, 0));
}
BENCHMARK(BM_BuildQtm)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_ConvolveK(benchmark::State& st)
{
    const Grid g(30.0, 0.05);
    const Convolver conv(g);
    const Eigen::ArrayXd f = 1.0 + 1.0 / g.v.cosh();
    for (auto _ : st) benchmark::DoNotOptimize(conv.convolve_K(f, 1.0));
}
BENCHMARK(BM_ConvolveK);

static void BM_SolveTba(benchmark::State& st)
{
    const double beta = st.range(0) / 10.0;
    for (auto _ : st) benchmark::DoNotOptimize(solve_tba(TbaConfig{}, beta, -1.0));
}
BENCHMARK(BM_SolveTba)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK_MAIN();
