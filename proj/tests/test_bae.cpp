#include "fixtures.hpp"

#include "osp/bae.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace osp;
using osp::test::solved;

namespace {

double multiset_distance(const BetheState& a, const BetheState& b)
{
    double d = 0.0;
    for (const auto& x : a.roots) {
        double best = 1e300;
        for (const auto& y : b.roots) best = std::min(best, std::abs(x - y));
        d = std::max(d, best);
    }
    return d;
}

} // namespace

TEST_CASE("solved states satisfy the cleared Bethe equations")
{
    for (int k : {1, 2})
        for (int N : {4, 6, 8}) {
            const ModelParams p = ModelParams::from_u(N, 0.05);
            const BetheState& s = solved(k, N);
            for (int j = 0; j < s.n(); ++j) {
                const cplx v = s.roots[j];
                const double scale = std::abs(phi(v + 0.5 * I, -1, p) * phi(v - I, 1, p) * q_eval(s, v + 0.5 * I)
                                              * q_eval(s, v - I));
                CHECK(std::abs(bae_residual(s, j, p)) < 1e-12 * scale);
            }
            CHECK(max_ratio_residual(s, p) < 1e-11);
        }
}

TEST_CASE("largest sector has n = N and sigma = +1")
{
    for (int N : {2, 4, 6, 12}) {
        const BetheState& s = solved(1, N);
        CHECK(s.n() == N);
        CHECK(s.sigma() == 1);
    }
}

TEST_CASE("N=2 largest state is found by an exhaustive grid search")
{
    const ModelParams p = ModelParams::from_u(2, 0.1);
    const BetheState& ref = solved(1, 2, 0.1);
    // symmetric two-root ansatz {a + i(3/4 + b), -a + i(3/4 - b)}
    auto state = [](double a, double b) { return BetheState{2, {cplx(a, 0.75 + b), cplx(-a, 0.75 - b)}}; };
    auto score = [&](double a, double b) {
        const BetheState s = state(a, b);
        if (s.min_separation() < 1e-6) return 1e300;
        try {
            return max_ratio_residual(s, p);
        } catch (...) {
            return 1e300;
        }
    };
    const double h = 0.01;
    const int na = 300, nb = 150;
    std::vector<double> g((2 * na + 1) * (2 * nb + 1));
    auto at = [&](int i, int j) -> double& { return g[(i + na) * (2 * nb + 1) + (j + nb)]; };
    for (int i = -na; i <= na; ++i)
        for (int j = -nb; j <= nb; ++j) at(i, j) = score(i * h, j * h);
    bool found = false;
    int minima = 0;
    for (int i = -na + 1; i < na && !found; ++i)
        for (int j = -nb + 1; j < nb && !found; ++j) {
            const double c = at(i, j);
            if (!(c < 1.0)) continue;
            bool local = true;
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj)
                    if ((di || dj) && at(i + di, j + dj) < c) local = false;
            if (!local) continue;
            ++minima;
            SolveReport rep;
            const BetheState s = solve_newton(state(i * h, j * h), p, 1e-13, 50, &rep);
            if (rep.converged && multiset_distance(s, ref) < 1e-9) found = true;
        }
    CHECK(minima > 0);
    CHECK(found);
}

TEST_CASE("root patterns of the three reference states")
{
    const std::tuple<int, int, const char*> cases[] = {
        {1, 12, "6 two-strings"}, {2, 12, "4 two-strings + 1 three-string"}, {2, 14, "6 two-strings + 1 one-string"}};
    for (const auto& [k, N, pattern] : cases) {
        const BetheState& s = solved(k, N);
        CAPTURE(N);
        CAPTURE(k);
        CHECK(describe_pattern(classify_strings(s)) == pattern);
        CHECK(symmetry_residual(s) < 1e-9);
        CHECK(max_ratio_residual(s, ModelParams::from_u(N, 0.05)) < 1e-10);
    }
}

TEST_CASE("Newton is idempotent at a solution")
{
    const ModelParams p = ModelParams::from_u(12, 0.05);
    const BetheState& s = solved(1, 12);
    SolveReport rep;
    const BetheState t = solve_newton(s, p, 1e-12, 20, &rep);
    CHECK(rep.converged);
    CHECK(t.n() == s.n());
    CHECK(multiset_distance(s, t) < 1e-10);
}

TEST_CASE("continuation result is independent of the step size")
{
    const ModelParams p = ModelParams::from_u(4, 0.05);
    ContinuationOptions fine;
    fine.growth = 1.03;
    fine.u_start = 1e-4;
    for (int k : {1, 2}) {
        const BetheState a = solved(k, 4);
        const BetheState b = solve_state(k, p, fine);
        CHECK(multiset_distance(a, b) < 1e-10);
        CHECK(multiset_distance(b, a) < 1e-10);
    }
}

TEST_CASE("solver is deterministic")
{
    const ModelParams p = ModelParams::from_u(8, 0.05);
    const BetheState a = solve_state(2, p), b = solve_state(2, p);
    REQUIRE(a.n() == b.n());
    for (int j = 0; j < a.n(); ++j) CHECK(a.roots[j] == b.roots[j]);
}

TEST_CASE("sector is preserved and seeds are well formed")
{
    for (int k : {1, 2}) {
        const ModelParams p = ModelParams::from_u(10, 0.05);
        const BetheState seed = seed_state(k, p);
        const BetheState s = solve_state(k, p);
        CHECK(seed.n() == s.n());
        CHECK(seed.N == 10);
    }
    CHECK_THROWS(seed_state(3, ModelParams::from_u(4, 0.05)));
}

TEST_CASE("symmetrize is a projection")
{
    const BetheState& s = solved(2, 12);
    const BetheState t = symmetrize(s);
    CHECK(symmetry_residual(t) < 1e-14);
    CHECK(multiset_distance(s, t) < 1e-9);
}

TEST_CASE("string classification groups by real part")
{
    BetheState s{6, {cplx(1.0, 0.25), cplx(1.0, 1.25), cplx(-1.0, 0.25), cplx(-1.0, 1.25), cplx(0.0, 0.75)}};
    const auto groups = classify_strings(s);
    CHECK(describe_pattern(groups) == "2 two-strings + 1 one-string");
}
