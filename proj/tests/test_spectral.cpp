#include "fixtures.hpp"

#include "osp/fusion.hpp"
#include "osp/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace osp;
using osp::test::rel;
using osp::test::solved;

TEST_CASE("phi vanishes at its root")
{
    const ModelParams p{-1.0, 0.4, 4, 0.1};
    CHECK(std::abs(phi(-I * 0.1, 1, p)) < 1e-15);
}

TEST_CASE("phi direct substitution")
{
    const ModelParams p{-1.0, 0.2, 2, 0.1};
    CHECK(std::abs(phi(0.0, 1, p) - cplx(0.0, 0.1)) < 1e-15);
}

TEST_CASE("phi conjugate pair is positive real on the real axis")
{
    for (int N : {2, 4, 6, 12}) {
        const ModelParams p{-1.0, 0.05 * N, N, 0.05};
        for (double v : {-2.3, 0.0, 0.7, 5.1}) {
            const cplx pr = phi(v, 1, p) * phi(v, -1, p);
            CHECK(std::abs(pr.imag()) < 1e-12 * std::abs(pr));
            CHECK(pr.real() == doctest::Approx(std::pow(v * v + 0.0025, N / 2)).epsilon(1e-12));
        }
    }
}

TEST_CASE("q_eval examples")
{
    BetheState empty{4, {}};
    CHECK(q_eval(empty, cplx(0.3, -1.2)) == cplx(1.0, 0.0));
    BetheState s{4, {I, -I}};
    CHECK(std::abs(q_eval(s, 1.0) - 2.0) < 1e-15);
    CHECK(std::abs(q_eval(s, I)) == 0.0);
}

TEST_CASE("boxes reduce to vacuum parts without roots")
{
    const ModelParams p = ModelParams::from_u(4, 0.05);
    BetheState s{4, {}};
    for (cplx v : {cplx(0.3, 0.1), cplx(-1.0, 0.4)})
        for (Box a : {Box::One, Box::Zero, Box::OneBar}) CHECK(rel(box_eval(a, v, s, p), psi_eval(a, v, s, p)) < 1e-14);
}

TEST_CASE("boxes agree with a term-by-term re-evaluation at N=2")
{
    const ModelParams p = ModelParams::from_u(2, 0.1);
    const BetheState& s = solved(1, 2, 0.1);
    REQUIRE(s.n() == 2);
    const double u = 0.1;
    // N/2 = 1: phi_+(v) = v + iu, phi_-(v) = v - iu
    auto fp = [&](cplx v) { return v + I * u; };
    auto fm = [&](cplx v) { return v - I * u; };
    auto Q = [&](cplx v) {
        cplx r = 1.0;
        for (int j = 0; j < s.n(); ++j) r = r * (v - s.roots[j]);
        return r;
    };
    const cplx v = 0.3;
    const double sg = (s.N - s.n()) % 2 == 0 ? 1.0 : -1.0;
    const cplx b1 = sg * fp(v) * fm(v + I) * fp(v - 0.5 * I) / fp(v - 1.5 * I) * Q(v - 0.5 * I) / Q(v + 0.5 * I);
    const cplx b0 = fp(v) * fm(v) * Q(v) * Q(v + 1.5 * I) / (Q(v + 0.5 * I) * Q(v + I));
    const cplx b2 = sg * fm(v) * fp(v - I) * fm(v + 0.5 * I) / fm(v + 1.5 * I) * Q(v + 2.0 * I) / Q(v + I);
    CHECK(rel(box_eval(Box::One, v, s, p), b1) < 1e-12);
    CHECK(rel(box_eval(Box::Zero, v, s, p), b0) < 1e-12);
    CHECK(rel(box_eval(Box::OneBar, v, s, p), b2) < 1e-12);
}

TEST_CASE("box residues cancel on Bethe roots at N=4")
{
    for (int k : {1, 2}) {
        const ModelParams p = ModelParams::from_u(4, 0.05);
        const BetheState& s = solved(k, 4);
        for (const auto& x : s.roots) {
            const cplx z0 = x - 0.5 * I;
            const double r = 1e-3;
            // residue = r * mean of f(z0 + r e^{it}) e^{it}
            cplx res = 0.0, scale = 0.0;
            const int K = 64;
            for (int j = 0; j < K; ++j) {
                const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / K);
                cplx b[3];
                boxes_raw(z0 + r * e, s, p, b);
                res += (b[0] + b[1]) * e;
                scale += std::abs(b[0]) + std::abs(b[1]);
            }
            res *= r / K;
            CHECK(std::abs(res) < 1e-9 * (r * std::abs(scale) / K));
        }
    }
}

TEST_CASE("t1 is the sum of the three boxes away from poles")
{
    const ModelParams p = ModelParams::from_u(6, 0.05);
    const BetheState& s = solved(1, 6);
    for (cplx v : {cplx(0.15, 0.0), cplx(0.8, -0.2), cplx(-2.1, 0.35)}) {
        const cplx sum = box_eval(Box::One, v, s, p) + box_eval(Box::Zero, v, s, p) + box_eval(Box::OneBar, v, s, p);
        CHECK(rel(t1_eval(v, s, p), sum) < 1e-12);
    }
}

TEST_CASE("t1 is real-analytic and even on symmetric states")
{
    for (int k : {1, 2}) {
        const ModelParams p = ModelParams::from_u(6, 0.05);
        const BetheState& s = solved(k, 6);
        for (cplx v : {cplx(0.4, 0.2), cplx(-1.3, -0.45), cplx(2.2, 0.1)}) {
            CHECK(rel(t1_eval(std::conj(v), s, p), std::conj(t1_eval(v, s, p))) < 1e-10);
            CHECK(rel(t1_eval(-v, s, p), t1_eval(v, s, p)) < 1e-10);
        }
    }
}

TEST_CASE("cleared T1 has degree exactly 2N")
{
    for (int N : {4, 6}) {
        const ModelParams p = ModelParams::from_u(N, 0.05);
        const BetheState& s = solved(1, N);
        // interpolate through 2N+2 points on a circle; the top coefficient must vanish
        const int K = 2 * N + 2;
        const double R = 4.0;
        std::vector<cplx> f(K);
        for (int j = 0; j < K; ++j) f[j] = dvf_polynomial(1, R * std::polar(1.0, 2.0 * std::numbers::pi * j / K), s, p);
        auto coeff = [&](int d) {
            cplx c = 0.0;
            for (int j = 0; j < K; ++j) c += f[j] * std::polar(1.0, -2.0 * std::numbers::pi * d * j / K);
            return c / (static_cast<double>(K) * std::pow(R, d));
        };
        const cplx top = coeff(2 * N), over = coeff(2 * N + 1);
        CHECK(std::abs(top) > 1.0);
        CHECK(std::abs(over) < 1e-10 * std::abs(top));
    }
}

TEST_CASE("singular set separates genuine vacuum poles")
{
    const ModelParams p = ModelParams::from_u(4, 0.05);
    const BetheState& s = solved(1, 4);
    for (int m = 1; m <= 3; ++m) {
        const SingularSet ss = singular_set(m, s, p);
        REQUIRE(ss.genuine.size() == 2);
        CHECK(std::abs(ss.genuine[0] - I * (0.5 * (m + 2) - 0.05)) < 1e-15);
        for (const auto& z : ss.removable) CHECK(std::abs(z - ss.genuine[0]) > 1e-12);
    }
    CHECK_THROWS_AS(t1_eval(I * 1.45, s, p), PoleError);
}

TEST_CASE("parameter constructors")
{
    const ModelParams p = ModelParams::from_beta(-1.0, 0.6, 12);
    CHECK(p.u == doctest::Approx(0.05));
    CHECK(ModelParams::from_u(12, 0.05).beta == doctest::Approx(0.6));
    CHECK_THROWS(ModelParams::from_beta(-1.0, 1.0, 5));
    CHECK_THROWS(ModelParams::from_beta(-1.0, -1.0, 4));
    CHECK(ipow(cplx(1.0, 1.0), 4) == cplx(-4.0, 0.0));
}
