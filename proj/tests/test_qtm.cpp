#include "fixtures.hpp"

#include "osp/fusion.hpp"
#include "osp/qtm.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace osp;
using osp::test::rel;
using osp::test::solved;

TEST_CASE("Rcheck at zero is the identity")
{
    CHECK((r_check(0.0) - Matrix9cd::Identity()).norm() == 0.0);
}

TEST_CASE("E squared is -E")
{
    const Matrix9cd e = e_operator();
    CHECK((e * e + e).norm() < 1e-15);
}

TEST_CASE("braid relation at random spectral parameters")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int t = 0; t < 10; ++t) {
        const cplx w(d(rng), d(rng)), wp(d(rng), d(rng));
        CHECK(braid_residual(w, wp) < 1e-12 * (1.0 + std::abs(w) + std::abs(wp)) * (1.0 + std::abs(w + wp)));
    }
}

TEST_CASE("QTM dimension and charge conservation")
{
    const ModelParams p = ModelParams::from_u(4, 0.05);
    const QtmOperator op = build_qtm(p, cplx(0.2, 0.0));
    REQUIRE(op.matrix.rows() == 81);
    for (long r = 0; r < 81; ++r)
        for (long c = 0; c < 81; ++c)
            if (staggered_charge(r, 4) != staggered_charge(c, 4)) CHECK(std::abs(op.matrix(r, c)) == 0.0);
    CHECK_THROWS(build_qtm(ModelParams::from_u(12, 0.05), 0.0));
}

TEST_CASE("u = 0 gives largest eigenvalue 3")
{
    for (int N : {2, 4}) {
        const ModelParams p{-1.0, 0.0, N, 0.0};
        const auto ev = top_eigenvalues(build_qtm(p, 0.0), 1);
        CHECK(std::abs(ev[0] - 3.0) < 1e-12);
    }
}

TEST_CASE("QTMs at different v commute")
{
    const ModelParams p = ModelParams::from_u(4, 0.05);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    for (int t = 0; t < 3; ++t) {
        const auto a = build_qtm(p, cplx(d(rng), 0.3 * d(rng))).matrix;
        const auto b = build_qtm(p, cplx(d(rng), 0.3 * d(rng))).matrix;
        CHECK((a * b - b * a).norm() < 1e-11 * a.norm() * b.norm());
    }
}

TEST_CASE("gap and oracle equivalence at N=4")
{
    const ModelParams p = ModelParams::from_u(4, 0.05);
    const auto ev = qtm_spectrum_top(p, 0.0, 2);
    CHECK(std::abs(ev[0].imag()) < 1e-10 * std::abs(ev[0]));
    CHECK(ev[0].real() > 0.0);
    CHECK(std::abs(ev[1] / ev[0]) < 1.0);
    CHECK(rel(ev[0], t1_eval(0.0, solved(1, 4), p)) < 1e-8);
    CHECK(rel(ev[1], dvf_eval(1, 0.0, solved(2, 4), p)) < 1e-7);
}

TEST_CASE("oracle equivalence away from v = 0")
{
    const ModelParams p = ModelParams::from_u(4, 0.05);
    const cplx v(0.37, 0.0);
    const auto ev = qtm_spectrum_top(p, v, 81); // full spectrum
    CHECK(rel(ev[0], t1_eval(v, solved(1, 4), p)) < 1e-8);
    // away from v = 0 the second-sector state drops below other levels
    const cplx t2 = t1_eval(v, solved(2, 4), p);
    double best = 1e300;
    for (const auto& e : ev) best = std::min(best, rel(e, t2));
    CHECK(best < 1e-7);
}

TEST_CASE("largest eigenvalue converges in N")
{
    const double beta = 0.6;
    double prev = 0.0, prev_gap = 1e300;
    for (int N : {4, 6, 8}) {
        const ModelParams p = ModelParams::from_beta(-1.0, beta, N);
        const cplx lam = top_eigenvalues(build_qtm_sector(p, 0.0, 0), 1)[0];
        if (N > 4) {
            const double gap = std::abs(lam.real() - prev);
            CHECK(gap < prev_gap);
            prev_gap = gap;
        }
        prev = lam.real();
    }
}

TEST_CASE("ED high-temperature limit")
{
    for (int L : {2, 3, 4}) CHECK(-1e-6 * hamiltonian_free_energy(L, 1e-6, -1.0) == doctest::Approx(std::log(3.0)).epsilon(1e-5));
}

TEST_CASE("two-site Hamiltonian from two constructions")
{
    const double beta = 0.8, J = -1.0;
    // H = J (h + P h P) on two sites, h = P^g + 2/3 E
    const Eigen::MatrixXd h = (graded_permutation() + (2.0 / 3.0) * e_operator()).real();
    const Eigen::MatrixXd P = plain_permutation().real();
    const Eigen::MatrixXd H = J * (h + P * h * P);
    CHECK((H - hamiltonian_matrix(2, J)).norm() < 1e-14);
    Eigen::EigenSolver<Eigen::MatrixXd> es(H);
    double z = 0.0;
    for (int i = 0; i < 9; ++i) z += std::exp(-beta * es.eigenvalues()[i].real());
    CHECK(hamiltonian_free_energy(2, beta, J) == doctest::Approx(-std::log(z) / (2.0 * beta)).epsilon(1e-12));
}

TEST_CASE("partition function is real and positive")
{
    for (int L : {2, 3, 4}) {
        const Eigen::MatrixXd H = hamiltonian_matrix(L, -1.0);
        Eigen::EigenSolver<Eigen::MatrixXd> es(H);
        std::complex<double> z = 0.0;
        for (long i = 0; i < H.rows(); ++i) z += std::exp(-es.eigenvalues()[i]);
        CHECK(z.real() > 0.0);
        CHECK(std::abs(z.imag()) < 1e-10 * z.real());
        CHECK(std::isfinite(hamiltonian_free_energy(L, 1.0, -1.0)));
    }
}
