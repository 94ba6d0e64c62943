#include "osp/qtm.hpp"

#include <Eigen/Eigenvalues>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>

namespace osp {

namespace {

constexpr int kParity[3] = {1, 0, 1};
constexpr int kSz[3] = {1, 0, -1};
constexpr double kAlpha[3][3] = {{0, 0, 1}, {0, 1, 0}, {-1, 0, 0}};
constexpr double kAlphaInv[3][3] = {{0, 0, -1}, {0, 1, 0}, {1, 0, 0}};

long ipow3(int n)
{
    long r = 1;
    while (n-- > 0) r *= 3;
    return r;
}

// digit s of a base-3 configuration, site 0 most significant
int digit(long config, int s, int N)
{
    for (int k = N - 1; k > s; --k) config /= 3;
    return static_cast<int>(config % 3);
}

using Local = std::array<Eigen::Matrix3cd, 9>; // [a'*3 + a] -> auxiliary 3x3 block

// L[a',a](j',j) = M[(a',j'),(a,j)]
Local split(const Matrix9cd& m)
{
    Local out;
    for (int ap = 0; ap < 3; ++ap)
        for (int a = 0; a < 3; ++a)
            for (int jp = 0; jp < 3; ++jp)
                for (int j = 0; j < 3; ++j) out[3 * ap + a](jp, j) = m(3 * ap + jp, 3 * a + j);
    return out;
}

std::vector<Local> column(const ModelParams& p, cplx v)
{
    std::vector<Local> ls;
    const Local even = split(r_matrix(p.u - I * v));
    // r_tilde is stored with the physical index first, matching split()
    const Local odd = split(r_tilde(p.u + I * v));
    for (int m = 0; m < p.N / 2; ++m) {
        ls.push_back(even);
        ls.push_back(odd);
    }
    return ls;
}

Eigen::MatrixXcd assemble(const std::vector<Local>& ls, const std::vector<long>& basis, int N)
{
    const long d = static_cast<long>(basis.size());
    std::vector<std::vector<int>> dig(d, std::vector<int>(N));
    for (long i = 0; i < d; ++i)
        for (int s = 0; s < N; ++s) dig[i][s] = digit(basis[i], s, N);
    Eigen::MatrixXcd t(d, d);
    for (long r = 0; r < d; ++r) {
        for (long c = 0; c < d; ++c) {
            Eigen::Matrix3cd m = ls[0][3 * dig[r][0] + dig[c][0]];
            for (int s = 1; s < N && !m.isZero(0.0); ++s) m = m * ls[s][3 * dig[r][s] + dig[c][s]];
            t(r, c) = m.trace();
        }
    }
    return t;
}

std::vector<cplx> dense_eigenvalues(const Eigen::MatrixXd& a)
{
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

// Real input takes the real Schur path, several times cheaper than the complex one.
std::vector<cplx> dense_eigenvalues(const Eigen::MatrixXcd& a)
{
    if (a.imag().isZero(0.0)) return dense_eigenvalues(Eigen::MatrixXd(a.real()));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

std::vector<cplx> sorted_by_modulus(std::vector<cplx> out)
{
    std::stable_sort(out.begin(), out.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
    return out;
}

} // namespace

Matrix9cd graded_permutation()
{
    Matrix9cd m = Matrix9cd::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) m(3 * a + b, 3 * b + a) = (kParity[a] && kParity[b]) ? -1.0 : 1.0;
    return m;
}

Matrix9cd plain_permutation()
{
    Matrix9cd m = Matrix9cd::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) m(3 * a + b, 3 * b + a) = 1.0;
    return m;
}

Matrix9cd e_operator()
{
    Matrix9cd m;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) m(3 * a + b, 3 * c + d) = kAlpha[a][b] * kAlphaInv[c][d];
    return m;
}

Matrix9cd r_check(cplx v)
{
    if (std::abs(v - 1.5) < 1e-14) throw PoleError("Rcheck: pole at v = 3/2");
    return Matrix9cd::Identity() + v * graded_permutation() - (v / (v - 1.5)) * e_operator();
}

Matrix9cd r_matrix(cplx v) { return plain_permutation() * r_check(v); }

Matrix9cd r_tilde(cplx v)
{
    // R is indexed [(j,a),(j',a')]; transpose in j, then reorder to [(a,j),(a',j')]
    const Matrix9cd r = r_matrix(v);
    Matrix9cd out;
    for (int j = 0; j < 3; ++j)
        for (int a = 0; a < 3; ++a)
            for (int jp = 0; jp < 3; ++jp)
                for (int ap = 0; ap < 3; ++ap) out(3 * a + j, 3 * ap + jp) = r(3 * jp + a, 3 * j + ap);
    return out;
}

double braid_residual(cplx w, cplx wp)
{
    using M27 = Eigen::Matrix<cplx, 27, 27>;
    const Eigen::Matrix3cd id = Eigen::Matrix3cd::Identity();
    auto r12 = [&](cplx x) {
        const Matrix9cd r = r_check(x);
        M27 m = M27::Zero();
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j) m.block<3, 3>(3 * i, 3 * j) = r(i, j) * id;
        return m;
    };
    auto r23 = [&](cplx x) {
        const Matrix9cd r = r_check(x);
        M27 m = M27::Zero();
        for (int k = 0; k < 3; ++k) m.block<9, 9>(9 * k, 9 * k) = r;
        return m;
    };
    const M27 lhs = r23(w) * r12(w + wp) * r23(wp);
    const M27 rhs = r12(wp) * r23(w + wp) * r12(w);
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

int staggered_charge(long config, int N)
{
    int q = 0;
    for (int s = N - 1; s >= 0; --s) {
        q += ((s % 2 == 0) ? 1 : -1) * kSz[config % 3];
        config /= 3;
    }
    return q;
}

QtmOperator build_qtm(const ModelParams& p, cplx v, int dense_limit)
{
    if (p.N > dense_limit) throw std::invalid_argument("Trotter number exceeds the dense limit");
    QtmOperator op{p, v, {}, {}};
    const long dim = ipow3(p.N);
    op.basis.resize(dim);
    for (long i = 0; i < dim; ++i) op.basis[i] = i;
    op.matrix = assemble(column(p, v), op.basis, p.N);
    return op;
}

QtmOperator build_qtm_sector(const ModelParams& p, cplx v, int charge)
{
    QtmOperator op{p, v, {}, {}};
    const long dim = ipow3(p.N);
    for (long i = 0; i < dim; ++i)
        if (staggered_charge(i, p.N) == charge) op.basis.push_back(i);
    op.matrix = assemble(column(p, v), op.basis, p.N);
    return op;
}

std::vector<cplx> top_eigenvalues(const QtmOperator& op, int count)
{
    if (count > op.matrix.rows()) throw std::invalid_argument("count exceeds dimension");
    auto ev = sorted_by_modulus(dense_eigenvalues(op.matrix));
    ev.resize(count);
    return ev;
}

std::vector<cplx> qtm_spectrum_top(const ModelParams& p, cplx v, int count)
{
    std::vector<cplx> all;
    for (int q = -p.N; q <= p.N; ++q) {
        const QtmOperator op = build_qtm_sector(p, v, q);
        if (op.basis.empty()) continue;
        const int take = std::min<int>(count, op.matrix.rows());
        const auto ev = top_eigenvalues(op, take);
        all.insert(all.end(), ev.begin(), ev.end());
    }
    std::stable_sort(all.begin(), all.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
    all.resize(std::min<size_t>(all.size(), count));
    return all;
}

namespace {

// Two-site density P^g + (2/3) E, real.
Eigen::Matrix<double, 9, 9> bond_density()
{
    return (graded_permutation() + (2.0 / 3.0) * e_operator()).real();
}

} // namespace

Eigen::MatrixXd hamiltonian_matrix(int L, double J)
{
    const long dim = ipow3(L);
    const auto h2 = bond_density();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<long> pw(L);
    for (int s = 0; s < L; ++s) pw[s] = ipow3(L - 1 - s);
    for (long c = 0; c < dim; ++c) {
        for (int j = 0; j < L; ++j) {
            const int jj = (j + 1) % L;
            const int a = (c / pw[j]) % 3, b = (c / pw[jj]) % 3;
            for (int row = 0; row < 9; ++row) {
                const double x = h2(row, 3 * a + b);
                if (x == 0.0) continue;
                const long r = c + (row / 3 - a) * pw[j] + (row % 3 - b) * pw[jj];
                h(r, c) += J * x;
            }
        }
    }
    return h;
}

std::vector<cplx> hamiltonian_spectrum(int L, double J)
{
    if (L < 2 || L > 8) throw std::invalid_argument("chain length must lie in [2, 8]");
    static std::mutex mu;
    static std::map<std::pair<int, double>, std::vector<cplx>> cache;
    {
        std::lock_guard lk(mu);
        if (auto it = cache.find({L, J}); it != cache.end()) return it->second;
    }
    const long dim = ipow3(L);
    const auto h2 = bond_density();
    std::vector<long> pw(L);
    for (int s = 0; s < L; ++s) pw[s] = ipow3(L - 1 - s);
    // block by total Sz, which the bond density conserves
    std::map<int, std::vector<long>> blocks;
    for (long c = 0; c < dim; ++c) {
        int sz = 0;
        for (int s = 0; s < L; ++s) sz += kSz[(c / pw[s]) % 3];
        blocks[sz].push_back(c);
    }
    std::vector<cplx> energies;
    for (const auto& [sz, states] : blocks) {
        const long d = static_cast<long>(states.size());
        std::map<long, long> pos;
        for (long k = 0; k < d; ++k) pos[states[k]] = k;
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
        for (long k = 0; k < d; ++k) {
            const long c = states[k];
            for (int j = 0; j < L; ++j) {
                const int jj = (j + 1) % L;
                const int a = (c / pw[j]) % 3, b = (c / pw[jj]) % 3;
                for (int row = 0; row < 9; ++row) {
                    const double x = h2(row, 3 * a + b);
                    if (x == 0.0) continue;
                    const long r = c + (row / 3 - a) * pw[j] + (row % 3 - b) * pw[jj];
                    h(pos.at(r), k) += J * x;
                }
            }
        }
        const auto ev = dense_eigenvalues(h);
        energies.insert(energies.end(), ev.begin(), ev.end());
    }
    std::lock_guard lk(mu);
    cache[{L, J}] = energies;
    return energies;
}

double hamiltonian_free_energy(int L, double beta, double J)
{
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    const std::vector<cplx> energies = hamiltonian_spectrum(L, J);
    double e0 = energies.front().real();
    for (const auto& e : energies) e0 = std::min(e0, e.real());
    cplx z = 0.0;
    for (const auto& e : energies) z += std::exp(-beta * (e - e0));
    if (std::abs(z.imag()) > 1e-8 * std::abs(z)) throw std::runtime_error("partition function is not real");
    return -(std::log(z.real()) - beta * e0) / (L * beta);
}

} // namespace osp
