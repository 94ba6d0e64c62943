#include "osp/tba.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace osp {

namespace {

// Decay exponent of the closure variable; z = (exp(p d) - 1)/p tames the
// asymmetry of d = ln Y_M - ln y_M between the driven centre and the tails.
constexpr double kClosurePower = 0.25;
// Depth of the backward continued-fraction recursion for the tail propagator.
constexpr int kTailDepth = 20000;

Eigen::ArrayXd log1p_exp(const Eigen::ArrayXd& x)
{
    return x.unaryExpr([](double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); });
}

// Transfer function carrying a small deviation of Y_M to Y_{M+1} in the
// linearized constant-Y hierarchy. With a_m = m(m+3)/((m+1)(m+2)) and
// b_m = 2/((m+1)(m+2)) the decaying solution obeys
// r_m = a_m / (2 cosh(k/2) - b_{m+1} - a_{m+2} r_{m+1}).
Eigen::ArrayXcd tail_propagator(const Convolver& conv, int M)
{
    const Eigen::ArrayXd k = conv.frequencies();
    auto a = [](double m) { return m * (m + 3.0) / ((m + 1.0) * (m + 2.0)); };
    auto b = [](double m) { return 2.0 / ((m + 1.0) * (m + 2.0)); };
    Eigen::ArrayXd c2 = 2.0 * (0.5 * k).cosh();
    Eigen::ArrayXd r = (-0.5 * k).exp();
    for (int m = kTailDepth; m >= M; --m) r = a(m) / ((c2 - b(m + 1)) - a(m + 2) * r);
    return r.cast<std::complex<double>>();
}

} // namespace

void TbaConfig::validate() const
{
    if (m_max < 2) throw std::invalid_argument("m_max must be >= 2");
    if (V < 10.0) throw std::invalid_argument("grid half-width must be >= 10");
    if (!(h > 0.0) || h > 0.1) throw std::invalid_argument("grid step must lie in (0, 0.1]");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (!(damping > 0.0) || damping > 1.0) throw std::invalid_argument("damping must lie in (0, 1]");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
    if (trotter_N < 0 || trotter_N % 2 != 0) throw std::invalid_argument("trotter_N must be 0 or even");
}

double y_plateau(int m, int k)
{
    if (m <= 0) return 0.0;
    if (k == 1) return 0.5 * m * (m + 3);
    const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
    return 0.25 * (sgn * (2 * m + 3) - 3);
}

double finite_n_driving(double v, int N, double u, int J_sign)
{
    if (N < 2 || N % 2 != 0) throw std::invalid_argument("Trotter number must be even");
    if (J_sign == 0) throw std::invalid_argument("J sign must be nonzero");
    // -/+ (N/2) ln[tanh(pi/2 (v + i a)) tanh(pi/2 (v - i a))] with a = 1/2 -/+ u.
    // Using |tanh(x + iy)|^2 = (cosh 2x - cos 2y)/(cosh 2x + cos 2y), both branches
    // reduce to -N artanh(sin(pi u) / cosh(pi v)); u carries the sign of -J.
    return -N * std::atanh(std::sin(std::numbers::pi * u) / std::cosh(std::numbers::pi * v));
}

double trotter_driving(double v, double beta, double J) { return std::numbers::pi * beta * J / std::cosh(std::numbers::pi * v); }

TbaSolution solve_tba(const TbaConfig& cfg, double beta, double J)
{
    cfg.validate();
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    const Grid g(cfg.V, cfg.h);
    const Convolver conv(g);
    const int M = cfg.m_max;
    TbaSolution sol;
    sol.k = 1;
    sol.grid = g;
    sol.beta = beta;
    sol.J = J;
    sol.lnY.assign(M, Eigen::ArrayXd());
    for (int m = 1; m <= M; ++m) sol.lnY[m - 1] = Eigen::ArrayXd::Constant(g.size(), std::log(y_plateau(m, 1)));
    const int Nt = cfg.trotter_N;
    const Eigen::ArrayXd drive = g.v.unaryExpr([&](double t) {
        return Nt > 0 ? finite_n_driving(t, Nt, -J * beta / Nt, J < 0 ? -1 : 1) : trotter_driving(t, beta, J);
    });
    Eigen::ArrayXcd rho;
    if (cfg.closure == Closure::Linearized) rho = tail_propagator(conv, M);
    const double p = kClosurePower;

    std::vector<Eigen::ArrayXd> next(M);
    for (int it = 0; it < cfg.max_iter; ++it) {
        std::vector<Eigen::ArrayXd> l1(M), linv(M);
        for (int i = 0; i < M; ++i) {
            l1[i] = log1p_exp(sol.lnY[i]);
            linv[i] = log1p_exp(-sol.lnY[i]);
        }
        Eigen::ArrayXd top;
        if (cfg.closure == Closure::Plateau) {
            top = Eigen::ArrayXd::Constant(g.size(), std::log1p(y_plateau(M + 1, 1)));
        } else {
            const Eigen::ArrayXd d = sol.lnY[M - 1] - std::log(y_plateau(M, 1));
            const Eigen::ArrayXd z = ((p * d).exp() - 1.0) / p;
            const Eigen::ArrayXd z1 = conv.apply_multiplier(z, rho);
            const Eigen::ArrayXd d1 = (1.0 + p * z1).log() / p;
            top = log1p_exp(std::log(y_plateau(M + 1, 1)) + d1);
        }
        double change = 0.0;
        for (int i = 0; i < M; ++i) {
            const int m = i + 1;
            const Eigen::ArrayXd& up = (i + 1 < M) ? l1[i + 1] : top;
            Eigen::ArrayXd t = conv.convolve_K(up, std::log1p(y_plateau(m + 1, 1)))
                               - conv.convolve_K(linv[i], std::log1p(1.0 / y_plateau(m, 1)));
            if (m > 1)
                t += conv.convolve_K(l1[i - 1], std::log1p(y_plateau(m - 1, 1)));
            else
                t += drive;
            change = std::max(change, (t - sol.lnY[i]).abs().maxCoeff());
            next[i] = std::move(t);
        }
        for (int i = 0; i < M; ++i) sol.lnY[i] = cfg.damping * next[i] + (1.0 - cfg.damping) * sol.lnY[i];
        sol.history.push_back(change);
        sol.iterations = it + 1;
        sol.last_change = change;
        if (!std::isfinite(change)) break;
        if (change < cfg.tol) {
            sol.converged = true;
            break;
        }
    }
    sol.sign.assign(M, Eigen::ArrayXd::Ones(g.size()));
    sol.log_eigenvalue = -beta * free_energy(sol, beta, J);
    return sol;
}

double free_energy(const TbaSolution& sol, double beta, double J)
{
    if (sol.k != 1) throw std::invalid_argument("free energy needs the largest-eigenvalue solution");
    if (sol.lnY.empty()) throw std::invalid_argument("empty solution");
    const double c = std::log(3.0); // ln(1 + y_1)
    const double integral = integrate_G(sol.grid, log1p_exp(sol.lnY[0]), c);
    return J * (4.0 * std::numbers::pi / (3.0 * std::sqrt(3.0)) - 1.0) - integral / beta;
}

} // namespace osp
