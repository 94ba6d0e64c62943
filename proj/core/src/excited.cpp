#include "osp/bae.hpp"
#include "osp/fusion.hpp"
#include "osp/tba.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace osp {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double ln_abs_tt(double v, double x) { return std::log(std::abs(std::tanh(0.5 * kPi * (v - x)) * std::tanh(0.5 * kPi * (v + x)))); }
cd ln_tt(cd z, double x) { return std::log(std::tanh(0.5 * kPi * (z - x)) * std::tanh(0.5 * kPi * (z + x))); }

// ln |1 + s e^l| without overflow
double ln1p_abs(double l, double s)
{
    if (l > 0.0) return l + std::log(std::abs(1.0 + s * std::exp(-std::min(l, 700.0))));
    return std::log(std::abs(1.0 + s * std::exp(l)));
}

struct Excited {
    const TbaConfig& cfg;
    double beta, J;
    int M;
    Grid g;
    Convolver conv;
    Eigen::ArrayXd drive;
    std::vector<Eigen::ArrayXd> lnY;      // last accepted ln|Y_m|
    std::vector<Eigen::ArrayXd> smooth;   // ln|Y_m| minus its tanh terms, warm start
    std::vector<double> x;
    int sweeps = 0;
    double change = 0.0;

    Excited(const TbaConfig& c, double b, double j)
        : cfg(c), beta(b), J(j), M(c.m_max), g(c.V, c.h), conv(g)
    {
        drive = g.v.unaryExpr([&](double t) { return trotter_driving(t, beta, J); });
    }

    // sign of Y_m: (-1)^{[m odd] + #x among x_{m-1}, x_m, x_{m+1} exceeding |v|}
    std::vector<Eigen::ArrayXd> signs(const std::vector<double>& xs) const
    {
        std::vector<Eigen::ArrayXd> out(M, Eigen::ArrayXd(g.size()));
        for (int m = 1; m <= M; ++m) {
            for (int i = 0; i < g.size(); ++i) {
                const double a = std::abs(g.v[i]);
                int e = (m % 2) + (a < xs[m - 1]);
                if (m < M) e += (a < xs[m]);
                if (m >= 2) e += (a < xs[m - 2]);
                out[m - 1][i] = (e % 2 == 0) ? 1.0 : -1.0;
            }
        }
        return out;
    }

    std::vector<Eigen::ArrayXd> tanh_terms(const std::vector<double>& xs) const
    {
        std::vector<Eigen::ArrayXd> out(M, Eigen::ArrayXd(g.size()));
        for (int m = 1; m <= M; ++m) {
            for (int i = 0; i < g.size(); ++i) {
                const double v = g.v[i];
                double t = -ln_abs_tt(v, xs[m - 1]);
                if (m < M) t += ln_abs_tt(v, xs[m]);
                if (m >= 2) t += ln_abs_tt(v, xs[m - 2]);
                out[m - 1][i] = t;
            }
        }
        return out;
    }

    // ln|A_m| = ln|1+Y_{m+1}| + ln|1+Y_{m-1}| - ln|1+1/Y_m|
    std::vector<Eigen::ArrayXd> lnA(const std::vector<Eigen::ArrayXd>& l, const std::vector<Eigen::ArrayXd>& s) const
    {
        std::vector<Eigen::ArrayXd> out(M, Eigen::ArrayXd(g.size()));
        const double top = std::log(std::abs(1.0 + y_plateau(M + 1, 2)));
        for (int m = 1; m <= M; ++m) {
            for (int i = 0; i < g.size(); ++i) {
                const double up = m < M ? ln1p_abs(l[m][i], s[m][i]) : top;
                const double dn = m > 1 ? ln1p_abs(l[m - 2][i], s[m - 2][i]) : 0.0;
                const double own = ln1p_abs(l[m - 1][i], s[m - 1][i]) - l[m - 1][i];
                out[m - 1][i] = up + dn - own;
            }
        }
        return out;
    }

    std::vector<Eigen::ArrayXd> iterate(std::vector<Eigen::ArrayXd> l, const std::vector<double>& xs, double tol)
    {
        const auto s = signs(xs);
        const auto d = tanh_terms(xs);
        for (int it = 0; it < cfg.max_iter; ++it) {
            const auto a = lnA(l, s);
            double ch = 0.0;
            for (int m = 1; m <= M; ++m) {
                Eigen::ArrayXd t = conv.convolve_K(a[m - 1], 2.0 * std::log(std::abs(y_plateau(m, 2)))) + d[m - 1];
                if (m == 1) t += drive;
                ch = std::max(ch, (t - l[m - 1]).abs().maxCoeff());
                l[m - 1] = cfg.damping * t + (1.0 - cfg.damping) * l[m - 1];
            }
            ++sweeps;
            change = ch;
            if (!std::isfinite(ch)) throw std::runtime_error("excited TBA iteration diverged");
            if (ch < tol) break;
        }
        return l;
    }

    // ln Y_m(xx + i/2): half the boundary value of K * ln A plus the principal-value
    // part (kernel pole at i/2), the tanh factors and the phases.
    cd boundary_log(const std::vector<Eigen::ArrayXd>& a, const std::vector<double>& xs, int m, double xx) const
    {
        const Eigen::ArrayXd& f = a[m - 1];
        boost::math::interpolators::cardinal_cubic_b_spline<double> spl(f.data(), f.size(), g.v[0], g.h);
        const double fx = spl(xx);
        double pv = 0.0;
        for (int i = 0; i < g.size(); ++i) {
            const double w = kPi * (xx - g.v[i]);
            pv += std::abs(w) < 1e-10 ? -spl.prime(xx) / kPi : (f[i] - fx) / std::sinh(w);
        }
        pv *= g.h;
        const cd z{xx, 0.5};
        cd val = 0.5 * fx - cd(0.0, 0.5) * pv - ln_tt(z, xs[m - 1]);
        if (m < M) val += ln_tt(z, xs[m]);
        if (m >= 2) val += ln_tt(z, xs[m - 2]);
        if (m == 1) val += cd(0.0, -kPi * beta * J / std::sinh(kPi * xx));
        if (m % 2 == 1) val += cd(0.0, kPi);
        return val;
    }

    // Phase of -Y_m(x_m + i/2) for the free levels, after re-converging Y at these x.
    Eigen::VectorXd residual(const Eigen::VectorXd& xf, const std::vector<double>& pinned, bool keep)
    {
        std::vector<double> xs = pinned;
        for (int i = 0; i < xf.size(); ++i) xs[i] = xf[i];
        const auto d = tanh_terms(xs);
        std::vector<Eigen::ArrayXd> start(M);
        for (int m = 0; m < M; ++m) start[m] = smooth[m] + d[m];
        const auto l = iterate(start, xs, 1e-12);
        const auto a = lnA(l, signs(xs));
        Eigen::VectorXd r(xf.size());
        for (int m = 1; m <= xf.size(); ++m) r[m - 1] = std::arg(-std::exp(boundary_log(a, xs, m, xs[m - 1])));
        if (keep) {
            lnY = l;
            for (int m = 0; m < M; ++m) smooth[m] = l[m] - d[m];
            x = xs;
        }
        return r;
    }
};

} // namespace

std::vector<double> finite_n_real_zeros(int N, double beta, double J, int m_max)
{
    const ModelParams p = ModelParams::from_beta(J, beta, N);
    SolveReport rep;
    const BetheState s = solve_state(2, p, {}, &rep);
    if (!rep.converged) throw std::runtime_error("second-sector BAE did not converge");
    std::vector<double> out;
    for (int m = 1; m <= m_max; ++m) {
        // the positive real zero: probe every local minimum of |D_m T_m| on the axis
        const double step = 0.005;
        std::vector<double> vals;
        for (double v = step; v < 12.0; v += step) vals.push_back(std::abs(dvf_polynomial(m, v, s, p)));
        std::vector<double> found;
        for (size_t i = 1; i + 1 < vals.size(); ++i) {
            if (!(vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1])) continue;
            const double c = step * (i + 1);
            for (const auto& z : find_zeros(m, s, p, {c - 0.0213, c + 0.0187, -0.0171, 0.0193}))
                if (std::abs(z.imag()) < 1e-8 && z.real() > 0.0
                    && std::none_of(found.begin(), found.end(), [&](double f) { return std::abs(f - z.real()) < 1e-8; }))
                    found.push_back(z.real());
        }
        if (found.size() != 1) throw std::runtime_error("expected exactly one positive real zero of T_m");
        out.push_back(found[0]);
    }
    return out;
}

TbaSolution solve_excited(const TbaConfig& cfg, double beta, double J, const std::vector<double>& x_seed)
{
    cfg.validate();
    if (!(J < 0.0)) throw std::invalid_argument("the second-sector TBA needs J < 0");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    const int M = cfg.m_max;
    std::vector<double> seed = x_seed;
    if (static_cast<int>(seed.size()) < M) {
        seed = finite_n_real_zeros(cfg.seed_N, beta, J, M);
    }
    seed.resize(M);
    const int mf = std::clamp(cfg.x_free, 1, M);

    Excited ex(cfg, beta, J);
    ex.smooth.resize(M);
    for (int m = 1; m <= M; ++m) ex.smooth[m - 1] = Eigen::ArrayXd::Constant(ex.g.size(), std::log(std::abs(y_plateau(m, 2))));

    TbaSolution sol;
    sol.k = 2;
    sol.grid = ex.g;
    sol.beta = beta;
    sol.J = J;

    Eigen::VectorXd xf(mf);
    for (int i = 0; i < mf; ++i) xf[i] = seed[i];
    Eigen::VectorXd r = ex.residual(xf, seed, true);
    sol.history.push_back(r.norm());
    for (int it = 0; it < cfg.x_max_iter && r.norm() >= cfg.x_tol; ++it) {
        Eigen::MatrixXd jac(mf, mf);
        const double e = 1e-6;
        for (int j = 0; j < mf; ++j) {
            Eigen::VectorXd xp = xf;
            xp[j] += e;
            jac.col(j) = (ex.residual(xp, seed, false) - r) / e;
        }
        const Eigen::VectorXd dx = jac.colPivHouseholderQr().solve(-r);
        double lam = 1.0;
        Eigen::VectorXd rn;
        for (int halving = 0; halving <= 20; ++halving) {
            rn = ex.residual(xf + lam * dx, seed, false);
            if (rn.norm() < r.norm()) break;
            lam *= 0.5;
        }
        if (!(rn.norm() < r.norm())) break;
        xf += lam * dx;
        r = ex.residual(xf, seed, true);
        sol.history.push_back(r.norm());
    }
    sol.x = ex.x;
    sol.lnY = ex.lnY;
    sol.sign = ex.signs(ex.x);
    sol.iterations = ex.sweeps;
    sol.last_change = ex.change;
    sol.x_residual = r.norm();
    sol.converged = r.norm() < cfg.x_tol && ex.change < 1e-10;

    // ln|lambda_2| = -beta J (4pi/(3 sqrt3) - 1) + 2 ln tanh(pi x_1/2) + G * ln|(1+Y_1) tanh tanh|
    Eigen::ArrayXd f(ex.g.size());
    for (int i = 0; i < ex.g.size(); ++i)
        f[i] = ln1p_abs(sol.lnY[0][i], sol.sign[0][i]) + ln_abs_tt(ex.g.v[i], sol.x[0]);
    const double integral = integrate_G(ex.g, f, 0.0); // |1 + y_1| = 1
    sol.log_eigenvalue = -beta * J * (4.0 * kPi / (3.0 * std::sqrt(3.0)) - 1.0) + 2.0 * std::log(std::tanh(0.5 * kPi * sol.x[0])) + integral;
    return sol;
}

std::complex<double> excited_boundary_log(const TbaSolution& sol, int m, double x)
{
    if (sol.k != 2) throw std::invalid_argument("needs the second-sector solution");
    TbaConfig cfg;
    cfg.m_max = static_cast<int>(sol.lnY.size());
    cfg.V = sol.grid.V;
    cfg.h = sol.grid.h;
    Excited ex(cfg, sol.beta, sol.J);
    const auto a = ex.lnA(sol.lnY, sol.sign);
    return ex.boundary_log(a, sol.x, m, x);
}

double inverse_correlation_length(const TbaSolution& sol1, const TbaSolution& sol2)
{
    if (sol1.k != 1 || sol2.k != 2) throw std::invalid_argument("needs the k=1 and k=2 solutions");
    return sol1.log_eigenvalue - sol2.log_eigenvalue;
}

double correlation_length(const TbaSolution& sol1, const TbaSolution& sol2)
{
    const double inv = inverse_correlation_length(sol1, sol2);
    if (!(inv > 0.0)) throw std::runtime_error("non-positive inverse correlation length");
    return 1.0 / inv;
}

} // namespace osp
