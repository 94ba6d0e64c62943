#include "osp/bae.hpp"
#include "osp/poly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace osp {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kCenter{0.0, 0.75}; // symmetry line of the root patterns

double binom(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void check_index(const BetheState& s, int k)
{
    if (k < 0 || k >= s.n()) throw std::out_of_range("root index out of range");
}

} // namespace

cplx bae_residual(const BetheState& s, int k, const ModelParams& p)
{
    check_index(s, k);
    const cplx v = s.roots[k];
    const cplx lhs = phi(v + 0.5 * I, -1, p) * phi(v - I, 1, p) * q_eval(s, v + 0.5 * I) * q_eval(s, v - I);
    const cplx rhs = phi(v - 0.5 * I, -1, p) * phi(v - 2.0 * I, 1, p) * q_eval(s, v - 0.5 * I) * q_eval(s, v + I);
    return lhs + static_cast<double>(s.sigma()) * rhs;
}

cplx bae_ratio_residual(const BetheState& s, int k, const ModelParams& p)
{
    check_index(s, k);
    const cplx v = s.roots[k];
    cplx r = phi(v + 0.5 * I, -1, p) * phi(v - I, 1, p) / (phi(v - 0.5 * I, -1, p) * phi(v - 2.0 * I, 1, p));
    for (const auto& x : s.roots) r *= (v + 0.5 * I - x) * (v - I - x) / ((v - 0.5 * I - x) * (v + I - x));
    return r / static_cast<double>(s.sigma()) + 1.0;
}

double max_ratio_residual(const BetheState& s, const ModelParams& p)
{
    double r = 0.0;
    for (int k = 0; k < s.n(); ++k) r = std::max(r, std::abs(bae_ratio_residual(s, k, p)));
    return r;
}

BetheState seed_state(int k, const ModelParams& p)
{
    const int h = p.N / 2;
    const double u = p.u;
    BetheState s{p.N, {}};
    if (k == 1) {
        // leading small-u behaviour: roots cluster at i/2 and i with offsets given
        // by the zeros of a degree-N/2 polynomial
        poly::Coeffs c(h + 1);
        for (int m = 0; m < h; ++m) {
            const cplx b = binom(h, m) * ipow(-I, h - m);
            c[m] = cplx(b.real(), b.imag() / 3.0);
        }
        c[h] = 1.0;
        for (const auto& a : poly::roots(c)) {
            s.roots.push_back(0.5 * I + u * a);
            s.roots.push_back(I + u * std::conj(a));
        }
        return s;
    }
    if (k == 2) {
        if (p.J >= 0.0) throw std::invalid_argument("second-sector seed needs J < 0");
        if (h < 2) throw std::invalid_argument("second-sector seed needs N >= 4");
        s.roots.push_back(kCenter);
        std::vector<double> xs;
        for (int m = 1; m < h; ++m) xs.push_back(1.0 / std::tan(2.0 * kPi * m / p.N));
        for (size_t a = 0; a < xs.size(); ++a) {
            cplx pr = 1.0;
            for (size_t b = 0; b < xs.size(); ++b)
                if (b != a) pr *= xs[a] - xs[b];
            const double eta = (-2.7 * ipow(xs[a] - I, h) / pr).real();
            const cplx z = xs[a] + I * u * eta;
            s.roots.push_back(0.5 * I + u * z);
            s.roots.push_back(I + u * std::conj(z));
        }
        return s;
    }
    throw std::invalid_argument("rank must be 1 or 2");
}

BetheState solve_newton(const BetheState& seed, const ModelParams& p, double tol, int max_iter, SolveReport* report)
{
    const int n = seed.n();
    BetheState s = seed;
    auto resid = [&](const BetheState& st) {
        Eigen::VectorXcd f(n);
        for (int k = 0; k < n; ++k) f[k] = bae_ratio_residual(st, k, p);
        return f;
    };
    Eigen::VectorXcd f = resid(s);
    double nf = f.norm();
    int it = 0;
    for (; it < max_iter && nf >= tol; ++it) {
        // analytic Jacobian of G_k = R_k + 1 through d ln R_k
        Eigen::MatrixXcd jac(n, n);
        const double hN = 0.5 * p.N;
        for (int k = 0; k < n; ++k) {
            const cplx v = s.roots[k];
            const cplx rk = f[k] - 1.0;
            cplx dself = hN * (1.0 / (v + 0.5 * I - I * p.u) + 1.0 / (v - I + I * p.u) - 1.0 / (v - 0.5 * I - I * p.u)
                               - 1.0 / (v - 2.0 * I + I * p.u));
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                const cplx d = v - s.roots[j];
                const cplx g = 1.0 / (d + 0.5 * I) + 1.0 / (d - I) - 1.0 / (d - 0.5 * I) - 1.0 / (d + I);
                dself += g;
                jac(k, j) = -rk * g;
            }
            jac(k, k) = rk * dself;
        }
        const Eigen::VectorXcd step = jac.colPivHouseholderQr().solve(-f);
        double lam = 1.0;
        BetheState trial = s;
        Eigen::VectorXcd ft;
        double nt = nf;
        for (int halving = 0; halving <= 20; ++halving) {
            for (int k = 0; k < n; ++k) trial.roots[k] = s.roots[k] + lam * step[k];
            ft = resid(trial);
            nt = ft.norm();
            if (std::isfinite(nt) && nt < nf) break;
            lam *= 0.5;
        }
        if (!(std::isfinite(nt) && nt < nf)) break; // no descent direction left
        s = trial;
        f = ft;
        nf = nt;
    }
    if (report) *report = {nf < tol, it, nf};
    return s;
}

namespace {

// Monic Q(w) with w = v - 3i/4; unknowns are the n lower coefficients.
Eigen::VectorXcd qcoef_residual(const Eigen::VectorXcd& c, const ModelParams& p, int sigma)
{
    const int n = static_cast<int>(c.size());
    const int h = p.N / 2;
    poly::Coeffs q(c.data(), c.data() + n);
    q.push_back(1.0);
    auto ph = [&](int sg, cplx s) { return poly::pow_linear(kCenter + s + static_cast<double>(sg) * I * p.u, h); };
    const poly::Coeffs a = poly::mul(poly::mul(ph(-1, 0.5 * I), ph(1, -I)),
                                     poly::mul(poly::shift(q, 0.5 * I), poly::shift(q, -I)));
    const poly::Coeffs b = poly::mul(poly::mul(ph(-1, -0.5 * I), ph(1, -2.0 * I)),
                                     poly::mul(poly::shift(q, -0.5 * I), poly::shift(q, I)));
    poly::Coeffs f(a.size());
    for (size_t i = 0; i < a.size(); ++i) f[i] = a[i] + static_cast<double>(sigma) * b[i];
    const poly::Coeffs r = poly::remainder(f, q);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < std::min<int>(n, r.size()); ++i) out[i] = r[i];
    return out;
}

double qcoef_newton(Eigen::VectorXcd& c, const ModelParams& p, int sigma, double tol, int max_iter)
{
    const int n = static_cast<int>(c.size());
    Eigen::VectorXcd f = qcoef_residual(c, p, sigma);
    double nf = f.norm();
    for (int it = 0; it < max_iter && nf >= tol; ++it) {
        Eigen::MatrixXcd jac(n, n);
        const double hstep = 1e-7;
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXcd cc = c;
            cc[j] += hstep;
            jac.col(j) = (qcoef_residual(cc, p, sigma) - f) / hstep;
        }
        const Eigen::VectorXcd dc = jac.colPivHouseholderQr().solve(-f);
        double lam = 1.0;
        Eigen::VectorXcd ct, ft;
        double nt = nf;
        for (int halving = 0; halving <= 20; ++halving) {
            ct = c + lam * dc;
            ft = qcoef_residual(ct, p, sigma);
            nt = ft.norm();
            if (std::isfinite(nt) && nt < nf) break;
            lam *= 0.5;
        }
        if (!(std::isfinite(nt) && nt < nf)) break;
        c = ct;
        f = ft;
        nf = nt;
    }
    return nf;
}

} // namespace

BetheState solve_state(int k, const ModelParams& p, const ContinuationOptions& opt, SolveReport* report)
{
    const double target = p.u;
    const double sgn = target < 0.0 ? -1.0 : 1.0;
    double u = sgn * std::min(opt.u_start, std::abs(target));
    ModelParams q = p;
    q.u = u;
    BetheState seed = seed_state(k, q);
    const int sigma = seed.sigma();
    std::vector<cplx> shifted(seed.roots);
    for (auto& x : shifted) x -= kCenter;
    poly::Coeffs c0 = poly::from_roots(shifted);
    Eigen::VectorXcd c = Eigen::Map<Eigen::VectorXcd>(c0.data(), seed.n());
    qcoef_newton(c, q, sigma, opt.tol, opt.max_iter);
    Eigen::VectorXcd cprev;
    double uprev = 0.0;
    bool have_prev = false;
    while (std::abs(u) < std::abs(target) * (1.0 - 1e-12)) {
        const double un = sgn * std::min(std::abs(target), std::abs(u) * opt.growth);
        Eigen::VectorXcd pred = c;
        if (have_prev) pred = c + (c - cprev) * ((un - u) / (u - uprev));
        q.u = un;
        qcoef_newton(pred, q, sigma, opt.tol, opt.max_iter);
        cprev = c;
        uprev = u;
        c = pred;
        u = un;
        have_prev = true;
    }
    poly::Coeffs qc(c.data(), c.data() + c.size());
    qc.push_back(1.0);
    BetheState s{p.N, poly::roots(qc)};
    for (auto& x : s.roots) x += kCenter;
    s = solve_newton(s, p, 1e-14, 50, nullptr);
    s = symmetrize(s);
    SolveReport rep;
    s = solve_newton(s, p, 1e-14, 10, &rep);
    rep.residual = max_ratio_residual(s, p);
    rep.converged = rep.residual < std::max(opt.tol, 1e-11);
    if (report) *report = rep;
    return s;
}

namespace {

size_t nearest(const std::vector<cplx>& r, cplx z)
{
    size_t best = 0;
    for (size_t i = 1; i < r.size(); ++i)
        if (std::abs(r[i] - z) < std::abs(r[best] - z)) best = i;
    return best;
}

cplx mirror_axis(cplx z) { return -std::conj(z); }
cplx mirror_line(cplx z) { return std::conj(z) + 1.5 * I; }

} // namespace

double symmetry_residual(const BetheState& s)
{
    double worst = 0.0;
    for (const auto& x : s.roots) {
        for (cplx img : {mirror_axis(x), mirror_line(x)}) worst = std::max(worst, std::abs(s.roots[nearest(s.roots, img)] - img));
    }
    return worst;
}

BetheState symmetrize(const BetheState& s)
{
    BetheState out = s;
    for (size_t i = 0; i < s.roots.size(); ++i) {
        const cplx x = s.roots[i];
        const cplx a = s.roots[nearest(s.roots, mirror_axis(x))];
        const cplx b = s.roots[nearest(s.roots, mirror_line(x))];
        const cplx c = s.roots[nearest(s.roots, mirror_axis(mirror_line(x)))];
        out.roots[i] = 0.25 * (x + mirror_axis(a) + mirror_line(b) + mirror_line(mirror_axis(c)));
    }
    return out;
}

std::vector<StringGroup> classify_strings(const BetheState& s, double tol)
{
    std::vector<cplx> r = s.roots;
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
    std::vector<StringGroup> groups;
    for (size_t i = 0; i < r.size();) {
        size_t j = i + 1;
        while (j < r.size() && std::abs(r[j].real() - r[i].real()) <= tol * (1.0 + std::abs(r[i].real()))) ++j;
        StringGroup g;
        g.members.assign(r.begin() + i, r.begin() + j);
        std::sort(g.members.begin(), g.members.end(), [](cplx a, cplx b) { return a.imag() < b.imag(); });
        double cen = 0.0;
        for (const auto& z : g.members) cen += z.real();
        g.center = cen / g.members.size();
        const size_t len = g.members.size();
        if (len < 1 || len > 3) throw std::runtime_error("root cluster larger than a three-string");
        g.kind = static_cast<StringKind>(len);
        groups.push_back(std::move(g));
        i = j;
    }
    return groups;
}

std::string describe_pattern(const std::vector<StringGroup>& groups)
{
    int cnt[4] = {0, 0, 0, 0};
    for (const auto& g : groups) ++cnt[static_cast<int>(g.kind)];
    static const char* names[4] = {"", "one-string", "two-string", "three-string"};
    std::ostringstream os;
    bool first = true;
    for (int len : {2, 3, 1}) {
        if (cnt[len] == 0) continue;
        if (!first) os << " + ";
        os << cnt[len] << ' ' << names[len] << (cnt[len] > 1 ? "s" : "");
        first = false;
    }
    return os.str();
}

} // namespace osp
