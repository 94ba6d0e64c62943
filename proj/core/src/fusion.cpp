#include "osp/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace osp {

std::vector<Tableau> enumerate_tableaux(int m)
{
    if (m < 1) throw std::invalid_argument("fusion level must be >= 1");
    std::vector<Tableau> out;
    // a ones, b zeros, the rest bars; lexicographic in (1 < 0 < 1bar)
    for (int a = m; a >= 0; --a) {
        for (int b = m - a; b >= 0; --b) {
            Tableau t;
            t.insert(t.end(), a, Box::One);
            t.insert(t.end(), b, Box::Zero);
            t.insert(t.end(), m - a - b, Box::OneBar);
            out.push_back(std::move(t));
        }
    }
    return out;
}

cplx t0_eval(int m, cplx v, const ModelParams& p)
{
    if (m < 0) throw std::invalid_argument("fusion level must be >= 0");
    if (m == 0) return phi(v + 0.5 * I, -1, p) * phi(v - 0.5 * I, 1, p);
    const double a = 0.5 * (m + 1);
    const cplx den = phi(v + a * I, -1, p) * phi(v - a * I, 1, p);
    if (std::abs(den) < 1e-300 || std::abs(v + a * I - I * p.u) < 1e-12 || std::abs(v - a * I + I * p.u) < 1e-12)
        throw PoleError("T0: denominator vanishes");
    const double b = 0.5 * (m + 2), c = 0.5 * m;
    return phi(v + b * I, -1, p) * phi(v - b * I, 1, p) * phi(v - c * I, -1, p) * phi(v + c * I, 1, p) / den;
}

cplx norm_factor(int m, cplx v, const ModelParams& p)
{
    cplx r = 1.0;
    for (int j = 1; j < m; ++j) {
        const cplx a = I * 0.5 * static_cast<double>(m + 1 - 2 * j);
        r *= phi(v + a, -1, p) * phi(v - a, 1, p);
    }
    return r;
}

cplx pole_factor(int m, cplx v, const ModelParams& p)
{
    const double a = 0.5 * (m + 2);
    return phi(v - a * I, 1, p) * phi(v + a * I, -1, p);
}

namespace {

// Raw tableau sum divided by N_m, no pole handling. Weakly increasing words are
// summed by a running prefix: S_k(a) = B_k(a) * sum_{b <= a} S_{k-1}(b).
cplx dvf_raw(int m, cplx v, const BetheState& s, const ModelParams& p)
{
    cplx acc[3] = {1.0, 0.0, 0.0};
    for (int k = 1; k <= m; ++k) {
        cplx b[3];
        boxes_raw(v - I * 0.5 * static_cast<double>(m + 1 - 2 * k), s, p, b);
        const cplx c0 = acc[0], c1 = c0 + acc[1], c2 = c1 + acc[2];
        if (k == 1) {
            acc[0] = b[0];
            acc[1] = b[1];
            acc[2] = b[2];
        } else {
            acc[0] = b[0] * c0;
            acc[1] = b[1] * c1;
            acc[2] = b[2] * c2;
        }
    }
    return (acc[0] + acc[1] + acc[2]) / norm_factor(m, v, p);
}

} // namespace

cplx dvf_eval(int m, cplx v, const BetheState& s, const ModelParams& p, double eps)
{
    if (m < -1) throw std::invalid_argument("fusion level must be >= -1");
    if (m == -1) return 0.0;
    if (m == 0) return t0_eval(0, v, p);
    auto raw = [&](cplx z) { return dvf_raw(m, z, s, p); };
    return regularized_eval(raw, v, singular_set(m, s, p), eps);
}

cplx dvf_eval_enumerated(int m, cplx v, const BetheState& s, const ModelParams& p)
{
    std::vector<std::array<cplx, 3>> b(m);
    for (int k = 1; k <= m; ++k) {
        cplx t[3];
        boxes_raw(v - I * 0.5 * static_cast<double>(m + 1 - 2 * k), s, p, t);
        b[k - 1] = {t[0], t[1], t[2]};
    }
    cplx sum = 0.0;
    for (const auto& tab : enumerate_tableaux(m)) {
        cplx prod = 1.0;
        for (int k = 0; k < m; ++k) prod *= b[k][static_cast<int>(tab[k])];
        sum += prod;
    }
    return sum / norm_factor(m, v, p);
}

cplx dvf_polynomial(int m, cplx v, const BetheState& s, const ModelParams& p)
{
    if (m < 1) throw std::invalid_argument("fusion level must be >= 1");
    auto raw = [&](cplx z) { return dvf_raw(m, z, s, p) * pole_factor(m, z, p); };
    SingularSet sing = singular_set(m, s, p);
    // the genuine poles are cancelled by D_m, treat them as removable
    sing.removable.insert(sing.removable.end(), sing.genuine.begin(), sing.genuine.end());
    return regularized_eval(raw, v, sing, 0.0, true);
}

cplx y_eval(int m, cplx v, const BetheState& s, const ModelParams& p)
{
    if (m < 0) throw std::invalid_argument("fusion level must be >= 0");
    if (m == 0) return 0.0;
    const cplx den = t0_eval(m, v, p) * dvf_eval(m, v, s, p);
    if (den == 0.0) throw PoleError("Y: denominator vanishes");
    return dvf_eval(m - 1, v, s, p) * dvf_eval(m + 1, v, s, p) / den;
}

double y_plateau_from_tableaux(int m, int sigma)
{
    // every box tends to c_a v^N with c = (sigma, 1, sigma)
    auto lead = [&](int level) -> double {
        if (level < 0) return 0.0;
        if (level == 0) return 1.0;
        double sum = 0.0;
        for (const auto& t : enumerate_tableaux(level)) {
            double prod = 1.0;
            for (Box b : t) prod *= (b == Box::Zero) ? 1.0 : sigma;
            sum += prod;
        }
        return sum;
    };
    if (m == 0) return 0.0;
    return lead(m - 1) * lead(m + 1) / lead(m);
}

double verify_functional_relation(Relation kind, int m, cplx v, const BetheState& s, const ModelParams& p)
{
    if (m < 1) throw std::invalid_argument("fusion level must be >= 1");
    cplx lhs, rhs;
    if (kind == Relation::TSystem) {
        lhs = dvf_eval(m, v - 0.5 * I, s, p) * dvf_eval(m, v + 0.5 * I, s, p);
        rhs = dvf_eval(m - 1, v, s, p) * dvf_eval(m + 1, v, s, p) + t0_eval(m, v, p) * dvf_eval(m, v, s, p);
    } else {
        lhs = y_eval(m, v - 0.5 * I, s, p) * y_eval(m, v + 0.5 * I, s, p);
        rhs = (1.0 + y_eval(m - 1, v, s, p)) * (1.0 + y_eval(m + 1, v, s, p)) / (1.0 + 1.0 / y_eval(m, v, s, p));
    }
    return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs));
}

// ---------------------------------------------------------------------------
// zeros

namespace {

struct ZeroOnBoundary : std::runtime_error {
    ZeroOnBoundary() : std::runtime_error("zero on contour") {}
};

using Fn = std::function<cplx(cplx)>;

// Accumulated argument change of f along [a, b]. A step is accepted when it turns
// less than 0.4 rad and its midpoint splits it consistently; otherwise it is halved.
double arg_change(const Fn& f, cplx a, cplx b, cplx fa, cplx fb, int depth)
{
    const double d = std::arg(fb / fa);
    const cplx mid = 0.5 * (a + b);
    const cplx fm = f(mid);
    if (fm == 0.0) throw ZeroOnBoundary();
    const double d1 = std::arg(fm / fa), d2 = std::arg(fb / fm);
    if (std::abs(d) < 0.4 && std::abs(d1) < 0.4 && std::abs(d2) < 0.4 && std::abs(d1 + d2 - d) < 1e-9) return d;
    if (depth > 48 || std::abs(b - a) < 1e-13 * (1.0 + std::abs(a))) throw ZeroOnBoundary();
    return arg_change(f, a, mid, fa, fm, depth + 1) + arg_change(f, mid, b, fm, fb, depth + 1);
}

int winding(const Fn& f, const Rect& r)
{
    const cplx c[4] = {{r.re0, r.im0}, {r.re1, r.im0}, {r.re1, r.im1}, {r.re0, r.im1}};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        const cplx a = c[e], b = c[(e + 1) % 4];
        const int n = 48;
        cplx prev = f(a);
        if (prev == 0.0) throw ZeroOnBoundary();
        for (int i = 1; i <= n; ++i) {
            const cplx z = a + (b - a) * (static_cast<double>(i) / n);
            const cplx fz = f(z);
            if (fz == 0.0) throw ZeroOnBoundary();
            total += arg_change(f, a + (b - a) * (static_cast<double>(i - 1) / n), z, prev, fz, 0);
            prev = fz;
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

bool newton_polish(const Fn& f, cplx& z, double tol)
{
    for (int it = 0; it < 60; ++it) {
        const double h = 1e-6 * (1.0 + std::abs(z));
        const cplx fz = f(z);
        if (fz == 0.0) return true;
        const cplx df = (f(z + h) - f(z - h)) / (2.0 * h);
        if (df == 0.0 || !std::isfinite(std::abs(df))) return false;
        const cplx step = fz / df;
        z -= step;
        if (!std::isfinite(std::abs(z))) return false;
        if (std::abs(step) < tol * (1.0 + std::abs(z))) return true;
    }
    return false;
}

bool inside(const Rect& r, cplx z, double pad)
{
    return z.real() >= r.re0 - pad && z.real() <= r.re1 + pad && z.imag() >= r.im0 - pad && z.imag() <= r.im1 + pad;
}

void subdivide(const Fn& f, const Rect& r, int count, const ZeroOptions& opt, int depth, std::vector<cplx>& out)
{
    if (count <= 0) return;
    const double w = r.re1 - r.re0, h = r.im1 - r.im0;
    if (count == 1) {
        cplx z{0.5 * (r.re0 + r.re1), 0.5 * (r.im0 + r.im1)};
        if (newton_polish(f, z, opt.newton_tol) && inside(r, z, 1e-10 * (1.0 + std::abs(z)))) {
            out.push_back(z);
            return;
        }
    }
    if (std::max(w, h) < opt.min_cell || depth >= opt.max_depth) {
        cplx z{0.5 * (r.re0 + r.re1), 0.5 * (r.im0 + r.im1)};
        newton_polish(f, z, opt.newton_tol);
        out.insert(out.end(), count, z);
        return;
    }
    // split off-centre so that symmetric zero sets do not land on the cut
    static constexpr double fracs[] = {0.4871, 0.5379, 0.4413, 0.5917, 0.3967};
    for (double fr : fracs) {
        Rect a = r, b = r;
        if (w >= h) {
            a.re1 = b.re0 = r.re0 + fr * w;
        } else {
            a.im1 = b.im0 = r.im0 + fr * h;
        }
        try {
            const int ca = winding(f, a);
            const int cb = count - ca;
            if (ca < 0 || cb < 0) continue;
            subdivide(f, a, ca, opt, depth + 1, out);
            subdivide(f, b, cb, opt, depth + 1, out);
            return;
        } catch (const ZeroOnBoundary&) {
            continue;
        }
    }
    throw std::runtime_error("zero subdivision failed");
}

Fn poly_fn(int m, const BetheState& s, const ModelParams& p)
{
    return [m, &s, &p](cplx z) { return dvf_polynomial(m, z, s, p); };
}

Rect nudge(const Rect& r, int attempt)
{
    const double e = 1.3e-3 * (attempt + 1);
    return {r.re0 - e, r.re1 + 0.7 * e, r.im0 - 0.9 * e, r.im1 + 1.1 * e};
}

} // namespace

int count_zeros(int m, const BetheState& s, const ModelParams& p, const Rect& r)
{
    const Fn f = poly_fn(m, s, p);
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            return winding(f, attempt == 0 ? r : nudge(r, attempt));
        } catch (const ZeroOnBoundary&) {
        }
    }
    throw std::runtime_error("contour keeps hitting zeros");
}

std::vector<cplx> find_zeros(int m, const BetheState& s, const ModelParams& p, const Rect& r, const ZeroOptions& opt)
{
    const Fn f = poly_fn(m, s, p);
    for (int attempt = 0; attempt < 8; ++attempt) {
        const Rect rr = attempt == 0 ? r : nudge(r, attempt);
        try {
            const int c = winding(f, rr);
            std::vector<cplx> out;
            subdivide(f, rr, c, opt, 0, out);
            std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
                return a.imag() < b.imag() || (a.imag() == b.imag() && a.real() < b.real());
            });
            return out;
        } catch (const ZeroOnBoundary&) {
        }
    }
    throw std::runtime_error("contour keeps hitting zeros");
}

std::vector<cplx> find_all_zeros(int m, const BetheState& s, const ModelParams& p, const ZeroOptions& opt)
{
    const double ih = 0.5 * (m + 2) + 1.0;
    for (double re = 4.0; re < 1e4; re *= 2.0) {
        const Rect r{-re - 0.0137, re, -ih - 0.0113, ih};
        if (count_zeros(m, s, p, r) == 2 * p.N) return find_zeros(m, s, p, r, opt);
    }
    throw std::runtime_error("could not enclose all zeros");
}

ZeroPattern classify_zeros(const std::vector<cplx>& zeros, int m, int k)
{
    ZeroPattern z;
    z.total = static_cast<int>(zeros.size());
    std::vector<cplx> rest;
    const double axis_target = 0.25 * (2 * m + 3);
    if (k == 2) {
        // the imaginary-axis pair: per half plane, the axis zero closest to the target
        int best[2] = {-1, -1};
        for (size_t i = 0; i < zeros.size(); ++i) {
            const cplx w = zeros[i];
            if (std::abs(w.real()) > 1e-7 || std::abs(w.imag()) < 1e-7) continue;
            const int h = w.imag() > 0 ? 0 : 1;
            if (best[h] < 0 || std::abs(std::abs(w.imag()) - axis_target) < std::abs(std::abs(zeros[best[h]].imag()) - axis_target))
                best[h] = static_cast<int>(i);
        }
        for (size_t i = 0; i < zeros.size(); ++i) {
            if (static_cast<int>(i) == best[0] || static_cast<int>(i) == best[1]) {
                if (std::abs(std::abs(zeros[i].imag()) - axis_target) < 0.25) {
                    ++z.axis_zeros;
                    continue;
                }
            }
            rest.push_back(zeros[i]);
        }
    } else {
        rest = zeros;
    }
    const double inner = 0.5 * (m + 1), outer = 0.5 * m + 1.0;
    for (const auto& w : rest) {
        const double y = std::abs(w.imag());
        if (y < 1e-7) {
            ++z.real_zeros;
            if (w.real() > 0) z.real_positions.push_back(w.real());
            continue;
        }
        if (y <= 0.5) {
            ++z.in_strip;
            continue;
        }
        if (std::abs(y - inner) <= std::abs(y - outer))
            ++z.inner_pair;
        else
            ++z.outer_pair;
    }
    std::sort(z.real_positions.begin(), z.real_positions.end());
    return z;
}

} // namespace osp
