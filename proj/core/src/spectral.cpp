#include "osp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace osp {

ModelParams ModelParams::from_beta(double J, double beta, int N)
{
    if (N < 2 || N % 2 != 0) throw std::invalid_argument("Trotter number must be even and >= 2");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    return ModelParams{J, beta, N, -J * beta / N};
}

ModelParams ModelParams::from_u(int N, double u, double J)
{
    if (N < 2 || N % 2 != 0) throw std::invalid_argument("Trotter number must be even and >= 2");
    if (J == 0.0) throw std::invalid_argument("J must be nonzero");
    const double beta = -u * N / J;
    if (!(beta > 0.0)) throw std::invalid_argument("u and J give non-positive beta");
    return ModelParams{J, beta, N, u};
}

double BetheState::min_separation() const
{
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = 0; j < i; ++j) d = std::min(d, std::abs(roots[i] - roots[j]));
    return d;
}

cplx ipow(cplx z, int k)
{
    cplx r = 1.0;
    while (k > 0) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

cplx phi(cplx v, int sign, const ModelParams& p)
{
    return ipow(v + static_cast<double>(sign) * I * p.u, p.N / 2);
}

cplx q_eval(const BetheState& s, cplx v)
{
    cplx r = 1.0;
    for (const auto& x : s.roots) r *= (v - x);
    return r;
}

cplx psi_eval(Box a, cplx v, const BetheState& s, const ModelParams& p)
{
    const double sg = s.sigma();
    switch (a) {
    case Box::One:
        return sg * phi(v, 1, p) * phi(v + I, -1, p) * phi(v - 0.5 * I, 1, p) / phi(v - 1.5 * I, 1, p);
    case Box::Zero:
        return phi(v, 1, p) * phi(v, -1, p);
    case Box::OneBar:
        return sg * phi(v, -1, p) * phi(v - I, 1, p) * phi(v + 0.5 * I, -1, p) / phi(v + 1.5 * I, -1, p);
    }
    return 0.0;
}

namespace {

void check_den(cplx den, double scale, double eps, const char* what)
{
    if (std::abs(den) < eps * std::max(1.0, scale)) throw PoleError(what);
}

} // namespace

cplx box_eval(Box a, cplx v, const BetheState& s, const ModelParams& p, double eps)
{
    const int h = p.N / 2;
    switch (a) {
    case Box::One: {
        const cplx den = q_eval(s, v + 0.5 * I);
        check_den(den, std::pow(std::abs(v) + 1.0, s.n()), eps, "box 1: Q(v+i/2) vanishes");
        check_den(phi(v - 1.5 * I, 1, p), std::pow(std::abs(v) + 2.0, h), eps, "box 1: vacuum pole");
        return psi_eval(a, v, s, p) * q_eval(s, v - 0.5 * I) / den;
    }
    case Box::Zero: {
        const cplx den = q_eval(s, v + 0.5 * I) * q_eval(s, v + I);
        check_den(den, std::pow(std::abs(v) + 1.0, 2 * s.n()), eps, "box 0: Q denominator vanishes");
        return psi_eval(a, v, s, p) * q_eval(s, v) * q_eval(s, v + 1.5 * I) / den;
    }
    case Box::OneBar: {
        const cplx den = q_eval(s, v + I);
        check_den(den, std::pow(std::abs(v) + 1.0, s.n()), eps, "box 1bar: Q(v+i) vanishes");
        check_den(phi(v + 1.5 * I, -1, p), std::pow(std::abs(v) + 2.0, h), eps, "box 1bar: vacuum pole");
        return psi_eval(a, v, s, p) * q_eval(s, v + 2.0 * I) / den;
    }
    }
    return 0.0;
}

void boxes_raw(cplx v, const BetheState& s, const ModelParams& p, cplx out[3])
{
    const cplx q0 = q_eval(s, v);
    const cplx qh = q_eval(s, v + 0.5 * I);
    const cplx q1 = q_eval(s, v + I);
    const cplx qm = q_eval(s, v - 0.5 * I);
    const cplx q3 = q_eval(s, v + 1.5 * I);
    const cplx q2 = q_eval(s, v + 2.0 * I);
    out[0] = psi_eval(Box::One, v, s, p) * qm / qh;
    out[1] = psi_eval(Box::Zero, v, s, p) * q0 * q3 / (qh * q1);
    out[2] = psi_eval(Box::OneBar, v, s, p) * q2 / q1;
}

SingularSet singular_set(int m, const BetheState& s, const ModelParams& p)
{
    SingularSet out;
    const cplx iu = I * p.u;
    for (int k = 1; k <= m; ++k) {
        // box k is evaluated at v + shift
        const cplx shift = -I * 0.5 * static_cast<double>(m + 1 - 2 * k);
        for (const auto& x : s.roots) {
            out.removable.push_back(x - 0.5 * I - shift);
            out.removable.push_back(x - I - shift);
        }
        out.removable.push_back(1.5 * I - iu - shift);
        out.removable.push_back(-1.5 * I + iu - shift);
    }
    for (int j = 1; j < m; ++j) {
        const cplx a = I * 0.5 * static_cast<double>(m + 1 - 2 * j);
        out.removable.push_back(-a + iu);
        out.removable.push_back(a - iu);
    }
    const cplx g = I * 0.5 * static_cast<double>(m + 2) - iu;
    out.genuine = {g, -g};
    std::erase_if(out.removable, [&](cplx z) { return std::abs(z - g) < 1e-12 || std::abs(z + g) < 1e-12; });
    return out;
}

cplx t1_eval(cplx v, const BetheState& s, const ModelParams& p, double eps)
{
    auto raw = [&](cplx z) {
        cplx b[3];
        boxes_raw(z, s, p, b);
        return b[0] + b[1] + b[2];
    };
    return regularized_eval(raw, v, singular_set(1, s, p), eps);
}

} // namespace osp
