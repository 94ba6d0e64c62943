#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

namespace osp {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

// Thermodynamic and Trotter parameters. u is always -J*beta/N.
struct ModelParams {
    double J = -1.0;
    double beta = 1.0;
    int N = 2;
    double u = 0.5;

    static ModelParams from_beta(double J, double beta, int N);
    // Fixes beta from u at the given coupling; u = -J*beta/N.
    static ModelParams from_u(int N, double u, double J = -1.0);
};

struct BetheState {
    int N = 0;
    std::vector<cplx> roots;

    int n() const { return static_cast<int>(roots.size()); }
    int sigma() const { return ((N - n()) % 2 == 0) ? 1 : -1; }
    double min_separation() const;
};

enum class Box { One = 0, Zero = 1, OneBar = 2 };

class PoleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

cplx ipow(cplx z, int k);

// phi_{+/-}(v) = (v +/- i u)^{N/2}; sign is +1 or -1.
cplx phi(cplx v, int sign, const ModelParams& p);

cplx q_eval(const BetheState& s, cplx v);

// Vacuum part psi_a(v), including the (-1)^{N-n} sign for the fermionic boxes.
cplx psi_eval(Box a, cplx v, const BetheState& s, const ModelParams& p);

// Single box. Throws PoleError when a denominator is below eps relative to its scale.
cplx box_eval(Box a, cplx v, const BetheState& s, const ModelParams& p, double eps = 1e-8);

// All three boxes at once, without pole checks.
void boxes_raw(cplx v, const BetheState& s, const ModelParams& p, cplx out[3]);

// T_1 = sum of boxes. Near removable poles the value is recovered by averaging
// over a small circle (exact for functions analytic in the disk).
cplx t1_eval(cplx v, const BetheState& s, const ModelParams& p, double eps = 1e-8);

// Singular points of the raw tableau sum at fusion level m >= 1. Removable points
// cancel on BAE solutions (Q-induced, vacuum cross-cancellations, zeros of N_m);
// genuine ones are the vacuum poles at +-(m+2)i/2 -+ iu.
struct SingularSet {
    std::vector<cplx> removable;
    std::vector<cplx> genuine;
};
SingularSet singular_set(int m, const BetheState& s, const ModelParams& p);

// Mean of f over K points on the circle |z - v| = r.
template <class F>
cplx circle_mean(F&& f, cplx v, double r, int K = 32)
{
    cplx acc = 0.0;
    for (int k = 0; k < K; ++k) {
        const double th = 2.0 * 3.14159265358979323846 * (k + 0.5) / K;
        acc += f(v + r * std::polar(1.0, th));
    }
    return acc / static_cast<double>(K);
}

// Evaluates f at v, or by a circle mean (exact for f analytic in the disk) when v
// sits within tol of a removable point. Throws PoleError near a genuine pole
// unless genuine poles are ignored (f already multiplied by the pole factors).
template <class F>
cplx regularized_eval(F&& f, cplx v, const SingularSet& sing, double eps = 1e-8, bool ignore_genuine = false,
                      double tol = 1e-5)
{
    double dg = 1e300;
    if (!ignore_genuine) {
        for (const auto& g : sing.genuine) dg = std::min(dg, std::abs(v - g));
        if (dg < eps) throw PoleError("genuine vacuum pole");
    }
    double d1 = 1e300;
    for (const auto& z : sing.removable) d1 = std::min(d1, std::abs(v - z));
    if (d1 > tol) return f(v);
    // radius: well inside the gap to the next distinct singular point
    double d2 = 1e300;
    for (const auto& z : sing.removable) {
        const double d = std::abs(v - z);
        if (d > d1 + 1e-9) d2 = std::min(d2, d);
    }
    const double r = std::min({0.25, 0.5 * d2, 0.5 * dg});
    return circle_mean(f, v, r);
}

} // namespace osp
