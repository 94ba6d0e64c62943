#include "osp/poly.hpp"

#include <Eigen/Eigenvalues>

namespace osp::poly {

Coeffs mul(const Coeffs& a, const Coeffs& b)
{
    if (a.empty() || b.empty()) return {};
    Coeffs r(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Coeffs pow_linear(cplx c0, int k)
{
    Coeffs r{1.0};
    const Coeffs lin{c0, 1.0};
    for (int i = 0; i < k; ++i) r = mul(r, lin);
    return r;
}

Coeffs shift(const Coeffs& q, cplx s)
{
    // Horner-style Taylor shift
    Coeffs r = q;
    const int n = static_cast<int>(r.size()) - 1;
    for (int i = 0; i < n; ++i)
        for (int j = n - 1; j >= i; --j) r[j] += s * r[j + 1];
    return r;
}

Coeffs remainder(const Coeffs& f, const Coeffs& monic)
{
    const int n = static_cast<int>(monic.size()) - 1;
    Coeffs r = f;
    for (int d = static_cast<int>(r.size()) - 1; d >= n; --d) {
        const cplx lead = r[d];
        if (lead == 0.0) continue;
        for (int j = 0; j <= n; ++j) r[d - n + j] -= lead * monic[j];
    }
    r.resize(std::max(n, 0));
    return r;
}

Coeffs from_roots(const std::vector<cplx>& r)
{
    Coeffs c{1.0};
    for (const auto& x : r) c = mul(c, Coeffs{-x, 1.0});
    return c;
}

cplx eval(const Coeffs& c, cplx w)
{
    cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * w + *it;
    return acc;
}

std::vector<cplx> roots(const Coeffs& c)
{
    const int n = static_cast<int>(c.size()) - 1;
    if (n < 1) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + n};
}

} // namespace osp::poly
