#pragma once

#include "osp/spectral.hpp"

#include <vector>

namespace osp::poly {

// Coefficients stored low -> high.
using Coeffs = std::vector<cplx>;

Coeffs mul(const Coeffs& a, const Coeffs& b);
Coeffs pow_linear(cplx c0, int k); // (w + c0)^k
Coeffs shift(const Coeffs& q, cplx s); // q(w + s)
Coeffs remainder(const Coeffs& f, const Coeffs& monic);
Coeffs from_roots(const std::vector<cplx>& r);
cplx eval(const Coeffs& c, cplx w);

// Eigenvalues of the companion matrix; c must have a nonzero leading coefficient.
std::vector<cplx> roots(const Coeffs& c);

} // namespace osp::poly
