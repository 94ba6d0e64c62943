#pragma once

#include "osp/spectral.hpp"

#include <Eigen/Core>

#include <vector>

namespace osp {

using Matrix9cd = Eigen::Matrix<cplx, 9, 9>;

// Local operators on C^3 (x) C^3, index 3a+b with basis order 1, 0, 1bar.
Matrix9cd graded_permutation();
Matrix9cd plain_permutation();
Matrix9cd e_operator();
Matrix9cd r_check(cplx v);
Matrix9cd r_matrix(cplx v);       // P * Rcheck
Matrix9cd r_tilde(cplx v);        // partial transpose in the auxiliary space
double braid_residual(cplx w, cplx wp);

// Staggered charge sum_s (-1)^s Sz(a_s), conserved by the QTM.
int staggered_charge(long config, int N);

struct QtmOperator {
    ModelParams params;
    cplx v;
    std::vector<long> basis; // configurations spanned (all 3^N when unrestricted)
    Eigen::MatrixXcd matrix;
};

// Dense QTM, optionally restricted to one staggered-charge sector.
QtmOperator build_qtm(const ModelParams& p, cplx v, int dense_limit = 10);
QtmOperator build_qtm_sector(const ModelParams& p, cplx v, int charge);

// Eigenvalues of largest modulus, sorted by decreasing modulus.
std::vector<cplx> top_eigenvalues(const QtmOperator& op, int count);
// Same, gathered over all charge sectors (exact for any N up to the dense limit).
std::vector<cplx> qtm_spectrum_top(const ModelParams& p, cplx v, int count);

// Exact free energy per site of the periodic chain of length L.
double hamiltonian_free_energy(int L, double beta, double J);
// Full spectrum of the periodic chain, blocked by total Sz; cached per (L, J).
std::vector<cplx> hamiltonian_spectrum(int L, double J);
// Full Hamiltonian matrix (no blocking), for cross-checks at small L.
Eigen::MatrixXd hamiltonian_matrix(int L, double J);

} // namespace osp
