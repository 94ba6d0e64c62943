#pragma once

#include "osp/spectral.hpp"

#include <string>
#include <vector>

namespace osp {

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};

enum class StringKind { One = 1, Two = 2, Three = 3 };

struct StringGroup {
    StringKind kind;
    double center; // common real part
    std::vector<cplx> members;
};

// Cleared-denominator residual of the k-th Bethe equation (0-based k):
// phi-(v+i/2) phi+(v-i) Q(v+i/2) Q(v-i) + sigma phi-(v-i/2) phi+(v-2i) Q(v-i/2) Q(v+i).
cplx bae_residual(const BetheState& s, int k, const ModelParams& p);

// Dimensionless form: LHS/RHS of the Bethe equation plus one.
cplx bae_ratio_residual(const BetheState& s, int k, const ModelParams& p);
double max_ratio_residual(const BetheState& s, const ModelParams& p);

// Small-u seed of rank k (1: largest, 2: second largest); valid as u -> 0.
BetheState seed_state(int k, const ModelParams& p);

// Damped Newton on the root positions (up to 20 step halvings per iteration).
BetheState solve_newton(const BetheState& seed, const ModelParams& p, double tol, int max_iter,
                        SolveReport* report = nullptr);

struct ContinuationOptions {
    double u_start = 1e-3;
    double growth = 1.1;
    double tol = 1e-12;
    int max_iter = 60;
};

// Full solve: seed at small u, continuation in u through the coefficients of Q
// (smooth across root collisions), then a root-space Newton polish.
BetheState solve_state(int k, const ModelParams& p, const ContinuationOptions& opt = {},
                       SolveReport* report = nullptr);

// Roots closed under v -> -conj(v) and v -> conj(v) + 3i/2; returns the worst mismatch.
double symmetry_residual(const BetheState& s);
BetheState symmetrize(const BetheState& s);

// Groups roots sharing a real part into strings.
std::vector<StringGroup> classify_strings(const BetheState& s, double tol = 1e-6);
std::string describe_pattern(const std::vector<StringGroup>& groups);

} // namespace osp
