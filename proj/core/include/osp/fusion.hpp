#pragma once

#include "osp/spectral.hpp"

#include <array>
#include <vector>

namespace osp {

struct FusionIndex {
    int m = 1;
    int k = 1;
};

// Weakly increasing words over 1 < 0 < 1bar, lexicographic order.
using Tableau = std::vector<Box>;
std::vector<Tableau> enumerate_tableaux(int m);

cplx t0_eval(int m, cplx v, const ModelParams& p);
cplx norm_factor(int m, cplx v, const ModelParams& p); // N_m

// T_m by tableau summation; T_0 = t0_eval(0, .), T_{-1} = 0.
cplx dvf_eval(int m, cplx v, const BetheState& s, const ModelParams& p, double eps = 1e-8);
// Reference implementation that loops over every tableau explicitly (tests only).
cplx dvf_eval_enumerated(int m, cplx v, const BetheState& s, const ModelParams& p);

// D_m = phi+(v - (m+2)i/2) phi-(v + (m+2)i/2); D_m T_m is a polynomial of degree 2N.
cplx pole_factor(int m, cplx v, const ModelParams& p);
cplx dvf_polynomial(int m, cplx v, const BetheState& s, const ModelParams& p);

cplx y_eval(int m, cplx v, const BetheState& s, const ModelParams& p);

// Y_m at v -> infinity from the tableau leading coefficients, sector sign sigma.
double y_plateau_from_tableaux(int m, int sigma);

enum class Relation { TSystem, YSystem };
// |LHS - RHS| / (|LHS| + |RHS|)
double verify_functional_relation(Relation kind, int m, cplx v, const BetheState& s, const ModelParams& p);

struct Rect {
    double re0, re1, im0, im1;
};

struct ZeroOptions {
    double min_cell = 1e-9;
    double newton_tol = 1e-13;
    int max_depth = 80;
};

// Winding number of D_m T_m around the rectangle boundary.
int count_zeros(int m, const BetheState& s, const ModelParams& p, const Rect& r);

// All zeros inside r, with multiplicity, by winding-number subdivision and Newton polish.
std::vector<cplx> find_zeros(int m, const BetheState& s, const ModelParams& p, const Rect& r,
                             const ZeroOptions& opt = {});
// Grows a centered rectangle until it holds all 2N zeros.
std::vector<cplx> find_all_zeros(int m, const BetheState& s, const ModelParams& p, const ZeroOptions& opt = {});

struct ZeroPattern {
    int inner_pair = 0;  // near Im v = +-(m+1)/2
    int outer_pair = 0;  // near Im v = +-(m/2+1)
    int real_zeros = 0;
    int axis_zeros = 0;  // on the imaginary axis near +-(2m+3)i/4
    int in_strip = 0;    // |Im v| <= 1/2, excluding real zeros
    int total = 0;
    std::vector<double> real_positions; // positive real zeros
};
ZeroPattern classify_zeros(const std::vector<cplx>& zeros, int m, int k);

} // namespace osp
