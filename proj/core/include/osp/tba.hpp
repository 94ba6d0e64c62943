#pragma once

#include "osp/grid.hpp"

#include <string>
#include <vector>

namespace osp {

// How Y_{M+1} is supplied at the truncation level M.
enum class Closure {
    Plateau,   // frozen at its constant limit
    Linearized // propagated from Y_M through the linearized constant-Y tail
};

struct TbaConfig {
    int m_max = 10;
    double V = 30.0;
    double h = 0.05;
    double tol = 1e-10;
    int max_iter = 5000;
    double damping = 0.5;
    Closure closure = Closure::Linearized;
    int trotter_N = 0; // > 0: finite-N driving term instead of the Trotter limit
    // excited state
    int x_free = 4;      // x_1..x_free solved, higher ones follow the seeds
    int seed_N = 16;     // Trotter number of the finite-N zero seeds
    double x_tol = 1e-10;
    int x_max_iter = 40;

    void validate() const;
};

struct TbaSolution {
    int k = 1;
    Grid grid;
    // k=1: ln Y_m. k=2: ln |Y_m| with sign[m] = sign of Y_m on the grid.
    std::vector<Eigen::ArrayXd> lnY;
    std::vector<Eigen::ArrayXd> sign;
    std::vector<double> x; // auxiliary real zeros, k=2 only
    double beta = 1.0;
    double J = -1.0;
    int iterations = 0;
    double last_change = 0.0;
    bool converged = false;
    double x_residual = 0.0;
    double log_eigenvalue = 0.0; // ln lambda_1 (k=1) or ln|lambda_2| (k=2)
    std::vector<double> history; // sup-norm change per sweep (k=1) or phase residual per x step (k=2)
};

double y_plateau(int m, int k);

// Driving term of the finite-Trotter-number NLIE; sign of J picks the branch.
double finite_n_driving(double v, int N, double u, int J_sign);
double trotter_driving(double v, double beta, double J); // pi beta J / cosh pi v

TbaSolution solve_tba(const TbaConfig& cfg, double beta, double J);
double free_energy(const TbaSolution& sol, double beta, double J);

// Seeds for x_m: positive real zeros of T_m in the second sector at finite N.
std::vector<double> finite_n_real_zeros(int N, double beta, double J, int m_max);

TbaSolution solve_excited(const TbaConfig& cfg, double beta, double J, const std::vector<double>& x_seed = {});
// ln Y_m(x + i/2) from the converged excited solution (complex, principal branch of the phase).
std::complex<double> excited_boundary_log(const TbaSolution& sol, int m, double x);
// 1/xi = ln lambda_1 - ln |lambda_2|
double inverse_correlation_length(const TbaSolution& sol1, const TbaSolution& sol2);
double correlation_length(const TbaSolution& sol1, const TbaSolution& sol2);

} // namespace osp
