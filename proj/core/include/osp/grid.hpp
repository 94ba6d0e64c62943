#pragma once

#include <Eigen/Core>

#include <complex>
#include <memory>
#include <vector>

namespace osp {

// Uniform symmetric grid v_j = j h, j = -n..n.
struct Grid {
    double V = 30.0;
    double h = 0.05;
    int n = 600;
    Eigen::ArrayXd v;

    Grid() = default;
    Grid(double half_width, double step);
    int size() const { return 2 * n + 1; }
};

// Real samples with a declared constant limit at both ends.
struct GridFunction {
    Eigen::ArrayXd values;
    double plateau = 0.0;

    double tail_deviation() const;
};

double kernel_K(double v); // 1 / (2 cosh pi v)
double kernel_G(double v); // (2/sqrt3) sinh(4 pi v/3) / sinh(2 pi v)
inline constexpr double kKernelKMass = 0.5;
inline constexpr double kKernelGMass = 1.0;

// Zero-padded FFT convolution on a fixed grid. Plateaus are subtracted before the
// transform and restored analytically.
class Convolver {
public:
    explicit Convolver(const Grid& g);
    ~Convolver();
    Convolver(const Convolver&) = delete;
    Convolver& operator=(const Convolver&) = delete;

    const Grid& grid() const { return grid_; }
    int padded() const { return L_; }

    // K * f where f -> c at both ends.
    Eigen::ArrayXd convolve_K(const Eigen::ArrayXd& f, double c) const;
    GridFunction convolve_K(const GridFunction& f) const;
    // Circular convolution with a transfer function given on the rfft frequencies.
    Eigen::ArrayXd apply_multiplier(const Eigen::ArrayXd& f, const Eigen::ArrayXcd& mult) const;
    // Angular frequencies 2 pi k / (L h) of the rfft bins.
    Eigen::ArrayXd frequencies() const;

private:
    Grid grid_;
    int L_;
    struct Plan;
    std::unique_ptr<Plan> plan_;
    Eigen::ArrayXcd kfft_;
};

// Trapezoidal integral of G (f - c) plus c times the mass of G.
double integrate_G(const Grid& g, const Eigen::ArrayXd& f, double c);

} // namespace osp
