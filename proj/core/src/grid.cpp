#include "osp/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace osp {

namespace {
std::mutex plan_mutex; // FFTW planning is not thread safe
}

Grid::Grid(double half_width, double step) : V(half_width), h(step)
{
    if (!(step > 0.0) || !(half_width > step)) throw std::invalid_argument("bad grid");
    n = static_cast<int>(std::lround(half_width / step));
    v = Eigen::ArrayXd::LinSpaced(2 * n + 1, -n * step, n * step);
}

double GridFunction::tail_deviation() const
{
    if (values.size() == 0) return 0.0;
    return std::max(std::abs(values[0] - plateau), std::abs(values[values.size() - 1] - plateau));
}

double kernel_K(double v) { return 0.5 / std::cosh(std::numbers::pi * v); }

double kernel_G(double v)
{
    const double c = 2.0 / std::sqrt(3.0);
    if (std::abs(v) < 1e-8) return c * 2.0 / 3.0;
    const double a = std::abs(v);
    // ratio of sinh written with decaying exponentials to avoid overflow
    const double num = 1.0 - std::exp(-8.0 * std::numbers::pi * a / 3.0);
    const double den = 1.0 - std::exp(-4.0 * std::numbers::pi * a);
    return c * std::exp(-2.0 * std::numbers::pi * a / 3.0) * num / den;
}

struct Convolver::Plan {
    double* in = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    int L = 0;
    std::mutex exec; // guards the scratch buffers

    explicit Plan(int len) : L(len)
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        in = fftw_alloc_real(L);
        spec = fftw_alloc_complex(L / 2 + 1);
        fwd = fftw_plan_dft_r2c_1d(L, in, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(L, spec, in, FFTW_ESTIMATE);
    }
    ~Plan()
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(in);
        fftw_free(spec);
    }
};

Convolver::Convolver(const Grid& g) : grid_(g)
{
    L_ = 1;
    while (L_ < 2 * g.size()) L_ *= 2;
    plan_ = std::make_unique<Plan>(L_);
    // kernel on circular offsets
    for (int k = 0; k < L_; ++k) {
        const int off = k < L_ / 2 ? k : k - L_;
        plan_->in[k] = kernel_K(off * g.h) * g.h;
    }
    fftw_execute(plan_->fwd);
    kfft_.resize(L_ / 2 + 1);
    for (int k = 0; k <= L_ / 2; ++k) kfft_[k] = {plan_->spec[k][0], plan_->spec[k][1]};
}

Convolver::~Convolver() = default;

Eigen::ArrayXd Convolver::apply_multiplier(const Eigen::ArrayXd& f, const Eigen::ArrayXcd& mult) const
{
    const int N = grid_.size();
    if (f.size() != N) throw std::invalid_argument("grid mismatch");
    std::lock_guard<std::mutex> lock(plan_->exec);
    std::fill(plan_->in, plan_->in + L_, 0.0);
    for (int i = 0; i < N; ++i) plan_->in[i] = f[i];
    fftw_execute(plan_->fwd);
    for (int k = 0; k <= L_ / 2; ++k) {
        const std::complex<double> z = std::complex<double>(plan_->spec[k][0], plan_->spec[k][1]) * mult[k];
        plan_->spec[k][0] = z.real();
        plan_->spec[k][1] = z.imag();
    }
    fftw_execute(plan_->bwd);
    Eigen::ArrayXd out(N);
    for (int i = 0; i < N; ++i) out[i] = plan_->in[i] / L_;
    return out;
}

Eigen::ArrayXd Convolver::convolve_K(const Eigen::ArrayXd& f, double c) const
{
    return apply_multiplier(f - c, kfft_) + c * kKernelKMass;
}

GridFunction Convolver::convolve_K(const GridFunction& f) const
{
    return {convolve_K(f.values, f.plateau), f.plateau * kKernelKMass};
}

Eigen::ArrayXd Convolver::frequencies() const
{
    Eigen::ArrayXd k(L_ / 2 + 1);
    for (int i = 0; i <= L_ / 2; ++i) k[i] = 2.0 * std::numbers::pi * i / (L_ * grid_.h);
    return k;
}

double integrate_G(const Grid& g, const Eigen::ArrayXd& f, double c)
{
    double acc = 0.0;
    for (int i = 0; i < g.size(); ++i) acc += kernel_G(g.v[i]) * (f[i] - c);
    return acc * g.h + c * kKernelGMass;
}

} // namespace osp
