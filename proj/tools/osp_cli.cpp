// osp: command-line driver for the osp(1|2) QTM toolkit.
#include "run_io.hpp"

#include "osp/bae.hpp"
#include "osp/fusion.hpp"
#include "osp/qtm.hpp"
#include "osp/tba.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <thread>

namespace fs = std::filesystem;
using namespace osp;
using namespace osp::cli;

namespace {

enum Exit { kOk = 0, kConfig = 1, kConvergence = 2, kValidation = 3 };

struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    double beta = 1.0;
    double J = -1.0;
    int N = 4;
    std::optional<double> u;
    int k = 1;
    std::optional<int> m_max;
    double grid_v = 30.0;
    double grid_h = 0.05;
    std::optional<double> tol;
    std::string out;
    unsigned seed = 20240601;
    int threads = 0;
    std::string config;

    // per command
    double v = 0.0;
    int count = 4;
    int points = 20;
    std::vector<double> betas;
    bool with_xi = false;
    int which = 1;
};

ModelParams model(const Options& o)
{
    if (o.N < 2 || o.N % 2) throw ConfigError("N must be even and >= 2");
    if (o.u) return ModelParams::from_u(o.N, *o.u, o.J);
    if (!(o.beta > 0.0)) throw ConfigError("beta must be positive");
    return ModelParams::from_beta(o.J, o.beta, o.N);
}

TbaConfig tba_config(const Options& o)
{
    TbaConfig c;
    c.m_max = o.m_max.value_or(c.m_max);
    c.V = o.grid_v;
    c.h = o.grid_h;
    c.tol = o.tol.value_or(c.tol);
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

json base_record(const std::string& cmd, const Options& o)
{
    json cfg = {{"beta", o.beta}, {"J", o.J}, {"N", o.N}, {"k", o.k}, {"grid_v", o.grid_v}, {"grid_h", o.grid_h},
                {"seed", o.seed}, {"threads", o.threads}};
    cfg["u"] = o.u ? json(*o.u) : json(nullptr);
    cfg["m_max"] = o.m_max ? json(*o.m_max) : json(nullptr);
    cfg["tol"] = o.tol ? json(*o.tol) : json(nullptr);
    if (!o.config.empty()) cfg["config_file"] = o.config;
    return {{"command", cmd}, {"version", OSP_VERSION_STRING}, {"config", cfg}};
}

json tba_record(const TbaConfig& c)
{
    return {{"m_max", c.m_max}, {"V", c.V}, {"h", c.h}, {"tol", c.tol}, {"max_iter", c.max_iter},
            {"damping", c.damping}, {"closure", c.closure == Closure::Linearized ? "linearized" : "plateau"},
            {"x_free", c.x_free}, {"seed_N", c.seed_N}, {"x_tol", c.x_tol}, {"x_max_iter", c.x_max_iter}};
}

BetheState solve_bae(const Options& o, const ModelParams& p, json& rec)
{
    ContinuationOptions opt;
    opt.tol = o.tol.value_or(opt.tol);
    SolveReport rep;
    const BetheState s = solve_state(o.k, p, opt, &rep);
    rec["bae"] = {{"converged", rep.converged}, {"iterations", rep.iterations}, {"residual", rep.residual},
                  {"ratio_residual", max_ratio_residual(s, p)}, {"symmetry_residual", symmetry_residual(s)},
                  {"pattern", describe_pattern(classify_strings(s))}, {"tol", opt.tol}, {"u_start", opt.u_start},
                  {"growth", opt.growth}};
    rec["roots"] = roots_json(s, p.u, o.k);
    if (!rep.converged) throw ConvergenceFailure("Bethe equations did not converge (residual " + num(rep.residual) + ")");
    return s;
}

void write_roots_csv(const fs::path& file, const BetheState& s)
{
    CsvWriter csv(file, {"index", "re", "im"});
    for (int i = 0; i < s.n(); ++i) csv.row({std::to_string(i), num(s.roots[i].real()), num(s.roots[i].imag())});
}

ZeroPattern write_zero_files(const fs::path& dir, int m, const Options& o, const BetheState& s, const ModelParams& p,
                             json& rec)
{
    const auto z = find_all_zeros(m, s, p);
    CsvWriter csv(dir / ("zeros_m" + std::to_string(m) + ".csv"), {"re", "im"});
    for (const auto& x : z) csv.row({num(x.real()), num(x.imag())});
    write_json(dir / ("zeros_m" + std::to_string(m) + ".json"), zeros_json(z, m, o.k, p.N, p.u));
    const ZeroPattern zp = classify_zeros(z, m, o.k);
    rec["zeros"][std::to_string(m)] = {{"total", zp.total},         {"inner_pair", zp.inner_pair},
                                       {"outer_pair", zp.outer_pair}, {"real", zp.real_zeros},
                                       {"axis", zp.axis_zeros},       {"in_strip", zp.in_strip},
                                       {"real_positions", zp.real_positions}};
    return zp;
}

// ---- subcommands ----

int cmd_bae(const Options& o)
{
    const auto dir = prepare_run_dir(o.out);
    const ModelParams p = model(o);
    json rec = base_record("bae-solve", o);
    int code = kOk;
    try {
        const BetheState s = solve_bae(o, p, rec);
        write_roots_csv(dir / "data.csv", s);
        std::printf("%s, residual %.3e, symmetry %.3e\n", rec["bae"]["pattern"].get<std::string>().c_str(),
                    rec["bae"]["ratio_residual"].get<double>(), rec["bae"]["symmetry_residual"].get<double>());
    } catch (const ConvergenceFailure& e) {
        rec["error"] = e.what();
        code = kConvergence;
    }
    write_json(dir / "roots.json", rec["roots"]);
    write_json(dir / "run.json", rec);
    return code;
}

int cmd_qtm(const Options& o)
{
    const auto dir = prepare_run_dir(o.out);
    const ModelParams p = model(o);
    if (p.N > 8) throw ConfigError("dense diagonalization is limited to N <= 8");
    const auto ev = qtm_spectrum_top(p, o.v, o.count);
    CsvWriter csv(dir / "data.csv", {"N", "u", "v", "k", "re_lambda", "im_lambda"});
    for (size_t i = 0; i < ev.size(); ++i)
        csv.row({std::to_string(p.N), num(p.u), num(o.v), std::to_string(i + 1), num(ev[i].real()), num(ev[i].imag())});
    json rec = base_record("qtm-diag", o);
    rec["v"] = o.v;
    rec["count"] = o.count;
    write_json(dir / "run.json", rec);
    for (size_t i = 0; i < ev.size(); ++i) std::printf("lambda_%zu = %.12g %+.12gi\n", i + 1, ev[i].real(), ev[i].imag());
    return kOk;
}

int cmd_dvf_zeros(const Options& o)
{
    const auto dir = prepare_run_dir(o.out);
    const ModelParams p = model(o);
    json rec = base_record("dvf-zeros", o);
    const BetheState s = solve_bae(o, p, rec);
    write_json(dir / "roots.json", rec["roots"]);
    const int mm = o.m_max.value_or(3);
    CsvWriter csv(dir / "data.csv", {"m", "total", "inner_pair", "outer_pair", "real", "axis", "in_strip"});
    bool ok = true;
    for (int m = 1; m <= mm; ++m) {
        const ZeroPattern zp = write_zero_files(dir, m, o, s, p, rec);
        csv.row({std::to_string(m), std::to_string(zp.total), std::to_string(zp.inner_pair),
                 std::to_string(zp.outer_pair), std::to_string(zp.real_zeros), std::to_string(zp.axis_zeros),
                 std::to_string(zp.in_strip)});
        std::printf("m=%d: %d zeros (%d inner, %d outer, %d real, %d axis, %d in strip)\n", m, zp.total, zp.inner_pair,
                    zp.outer_pair, zp.real_zeros, zp.axis_zeros, zp.in_strip);
        ok = ok && zp.total == 2 * p.N;
    }
    rec["count_check"] = ok;
    write_json(dir / "run.json", rec);
    return ok ? kOk : kValidation;
}

int cmd_verify(const Options& o)
{
    const auto dir = prepare_run_dir(o.out);
    const ModelParams p = model(o);
    json rec = base_record("verify", o);
    const BetheState s = solve_bae(o, p, rec);
    const int mm = o.m_max.value_or(3);
    const double thr = o.tol.value_or(1e-9);
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> re(-2.0, 2.0), im(-0.75, 0.75);
    CsvWriter csv(dir / "data.csv", {"check", "m", "value", "threshold", "pass"});
    bool ok = true;
    auto report = [&](const std::string& name, int m, double val, double t) {
        const bool pass = val < t;
        ok = ok && pass;
        csv.row({name, std::to_string(m), num(val), num(t), pass ? "1" : "0"});
        rec["checks"].push_back({{"check", name}, {"m", m}, {"value", val}, {"threshold", t}, {"pass", pass}});
    };
    for (int m = 1; m <= mm; ++m) {
        double t = 0.0, y = 0.0;
        for (int i = 0; i < o.points; ++i) {
            const cplx v(re(rng), im(rng));
            t = std::max(t, verify_functional_relation(Relation::TSystem, m, v, s, p));
            y = std::max(y, verify_functional_relation(Relation::YSystem, m, v, s, p));
        }
        report("t_system", m, t, thr);
        report("y_system", m, y, thr);
    }
    if (p.N <= 6) {
        // oracle chain: dense QTM eigenvalue of rank k against the DVF of the solved state
        const auto ev = qtm_spectrum_top(p, 0.0, 2);
        const cplx lam = ev[o.k - 1], t1 = t1_eval(0.0, s, p), d1 = dvf_eval(1, 0.0, s, p);
        report("qtm_vs_t1", 1, std::abs(lam - t1) / std::abs(lam), 1e-7);
        report("qtm_vs_dvf", 1, std::abs(lam - d1) / std::abs(lam), 1e-7);
    }
    rec["points"] = o.points;
    write_json(dir / "run.json", rec);
    std::printf("%s\n", ok ? "all checks passed" : "validation failed");
    return ok ? kOk : kValidation;
}

int cmd_tba(const Options& o)
{
    const auto dir = prepare_run_dir(o.out);
    const TbaConfig c = tba_config(o);
    json rec = base_record("tba", o);
    rec["tba"] = tba_record(c);
    const TbaSolution s = solve_tba(c, o.beta, o.J);
    std::vector<std::string> head{"v"};
    for (int m = 1; m <= c.m_max; ++m) head.push_back("lnY_" + std::to_string(m));
    CsvWriter csv(dir / "data.csv", head);
    for (int i = 0; i < s.grid.size(); ++i) {
        std::vector<std::string> r{num(s.grid.v[i])};
        for (int m = 0; m < c.m_max; ++m) r.push_back(num(s.lnY[m][i]));
        csv.row(r);
    }
    const double f = free_energy(s, o.beta, o.J);
    rec["result"] = {{"f", f}, {"minus_beta_f", -o.beta * f}, {"iterations", s.iterations},
                     {"last_change", s.last_change}, {"converged", s.converged}};
    rec["history"] = s.history;
    write_json(dir / "run.json", rec);
    std::printf("f = %.10f  (-beta f = %.10f, %d sweeps)\n", f, -o.beta * f, s.iterations);
    return s.converged ? kOk : kConvergence;
}

int cmd_excited(const Options& o)
{
    if (o.J >= 0.0) throw ConfigError("the excited-state solver covers J < 0 only");
    const auto dir = prepare_run_dir(o.out);
    const TbaConfig c = tba_config(o);
    json rec = base_record("excited", o);
    rec["tba"] = tba_record(c);
    const TbaSolution s1 = solve_tba(c, o.beta, o.J);
    const TbaSolution s2 = solve_excited(c, o.beta, o.J);
    std::vector<std::string> head{"v"};
    for (int m = 1; m <= c.m_max; ++m) {
        head.push_back("lnabsY_" + std::to_string(m));
        head.push_back("sign_" + std::to_string(m));
    }
    CsvWriter csv(dir / "data.csv", head);
    for (int i = 0; i < s2.grid.size(); ++i) {
        std::vector<std::string> r{num(s2.grid.v[i])};
        for (int m = 0; m < c.m_max; ++m) {
            r.push_back(num(s2.lnY[m][i]));
            r.push_back(num(s2.sign[m][i]));
        }
        csv.row(r);
    }
    const bool conv = s1.converged && s2.converged;
    const double ix = inverse_correlation_length(s1, s2);
    rec["result"] = {{"x", s2.x},         {"x_residual", s2.x_residual}, {"inverse_xi", ix},
                     {"ln_lambda1", s1.log_eigenvalue}, {"ln_abs_lambda2", s2.log_eigenvalue},
                     {"converged", conv}, {"sweeps", s2.iterations}};
    rec["history"] = s2.history;
    write_json(dir / "run.json", rec);
    std::printf("1/xi = %.8f  (x_1 = %.6f, residual %.2e)\n", ix, s2.x.empty() ? 0.0 : s2.x[0], s2.x_residual);
    if (!conv) return kConvergence;
    return ix > 0.0 ? kOk : kValidation;
}

struct ScanPoint {
    double beta = 0.0, f = NAN, entropy = NAN, inv_xi = NAN;
    int iterations = 0;
    bool converged = false;
    std::vector<double> x;
    std::string error;
};

ScanPoint scan_point(const TbaConfig& c, double beta, double J, bool with_xi)
{
    ScanPoint pt;
    pt.beta = beta;
    try {
        const TbaSolution s = solve_tba(c, beta, J);
        pt.f = free_energy(s, beta, J);
        pt.iterations = s.iterations;
        // s = beta^2 df/dbeta, central difference
        const double d = 1e-3 * beta;
        const TbaSolution sp = solve_tba(c, beta + d, J), sm = solve_tba(c, beta - d, J);
        pt.entropy = beta * beta * (free_energy(sp, beta + d, J) - free_energy(sm, beta - d, J)) / (2.0 * d);
        pt.converged = s.converged && sp.converged && sm.converged;
        if (with_xi && pt.converged) {
            const TbaSolution e = solve_excited(c, beta, J);
            pt.x = e.x;
            pt.inv_xi = inverse_correlation_length(s, e);
            pt.converged = e.converged;
        }
        if (!pt.converged) pt.error = "no convergence at beta = " + num(beta);
    } catch (const std::exception& e) {
        pt.error = "beta = " + num(beta) + ": " + e.what();
    }
    return pt;
}

int cmd_scan(const Options& o)
{
    if (o.betas.empty()) throw ConfigError("beta list is empty");
    for (size_t i = 1; i < o.betas.size(); ++i)
        if (!(o.betas[i] > o.betas[i - 1])) throw ConfigError("beta list must be strictly increasing");
    if (!(o.betas.front() > 0.0)) throw ConfigError("beta values must be positive");
    if (o.with_xi && o.J >= 0.0) throw ConfigError("correlation length needs J < 0");
    const TbaConfig c = tba_config(o);
    const auto dir = prepare_run_dir(o.out);
    json rec = base_record("scan", o);
    rec["tba"] = tba_record(c);
    rec["betas"] = o.betas;
    rec["with_xi"] = o.with_xi;

    const size_t n = o.betas.size();
    const int workers = std::max(1, std::min<int>(o.threads > 0 ? o.threads : std::thread::hardware_concurrency(), n));
    std::vector<std::optional<ScanPoint>> done(n);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i; (i = next++) < n;) {
                ScanPoint pt = scan_point(c, o.betas[i], o.J, o.with_xi);
                std::lock_guard lk(mu);
                done[i] = std::move(pt);
                cv.notify_one();
            }
        });

    // collector: rows leave in beta order as soon as they are contiguous
    CsvWriter csv(dir / "data.csv", {"beta", "T", "f", "entropy", "inv_xi"});
    bool ok = true;
    for (size_t i = 0; i < n; ++i) {
        ScanPoint pt;
        {
            std::unique_lock lk(mu);
            cv.wait(lk, [&] { return done[i].has_value(); });
            pt = *done[i];
        }
        csv.row({num(pt.beta), num(1.0 / pt.beta), num(pt.f), num(pt.entropy), num(pt.inv_xi)});
        json jp = {{"beta", pt.beta}, {"f", pt.f}, {"entropy", pt.entropy}, {"iterations", pt.iterations},
                   {"converged", pt.converged}};
        if (o.with_xi) {
            jp["inv_xi"] = pt.inv_xi;
            jp["x"] = pt.x;
        }
        if (!pt.error.empty()) {
            jp["error"] = pt.error;
            std::fprintf(stderr, "%s\n", pt.error.c_str());
            ok = false;
        }
        rec["points"].push_back(jp);
        std::printf("beta = %-10g f = %.10f\n", pt.beta, pt.f);
    }
    for (auto& t : pool) t.join();
    write_json(dir / "run.json", rec);
    return ok ? kOk : kConvergence;
}

int cmd_figure(Options o, bool n_given, bool u_given)
{
    if (o.which < 1 || o.which > 6) throw ConfigError("figure must be 1..6");
    static const int kN[] = {12, 12, 12, 12, 14, 14};
    static const char* kPattern[] = {"6 two-strings", "4 two-strings + 1 three-string", "6 two-strings + 1 one-string"};
    const int idx = o.which - 1;
    if (!n_given) o.N = kN[idx];
    if (!u_given) o.u = 0.05;
    o.k = (idx < 2) ? 1 : 2;
    const auto dir = prepare_run_dir(o.out);
    const ModelParams p = model(o);
    json rec = base_record("figure", o);
    rec["figure"] = o.which;
    const BetheState s = solve_bae(o, p, rec);
    write_json(dir / "roots.json", rec["roots"]);
    bool ok = true;
    if (o.which % 2 == 1) {
        write_roots_csv(dir / "data.csv", s);
        const std::string pat = rec["bae"]["pattern"];
        const double res = rec["bae"]["ratio_residual"], sym = rec["bae"]["symmetry_residual"];
        ok = pat == kPattern[idx / 2] && res < 1e-10 && sym < 1e-8;
        std::printf("%s (expected %s), residual %.2e, symmetry %.2e\n", pat.c_str(), kPattern[idx / 2], res, sym);
    } else {
        CsvWriter csv(dir / "data.csv", {"m", "total", "inner_pair", "outer_pair", "real", "axis", "in_strip"});
        for (int m = 1; m <= o.m_max.value_or(3); ++m) {
            const ZeroPattern zp = write_zero_files(dir, m, o, s, p, rec);
            csv.row({std::to_string(m), std::to_string(zp.total), std::to_string(zp.inner_pair),
                     std::to_string(zp.outer_pair), std::to_string(zp.real_zeros), std::to_string(zp.axis_zeros),
                     std::to_string(zp.in_strip)});
            std::printf("m=%d: %d zeros (%d inner, %d outer, %d real, %d axis, %d in strip)\n", m, zp.total,
                        zp.inner_pair, zp.outer_pair, zp.real_zeros, zp.axis_zeros, zp.in_strip);
            ok = ok && zp.total == 2 * p.N && zp.in_strip == 0;
            if (o.k == 2) ok = ok && zp.real_zeros == 2 && zp.axis_zeros == 2;
        }
    }
    rec["pattern_check"] = ok;
    write_json(dir / "run.json", rec);
    return ok ? kOk : kValidation;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"osp(1|2) quantum transfer matrix toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    auto* optCfg = app.set_config("--config", "", "key-value configuration file; flags override it");
    app.add_option("--beta", o.beta, "inverse temperature");
    app.add_option("--J", o.J, "coupling");
    auto* optN = app.add_option("--N", o.N, "Trotter number (even)");
    auto* optU = app.add_option("--u", o.u, "spectral parameter u = -J beta / N; overrides --beta");
    app.add_option("--k", o.k, "eigenvalue rank (1 largest, 2 second largest)")->check(CLI::Range(1, 2));
    app.add_option("--m-max", o.m_max, "highest fusion level");
    app.add_option("--grid-v", o.grid_v, "NLIE grid half-width");
    app.add_option("--grid-h", o.grid_h, "NLIE grid step");
    app.add_option("--tol", o.tol, "solver tolerance");
    app.add_option("--out", o.out, "run directory");
    app.add_option("--seed", o.seed, "random seed for sampled checks");
    app.add_option("--threads", o.threads, "worker threads (0: hardware)");

    auto* bae = app.add_subcommand("bae-solve", "solve the Bethe equations for the k-th state");
    auto* qtm = app.add_subcommand("qtm-diag", "dense QTM spectrum, all staggered-charge sectors");
    qtm->add_option("--v", o.v, "real spectral argument");
    qtm->add_option("--count", o.count, "eigenvalues to report");
    auto* dz = app.add_subcommand("dvf-zeros", "zeros of T_m for the solved state");
    auto* ver = app.add_subcommand("verify", "T/Y-system residuals and QTM oracle");
    ver->add_option("--points", o.points, "random points per level");
    auto* tba = app.add_subcommand("tba", "largest-eigenvalue NLIE and free energy");
    auto* exc = app.add_subcommand("excited", "second-eigenvalue NLIE and correlation length");
    auto* scan = app.add_subcommand("scan", "temperature scan");
    scan->add_option("--betas", o.betas, "inverse temperatures, strictly increasing")->delimiter(',');
    scan->add_flag("--xi", o.with_xi, "also solve for the correlation length");
    auto* fig = app.add_subcommand("figure", "root and zero data for figures 1-6");
    fig->add_option("--which", o.which, "figure number")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    if (optCfg->count() > 0) o.config = optCfg->as<std::string>();
    auto sub = app.get_subcommands().front();
    if (o.out.empty()) o.out = "runs/" + sub->get_name();

    try {
        if (sub == bae) return cmd_bae(o);
        if (sub == qtm) return cmd_qtm(o);
        if (sub == dz) return cmd_dvf_zeros(o);
        if (sub == ver) return cmd_verify(o);
        if (sub == tba) return cmd_tba(o);
        if (sub == exc) return cmd_excited(o);
        if (sub == scan) return cmd_scan(o);
        if (sub == fig) return cmd_figure(o, optN->count() > 0, optU->count() > 0);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kConfig;
    } catch (const ConvergenceFailure& e) {
        std::fprintf(stderr, "convergence failure: %s\n", e.what());
        return kConvergence;
    } catch (const ValidationFailure& e) {
        std::fprintf(stderr, "validation failure: %s\n", e.what());
        return kValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConvergence;
    }
    return kConfig;
}
