#include "vortexsol/optimizer.hpp"

#include "vortexsol/bounds.hpp"
#include "vortexsol/errors.hpp"
#include "vortexsol/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace vortexsol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kOutputSamples = 512;
constexpr int kPeakSearchSamples = 4096;
constexpr double kMinStep = 1e-20;

// Polish steps may raise the objective by at most this much (relative),
// which is the rounding floor of the quadrature sums.
constexpr double kPolishSlack = 1e-13;

constexpr double kTrivialPhotonNumber = 1e-6;

struct Manifold {
    bool sphere = false;
    double radius2 = 0.0;

    Eigen::VectorXd retract(const Eigen::VectorXd& x) const
    {
        return sphere ? sphere_project(x, radius2) : x;
    }

    Eigen::VectorXd tangent(const Eigen::VectorXd& x, const Eigen::VectorXd& g) const
    {
        return sphere ? Eigen::VectorXd(g - (g.dot(x) / radius2) * x) : g;
    }
};

std::optional<Eigen::VectorXd> newton_step(const Objective& obj, const Manifold& mf,
                                           const Eigen::VectorXd& x, const Eigen::VectorXd& g)
{
    const Eigen::MatrixXd H = obj.hessian(x);
    const auto n = x.size();
    if (!mf.sphere) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        if (ldlt.info() != Eigen::Success) {
            return std::nullopt;
        }
        Eigen::VectorXd step = ldlt.solve(-g);
        if (!step.allFinite()) {
            return std::nullopt;
        }
        return step;
    }
    const double xi = g.dot(x) / (2.0 * mf.radius2);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1);
    K.topLeftCorner(n, n) = H - 2.0 * xi * Eigen::MatrixXd::Identity(n, n);
    K.topRightCorner(n, 1) = x;
    K.bottomLeftCorner(1, n) = x.transpose();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs.head(n) = -(g - 2.0 * xi * x);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (!lu.isInvertible()) {
        return std::nullopt;
    }
    Eigen::VectorXd sol = lu.solve(rhs);
    if (!sol.allFinite()) {
        return std::nullopt;
    }
    return Eigen::VectorXd(sol.head(n));
}

MinimizerResult descend(const Objective& obj, const Eigen::VectorXd& x0, const Manifold& mf,
                        const SolverConfig& cfg)
{
    cfg.validate();
    MinimizerResult res;
    Eigen::VectorXd x = mf.retract(x0);
    double f = obj.value(x);
    Eigen::VectorXd g = obj.gradient(x);
    Eigen::VectorXd rg = mf.tangent(x, g);
    double pg = rg.norm();
    double step = cfg.step_init;
    res.history.push_back(f);

    auto finish = [&](bool converged, std::string reason) {
        res.x = x;
        res.value = f;
        res.gradient = g;
        res.multiplier = mf.sphere ? g.dot(x) / (2.0 * mf.radius2) : 0.0;
        res.pg_norm = pg;
        res.converged = converged;
        res.stop_reason = std::move(reason);
        return res;
    };

    for (int it = 0;; ++it) {
        if (pg <= cfg.grad_tol * (1.0 + std::abs(f))) {
            return finish(true, "gradient-tolerance");
        }
        const auto h = res.history.size();
        if (h > static_cast<std::size_t>(cfg.stall_window) &&
            std::abs(res.history[h - 1 - cfg.stall_window] - f) <=
                cfg.stall_rtol * (1.0 + std::abs(f))) {
            return finish(true, "objective-stall");
        }
        if (it >= cfg.max_iters) {
            return finish(false, "max-iterations");
        }

        bool accepted = false;
        if (cfg.newton_polish && obj.hessian && pg <= cfg.newton_switch * (1.0 + std::abs(f))) {
            if (auto dx = newton_step(obj, mf, x, g)) {
                const Eigen::VectorXd x_try = mf.retract(x + *dx);
                const double f_try = obj.value(x_try);
                if (f_try <= f + kPolishSlack * (1.0 + std::abs(f))) {
                    const Eigen::VectorXd g_try = obj.gradient(x_try);
                    const Eigen::VectorXd rg_try = mf.tangent(x_try, g_try);
                    if (rg_try.norm() < pg) {
                        x = x_try;
                        f = f_try;
                        g = g_try;
                        rg = rg_try;
                        pg = rg.norm();
                        accepted = true;
                    }
                }
            }
        }

        if (!accepted) {
            double t = step;
            Eigen::VectorXd x_try;
            double f_try = 0.0;
            for (;;) {
                x_try = mf.retract(x - t * rg);
                f_try = obj.value(x_try);
                if (f_try <= f - cfg.sufficient_decrease * t * pg * pg) {
                    break;
                }
                t *= cfg.contraction;
                if (t < kMinStep) {
                    return finish(false, "line-search-failed");
                }
            }
            const Eigen::VectorXd g_try = obj.gradient(x_try);
            const Eigen::VectorXd rg_try = mf.tangent(x_try, g_try);

            // Barzilai-Borwein guess for the next trial step
            const Eigen::VectorXd s = x_try - x;
            const Eigen::VectorXd y = rg_try - rg;
            const double sy = s.dot(y);
            step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-10, 1e10) : t / cfg.contraction;

            x = x_try;
            f = f_try;
            g = g_try;
            rg = rg_try;
            pg = rg.norm();
        }
        res.history.push_back(f);
        res.iterations = it + 1;
    }
}

// Largest |A| on a dense uniform grid, refined by golden section.
std::pair<double, double> peak_amplitude(const SpectralBasis& basis, const Eigen::VectorXd& raw)
{
    const double R = basis.radius();
    const double h = R / kPeakSearchSamples;
    int best = 0;
    double best_val = 0.0;
    for (int i = 0; i <= kPeakSearchSamples; ++i) {
        const double v = std::abs(basis.value_at(raw, i * h));
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double lo = std::max(0.0, (best - 1) * h);
    double hi = std::min(R, (best + 1) * h);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto amp = [&](double r) { return std::abs(basis.value_at(raw, r)); };
    double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
    double fc = amp(c), fd = amp(d);
    while (hi - lo > 1e-12 * R) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = amp(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = amp(d);
        }
    }
    const double r_peak = 0.5 * (lo + hi);
    const double v = amp(r_peak);
    if (v >= best_val) {
        return {v, r_peak};
    }
    return {best_val, best * h};
}

Objective j_objective(const SpectralBasis& basis, int m)
{
    Objective obj;
    obj.value = [&basis, m](const Eigen::VectorXd& a) {
        const auto p = synth(basis, a);
        return j_functional(basis.grid(), p.A, p.A_r, m);
    };
    obj.gradient = [&basis, m](const Eigen::VectorXd& a) { return grad_j_coeffs(basis, a, m); };
    obj.hessian = [&basis, m](const Eigen::VectorXd& a) { return hessian_j_coeffs(basis, a, m); };
    return obj;
}

// Sign normalization, output sampling and the diagnostics shared by both modes.
void finalize(SolitonSolution& sol, const SpectralBasis& basis, const SolverConfig& cfg)
{
    const RadialGrid& grid = basis.grid();
    auto prof = synth(basis, sol.a);
    const auto [lo_it, hi_it] = std::minmax_element(prof.A.begin(), prof.A.end());
    if (!prof.A.empty() && -*lo_it > *hi_it) {
        sol.a = -sol.a;
        prof = synth(basis, sol.a);
    }

    const Eigen::VectorXd raw = basis.raw_coefficients(sol.a);
    sol.R = basis.radius();
    sol.profile_r.resize(kOutputSamples);
    sol.profile_A.resize(kOutputSamples);
    for (int i = 0; i < kOutputSamples; ++i) {
        const double r = sol.R * i / (kOutputSamples - 1);
        sol.profile_r[i] = r;
        sol.profile_A[i] = basis.value_at(raw, r);
    }
    const auto [amax, rmax] = peak_amplitude(basis, raw);
    sol.A_max = amax;
    sol.r_at_max = rmax;

    sol.photon_number = photon_number(grid, prof.A);
    sol.J_value = j_functional(grid, prof.A, prof.A_r, sol.m);
    sol.min_A = prof.A.empty() ? 0.0 : *std::min_element(prof.A.begin(), prof.A.end());
    sol.positivity_ok = sol.min_A >= -cfg.positivity_rtol * sol.A_max;
}

} // namespace

std::string to_string(InitKind kind)
{
    switch (kind) {
    case InitKind::tent: return "tent";
    case InitKind::single_mode: return "mode1";
    case InitKind::random: return "random";
    }
    return "tent";
}

InitKind parse_init_kind(const std::string& text)
{
    if (text == "tent" || text == "tent-projection") {
        return InitKind::tent;
    }
    if (text == "mode1" || text == "single-mode") {
        return InitKind::single_mode;
    }
    if (text == "random") {
        return InitKind::random;
    }
    throw ParameterError("unknown init kind '" + text + "' (expected tent|mode1|random)");
}

void SolverConfig::validate() const
{
    if (!(grad_tol > 0.0)) {
        throw ParameterError("SolverConfig: grad_tol must be positive");
    }
    if (!(contraction > 0.0 && contraction < 1.0)) {
        throw ParameterError("SolverConfig: contraction must lie in (0, 1)");
    }
    if (!(sufficient_decrease > 0.0 && sufficient_decrease < 0.5)) {
        throw ParameterError("SolverConfig: sufficient-decrease constant must lie in (0, 1/2)");
    }
    if (max_iters < 0 || !(step_init > 0.0) || stall_window < 1) {
        throw ParameterError("SolverConfig: invalid iteration settings");
    }
}

VariationalVector sphere_project(const VariationalVector& a, double N0)
{
    if (!(N0 > 0.0)) {
        throw ParameterError("sphere_project: N0 must be positive");
    }
    const double n2 = a.squaredNorm();
    if (!(n2 > 0.0)) {
        throw DegenerateInputError("sphere_project: zero vector has no projection");
    }
    return a * std::sqrt(N0 / n2);
}

MinimizerResult minimize_on_sphere(const Objective& objective, const Eigen::VectorXd& x0,
                                   double radius2, const SolverConfig& config)
{
    return descend(objective, x0, Manifold{true, radius2}, config);
}

MinimizerResult minimize_unconstrained(const Objective& objective, const Eigen::VectorXd& x0,
                                       const SolverConfig& config)
{
    return descend(objective, x0, Manifold{false, 0.0}, config);
}

VariationalVector initial_vector(const SpectralBasis& basis, InitKind kind, std::uint64_t seed,
                                 double target_norm2, double tent_height)
{
    const int n = basis.size();
    VariationalVector a = VariationalVector::Zero(n);
    switch (kind) {
    case InitKind::tent: {
        const RadialGrid& grid = basis.grid();
        const double half = 0.5 * grid.R;
        std::vector<double> samples(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            samples[i] = tent_profile(half, tent_height, grid.nodes[i]);
        }
        a = basis.project(samples);
        break;
    }
    case InitKind::single_mode:
        a[0] = 1.0;
        break;
    case InitKind::random: {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int j = 0; j < n; ++j) {
            a[j] = normal(rng);
        }
        break;
    }
    }
    if (target_norm2 > 0.0) {
        a = sphere_project(a, target_norm2);
    }
    return a;
}

SolitonSolution minimize_constrained(const SpectralBasis& basis, const ProblemParams& params,
                                     const SolverConfig& config,
                                     std::optional<VariationalVector> init)
{
    if (!params.N0 || !(*params.N0 > 0.0)) {
        throw ParameterError("minimize_constrained: N0 must be positive");
    }
    if (params.m == 0) {
        throw ParameterError("minimize_constrained: |m| >= 1 required");
    }
    config.validate();
    const double N0 = *params.N0;
    const double R = basis.radius();

    VariationalVector a0;
    if (init) {
        a0 = *init;
    } else {
        const double b = std::sqrt(3.0 * N0 / (std::numbers::pi * R * R));
        a0 = initial_vector(basis, config.init, config.seed, N0, b);
    }

    const Objective obj = j_objective(basis, params.m);
    MinimizerResult res = minimize_on_sphere(obj, a0, N0, config);
    if (!res.converged) {
        throw ConvergenceError("constrained solve did not converge (" + res.stop_reason + ")",
                               std::move(res));
    }

    SolitonSolution sol;
    sol.mode = SolveMode::constrained;
    sol.m = params.m;
    sol.N0 = N0;
    sol.a = res.x;
    sol.iterations = res.iterations;
    sol.stop_reason = res.stop_reason;
    sol.pg_norm = res.pg_norm;
    sol.history = std::move(res.history);
    finalize(sol, basis, config);

    const auto prof = synth(basis, sol.a);
    const RadialGrid& grid = basis.grid();
    sol.lambda = lambda_from_profile(grid, prof.A, prof.A_r, sol.m, N0);
    // the multiplier is invariant under the sign flip in finalize
    sol.multiplier_raw = res.multiplier;
    sol.lambda_from_multiplier = -2.0 * kTwoPi * sol.multiplier_raw;
    sol.I_value = action_functional(grid, prof.A, prof.A_r, sol.m, sol.lambda);
    sol.residual_weak = el_residual(basis, sol.a, sol.m, sol.lambda);
    sol.residual_strong = strong_residual(basis, sol.a, sol.m, sol.lambda, 0.1 * R, 0.9 * R);
    sol.trivial = false;

    const auto report = make_bounds_report(sol.m, R, N0, sol.lambda);
    sol.bounds_ok = report.necessary_ok.value_or(false) && sol.lambda >= report.photon->lambda_lower;
    return sol;
}

SolitonSolution minimize_direct(const SpectralBasis& basis, const ProblemParams& params,
                                const SolverConfig& config, std::optional<VariationalVector> init)
{
    if (!params.lambda) {
        throw ParameterError("minimize_direct: lambda is required");
    }
    if (params.m == 0) {
        throw ParameterError("minimize_direct: |m| >= 1 required");
    }
    config.validate();
    const double lambda = *params.lambda;
    const int m = params.m;
    const double R = basis.radius();

    VariationalVector a0;
    if (init) {
        a0 = *init;
    } else {
        // Tent at the height maximizing k(b); for random/mode starts use the
        // tent's photon number so the start is not vanishingly small.
        const KMax km = find_k_max();
        const double half = 0.5 * R;
        const double scale2 = 2.0 * std::numbers::pi * (2.0 / 3.0) * half * half * km.b0 * km.b0;
        a0 = initial_vector(basis, config.init, config.seed,
                            config.init == InitKind::tent ? 0.0 : scale2, km.b0);
    }

    Objective obj = j_objective(basis, m);
    const double shift = lambda / kTwoPi;   // I = F + (lambda / 4 pi) |a|^2
    obj.value = [&basis, m, lambda](const Eigen::VectorXd& a) {
        const auto p = synth(basis, a);
        return action_functional(basis.grid(), p.A, p.A_r, m, lambda);
    };
    obj.gradient = [&basis, m, shift](const Eigen::VectorXd& a) {
        return Eigen::VectorXd(grad_j_coeffs(basis, a, m) + shift * a);
    };
    obj.hessian = [&basis, m, shift](const Eigen::VectorXd& a) {
        Eigen::MatrixXd H = hessian_j_coeffs(basis, a, m);
        H.diagonal().array() += shift;
        return H;
    };

    MinimizerResult res = minimize_unconstrained(obj, a0, config);
    if (!res.converged) {
        throw ConvergenceError("direct solve did not converge (" + res.stop_reason + ")",
                               std::move(res));
    }

    SolitonSolution sol;
    sol.mode = SolveMode::direct;
    sol.m = m;
    sol.lambda = lambda;
    sol.a = res.x;
    sol.iterations = res.iterations;
    sol.stop_reason = res.stop_reason;
    sol.pg_norm = res.pg_norm;
    sol.history = std::move(res.history);
    finalize(sol, basis, config);

    const auto prof = synth(basis, sol.a);
    const RadialGrid& grid = basis.grid();
    sol.N0 = sol.photon_number;
    sol.trivial = sol.photon_number < kTrivialPhotonNumber;
    sol.I_value = action_functional(grid, prof.A, prof.A_r, m, lambda);
    sol.residual_weak = el_residual(basis, sol.a, m, lambda);
    sol.residual_strong = strong_residual(basis, sol.a, m, lambda, 0.1 * R, 0.9 * R);
    if (sol.trivial) {
        sol.positivity_ok = true;
        sol.bounds_ok = true;
    } else {
        sol.lambda_from_multiplier = lambda_from_profile(grid, prof.A, prof.A_r, m, sol.photon_number);
        const auto report = make_bounds_report(m, R, sol.photon_number, lambda);
        sol.bounds_ok = report.necessary_ok.value_or(false) &&
                        lambda >= report.photon->lambda_lower;
    }
    return sol;
}

} // namespace vortexsol
