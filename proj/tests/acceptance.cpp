// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "vortexsol/basis.hpp"
#include "vortexsol/bounds.hpp"
#include "vortexsol/functionals.hpp"
#include "vortexsol/optimizer.hpp"
#include "vortexsol/quadrature.hpp"
#include "vortexsol/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace vortexsol;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail)
{
    std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

std::shared_ptr<const SpectralBasis> basis_R40()
{
    static const auto b = std::make_shared<const SpectralBasis>(
        std::make_shared<const RadialGrid>(build_grid(40.0, 64, 8)), 20);
    return b;
}

// Fraction of [0, R] on which A is within 5% of its peak.
double plateau_fraction(const SolitonSolution& s)
{
    int hit = 0;
    for (double v : s.profile_A) {
        if (v >= 0.95 * s.A_max) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(s.profile_A.size());
}

bool monotone(const std::vector<double>& v, bool increasing)
{
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (increasing ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
    }
    return true;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main()
{
    RunConfig base;
    base.out_dir.clear();

    // 1. photon-number table
    base.table = SweepTable::photon;
    const auto photon = run_sweep(base);
    {
        const double lam_ref[] = {0.0123, 0.0901, 0.1816, 0.1960, 0.2053, 0.2089};
        const double amp_ref[] = {0.2024, 0.6157, 1.1761, 1.3338, 1.4571, 1.4920};
        bool ok = photon.cells.size() == 6;
        double dl = 0.0, da = 0.0;
        std::vector<double> lam, amp;
        for (std::size_t i = 0; ok && i < photon.cells.size(); ++i) {
            const auto& s = photon.cells[i].solution;
            if (!s) { ok = false; break; }
            lam.push_back(s->lambda);
            amp.push_back(s->A_max);
            dl = std::max(dl, std::abs(s->lambda - lam_ref[i]));
            da = std::max(da, std::abs(s->A_max - amp_ref[i]));
            ok = ok && s->lambda < 0.2162 && s->A_max < 1.5;
        }
        ok = ok && dl <= 0.02 && da <= 0.06 && monotone(lam, true) && monotone(amp, true);
        report(1, "photon-number table", ok,
               fmt("max |dlambda| = %.2e (tol 0.02), max |dA_max| = %.2e (tol 0.06)", dl, da) +
                   ", monotone and below the critical values");
    }

    // 2. charge table
    base.table = SweepTable::charge;
    const auto charge = run_sweep(base);
    {
        const double lam_ref[] = {0.1816, 0.1599, 0.1388, 0.119, 0.1009};
        const double amp_ref[] = {1.1761, 0.9929, 0.8594, 0.7520, 0.6683};
        bool ok = charge.cells.size() == 5;
        double dl = 0.0, da = 0.0;
        std::vector<double> lam, amp;
        for (std::size_t i = 0; ok && i < charge.cells.size(); ++i) {
            const auto& s = charge.cells[i].solution;
            if (!s) { ok = false; break; }
            lam.push_back(s->lambda);
            amp.push_back(s->A_max);
            dl = std::max(dl, std::abs(s->lambda - lam_ref[i]));
            da = std::max(da, std::abs(s->A_max - amp_ref[i]));
        }
        ok = ok && dl <= 0.02 && da <= 0.06 && monotone(lam, false) && monotone(amp, false);
        report(2, "charge table", ok,
               fmt("max |dlambda| = %.2e (tol 0.02), max |dA_max| = %.2e (tol 0.06)", dl, da) +
                   ", strictly decreasing in m");
    }

    // 3. flat top
    {
        const auto& hi = photon.cells.size() == 6 ? photon.cells[5].solution : std::nullopt;
        const auto& lo = photon.cells.size() == 6 ? photon.cells[1].solution : std::nullopt;
        bool ok = hi && lo;
        double fhi = 0.0, flo = 0.0;
        if (ok) {
            fhi = plateau_fraction(*hi);
            flo = plateau_fraction(*lo);
            ok = fhi >= 0.25 && flo < 0.10;
        }
        report(3, "flat-top formation", ok,
               fmt("plateau fraction N0=5000: %.3f (>= 0.25), N0=100: %.3f (< 0.10)", fhi, flo));
    }

    // 4. tent oracles vs quadrature
    {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> Ua(1.0, 40.0), Ub(0.05, 5.0), Ul(0.0, 0.25);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const double half = Ua(rng), b = Ub(rng), lambda = Ul(rng);
            const int m = 1 + trial % 5;
            const auto g = build_grid(2.0 * half, 64, 8);
            std::vector<double> A(g.size()), Ar(g.size()), s1(g.size()), s2(g.size()), s3(g.size()),
                s4(g.size()), s5(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double r = g.nodes[i];
                A[i] = tent_profile(half, b, r);
                Ar[i] = r < half ? b / half : -b / half;
                s1[i] = r * A[i] * A[i];
                s2[i] = r * Ar[i] * Ar[i];
                s3[i] = A[i] * A[i] / r;
                s4[i] = r * std::log1p(A[i] * A[i]);
                s5[i] = r / (1.0 + A[i] * A[i]);
            }
            const auto c = tent_oracles(half, b, m, lambda);
            for (auto [q, ref] : {std::pair{integrate(g, s1), c.int_r_A2}, std::pair{integrate(g, s2), c.int_r_Ar2},
                                  std::pair{integrate(g, s3), c.int_A2_over_r},
                                  std::pair{integrate(g, s4), c.int_r_log},
                                  std::pair{integrate(g, s5), c.int_r_over},
                                  std::pair{action_functional(g, A, Ar, m, lambda), c.I_closed},
                                  std::pair{j_functional(g, A, Ar, m), c.J_closed}}) {
                worst = std::max(worst, rel(q, ref));
            }
        }
        report(4, "tent closed forms vs quadrature", worst < 1e-8,
               fmt("max relative error %.2e over 20 random (a, b) (tol 1e-8)", worst));
    }

    // 5. gradient vs central differences
    {
        const auto& b = *basis_R40();
        std::mt19937_64 rng(5);
        std::normal_distribution<double> N(0.0, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            VariationalVector a(20);
            for (int j = 0; j < 20; ++j) a[j] = 8.0 * N(rng) * std::pow(0.85, j);
            const int m = 1 + trial % 5;
            const Eigen::VectorXd g = grad_j_coeffs(b, a, m);
            auto F = [&](const VariationalVector& x) {
                const auto p = synth(b, x);
                return j_functional(b.grid(), p.A, p.A_r, m);
            };
            const double h = 1e-5;
            for (int j = 0; j < 20; ++j) {
                VariationalVector ap = a, am = a;
                ap[j] += h;
                am[j] -= h;
                worst = std::max(worst, rel((F(ap) - F(am)) / (2.0 * h), g[j]));
            }
        }
        report(5, "gradient check", worst < 1e-6,
               fmt("max per-component relative error %.2e over 10 vectors (tol 1e-6)", worst));
    }

    // 6. orthonormality and Parseval
    {
        const auto& b = *basis_R40();
        const auto& g = b.grid();
        Eigen::MatrixXd G(20, 20);
        for (int j = 0; j < 20; ++j) {
            for (int k = 0; k < 20; ++k) {
                double s = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    s += g.weights[i] * g.nodes[i] * b.psi()(j, i) * b.psi()(k, i);
                }
                G(j, k) = 2.0 * kPi * s;
            }
        }
        const double orth = (G - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff();
        std::mt19937_64 rng(6);
        std::normal_distribution<double> N(0.0, 1.0);
        double pars = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            VariationalVector a(20);
            for (int j = 0; j < 20; ++j) a[j] = 5.0 * N(rng);
            pars = std::max(pars, rel(photon_number(g, synth(b, a).A), a.squaredNorm()));
        }
        report(6, "orthonormality and Parseval", orth < 1e-10 && pars < 1e-9,
               fmt("max |<psi_j,psi_k> - delta| = %.2e (tol 1e-10), Parseval %.2e (tol 1e-9)", orth, pars));
    }

    // 7. multiplier consistency at tight tolerance
    {
        ProblemParams p;
        p.N0 = 500.0;
        SolverConfig sc;
        sc.grad_tol = 1e-10;
        bool ok = false;
        double diff = std::numeric_limits<double>::quiet_NaN();
        try {
            const auto s = minimize_constrained(*basis_R40(), p, sc);
            // |xi| from |g| / (2 |a|) agrees with g.a / (2 N0) only at a stationary point
            const Eigen::VectorXd g = grad_j_coeffs(*basis_R40(), s.a, s.m);
            const double from_norm = std::copysign(4.0 * kPi * g.norm() / (2.0 * s.a.norm()),
                                                   s.lambda_from_multiplier);
            diff = std::max(std::abs(s.lambda - s.lambda_from_multiplier), std::abs(s.lambda - from_norm));
            ok = diff < 1e-6;
        } catch (const std::exception&) {
        }
        report(7, "KKT multiplier consistency", ok,
               fmt("|lambda(profile) - lambda(multiplier)| = %.2e (tol 1e-6)", diff));
    }

    // 8. analytic constants
    {
        const auto km = find_k_max();
        const double inf = necessary_upper_bound(1, std::numeric_limits<double>::infinity());
        const bool ok = std::abs(km.k_max - 0.0675407) <= 1e-6 && std::abs(km.b0 - 1.99379) <= 1e-4 &&
                        std::abs(inf - 0.25) < 1e-15 && std::abs(necessary_upper_bound(1, 1e8) - 0.25) < 1e-14;
        report(8, "analytic constants", ok,
               fmt("k_max = %.8f, b0 = %.6f, necessary bound as R -> inf = %.6f", km.k_max, km.b0, inf));
    }

    // 9. bound conformance on every table cell
    {
        bool ok = true;
        int cells = 0;
        double worst_min = 0.0;
        for (const auto* sweep : {&photon, &charge}) {
            for (const auto& rec : sweep->cells) {
                if (!rec.solution) { ok = false; continue; }
                const auto& s = *rec.solution;
                const double upper = necessary_upper_bound(s.m, s.R);
                const double lower = photon_predicates(s.N0, s.m, s.R).lambda_lower;
                ok = ok && s.lambda > 0.0 && s.lambda <= upper && s.lambda >= lower && s.positivity_ok;
                worst_min = std::min(worst_min, s.min_A / s.A_max);
                ++cells;
            }
        }
        ok = ok && cells == 11;
        report(9, "bound conformance and positivity", ok,
               fmt("%g cells inside (lower, necessary upper]; most negative min A / A_max = %.1e", cells, worst_min));
    }

    // 10. direct mode
    {
        ProblemParams p;
        SolverConfig sc;
        bool ok = false;
        double I1 = NAN, N1 = NAN, I3 = NAN;
        try {
            p.lambda = 0.1;
            const auto s1 = minimize_direct(*basis_R40(), p, sc);
            p.lambda = 0.3;
            const auto s3 = minimize_direct(*basis_R40(), p, sc);
            I1 = s1.I_value;
            N1 = s1.photon_number;
            I3 = s3.I_value;
            ok = I1 < 0.0 && N1 > 1.0 && !s1.trivial && s3.trivial && std::abs(I3) < 1e-8;
        } catch (const std::exception&) {
        }
        report(10, "direct minimization", ok,
               fmt("lambda=0.1: I = %.4g, N = %.4g; lambda=0.3: |I| = %.1e", I1, N1, std::abs(I3)));
    }

    // 11. tail decay
    {
        bool ok = false;
        double rate = NAN, need = NAN;
        if (photon.cells.size() == 6 && photon.cells[2].solution) {
            const auto fit = decay_fit(*photon.cells[2].solution);
            rate = fit.fitted_rate;
            need = fit.required_rate;
            ok = fit.available && fit.rate_ok;
        }
        report(11, "tail decay", ok, fmt("fitted rate %.4f >= 0.75 sqrt(lambda) = %.4f", rate, need));
    }

    // 12. determinism
    {
        const fs::path root = fs::temp_directory_path() / "vortexsol_acceptance_determinism";
        fs::remove_all(root);
        RunConfig c;
        c.table = SweepTable::photon;
        c.jobs = 2;
        c.solver.init = InitKind::random;
        c.solver.seed = 12345;
        c.out_dir = (root / "a").string();
        const auto r1 = run_sweep(c);
        c.out_dir = (root / "b").string();
        const auto r2 = run_sweep(c);
        const std::string s1 = slurp(r1.summary_path), s2 = slurp(r2.summary_path);
        const bool ok = !s1.empty() && s1 == s2;
        report(12, "determinism", ok, ok ? "summary CSVs byte-identical" : "summary CSVs differ");
        fs::remove_all(root);
    }

    std::printf("%d of 12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
