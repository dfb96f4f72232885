#include "vortexsol/bounds.hpp"

#include "vortexsol/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace vortexsol {

namespace {

double tent_g(double b, int m, double R)
{
    const double m2 = static_cast<double>(m) * m;
    return 3.0 - 3.0 / b * std::atan(b) - std::log1p(b * b) +
           4.0 * b * b / (R * R) * (1.0 + m2 * tent_log_constant());
}

// atan(b)/b without the removable singularity
double atan_over(double b)
{
    if (std::abs(b) < 1e-4) {
        const double b2 = b * b;
        return 1.0 - b2 / 3.0 + b2 * b2 / 5.0;
    }
    return std::atan(b) / b;
}

double k_prime(double b)
{
    const double b2 = b * b;
    const double u = std::log1p(b2) + 3.0 * atan_over(b) - 3.0;
    const double du = 2.0 * b / (1.0 + b2) + 3.0 / (b * (1.0 + b2)) - 3.0 * std::atan(b) / b2;
    return du / b2 - 2.0 * u / (b2 * b);
}

} // namespace

double tent_log_constant()
{
    return 2.0 * std::numbers::ln2 - 1.0;
}

double necessary_upper_bound(int m, double R, double f_max)
{
    if (!(R > 0.0)) {
        throw ParameterError("necessary_upper_bound: R must be positive");
    }
    const double r0 = kBesselJ0FirstZero;
    const double m2 = static_cast<double>(m) * m;
    return f_max - (r0 * r0 + m2) / (R * R);
}

double k_of_b(double b)
{
    const double b2 = b * b;
    if (b2 < 1e-6) {
        // ln(1+x) + 3 atan(b)/b - 3 = x^2/10 - 2 x^3/21 + x^4/12 - ..., x = b^2
        return b2 / 10.0 - 2.0 * b2 * b2 / 21.0 + b2 * b2 * b2 / 12.0;
    }
    return (std::log1p(b2) + 3.0 / b * std::atan(b) - 3.0) / b2;
}

KMax find_k_max(double lo, double hi)
{
    if (!(hi > lo)) {
        throw ParameterError("find_k_max: empty bracket");
    }
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double kc = k_of_b(c), kd = k_of_b(d);
    while (b - a > 1e-9 * (1.0 + std::abs(c))) {
        if (kc > kd) {
            b = d;
            d = c;
            kd = kc;
            c = b - inv_phi * (b - a);
            kc = k_of_b(c);
        } else {
            a = c;
            c = d;
            kc = kd;
            d = a + inv_phi * (b - a);
            kd = k_of_b(d);
        }
    }
    double x = 0.5 * (a + b);

    // secant polish on k'(b) = 0
    double x_prev = x * (1.0 + 1e-6);
    double f_prev = k_prime(x_prev);
    for (int it = 0; it < 20; ++it) {
        const double fx = k_prime(x);
        if (fx == f_prev) {
            break;
        }
        const double next = x - fx * (x - x_prev) / (fx - f_prev);
        x_prev = x;
        f_prev = fx;
        if (!std::isfinite(next) || next <= lo || next > hi) {
            break;
        }
        if (std::abs(next - x) < 1e-14 * x) {
            x = next;
            break;
        }
        x = next;
    }
    return {k_of_b(x), x};
}

DirectExistence direct_existence_region(double lambda, int m, double delta)
{
    if (!(delta > 0.0)) {
        throw DomainError("direct_existence_region: delta must be positive");
    }
    const KMax km = find_k_max();
    DirectExistence out;
    out.lambda_max = 3.0 * km.k_max / (1.0 + delta);
    if (!(lambda > 0.0)) {
        throw DomainError("direct_existence_region: lambda must be positive (lambda > 0 violated)");
    }
    if (!(lambda < out.lambda_max)) {
        throw DomainError("direct_existence_region: lambda must be below 3 k_max / (1 + delta) = " +
                          std::to_string(out.lambda_max));
    }
    const double m2 = static_cast<double>(m) * m;
    const double c = 1.0 + m2 * tent_log_constant();
    out.R_min = std::sqrt(12.0 * c / (lambda * delta));
    out.R_min_theorem = std::sqrt(6.0 * c / lambda);
    return out;
}

double tent_profile(double a_half, double b, double r)
{
    if (r <= a_half) {
        return b / a_half * r;
    }
    return b / a_half * (2.0 * a_half - r);
}

TentOracles tent_oracles(double a_half, double b, int m, double lambda)
{
    if (!(a_half > 0.0) || !(b > 0.0)) {
        throw ParameterError("tent_oracles: a and b must be positive");
    }
    const double a2 = a_half * a_half;
    const double b2 = b * b;
    const double L = tent_log_constant();
    const double m2 = static_cast<double>(m) * m;
    const double at = atan_over(b);   // atan(b)/b

    TentOracles t;
    t.int_r_A2 = 2.0 / 3.0 * a2 * b2;
    t.int_r_Ar2 = 2.0 * b2;
    t.int_A2_over_r = 2.0 * b2 * L;
    t.int_r_log = 2.0 * a2 * (std::log1p(b2) - 2.0 + 2.0 * at);
    t.int_r_over = 2.0 * a2 * at;

    const double shape = 3.0 - 3.0 * at - std::log1p(b2);
    t.I_closed = a2 * (shape + lambda * b2 / 3.0 + b2 / a2 * (1.0 + m2 * L));
    const double R = 2.0 * a_half;
    t.J_closed = R * R / 4.0 * (shape + 4.0 * b2 / (R * R) * (1.0 + m2 * L));
    return t;
}

PhotonPredicates photon_predicates(double N0, int m, double R, std::optional<double> lambda)
{
    if (!(N0 > 0.0) || !(R > 0.0)) {
        throw ParameterError("photon_predicates: N0 and R must be positive");
    }
    PhotonPredicates p;
    if (lambda && !(*lambda >= 0.0 && m != 0)) {
        const double m2 = static_cast<double>(m) * m;
        p.hypothesis_holds = m2 + R * R * *lambda > 0.0;
    }
    p.small_photon_excluded = N0 <= 0.5 && p.hypothesis_holds;
    p.charge_threshold = N0 / (2.0 * std::numbers::pi);
    p.negative_lambda_forced = std::abs(m) >= p.charge_threshold;
    p.tent_b = std::sqrt(3.0 * N0 / (std::numbers::pi * R * R));
    p.lambda_lower = -(std::numbers::pi * R * R / (2.0 * N0)) * tent_g(p.tent_b, m, R) - 1.0;
    return p;
}

BoundsReport make_bounds_report(int m, double R, std::optional<double> N0,
                                std::optional<double> lambda)
{
    BoundsReport rep;
    rep.m = m;
    rep.R = R;
    rep.N0 = N0;
    rep.lambda = lambda;
    rep.necessary_upper = necessary_upper_bound(m, R, rep.f_max);
    if (lambda) {
        rep.necessary_ok = *lambda > 0.0 && *lambda <= rep.necessary_upper;
    }
    if (N0) {
        rep.photon = photon_predicates(*N0, m, R, lambda);
    }
    const KMax km = find_k_max();
    rep.k_max = km.k_max;
    rep.b0 = km.b0;
    rep.lambda_max_direct = 1.5 * km.k_max;
    rep.lambda_limit_direct = 3.0 * km.k_max;
    if (lambda && *lambda > 0.0 && *lambda < rep.lambda_max_direct) {
        rep.direct = direct_existence_region(*lambda, m, 1.0);
        rep.direct_radius_ok = R >= rep.direct->R_min_theorem;
    }
    return rep;
}

DecayFit decay_fit(std::span<const double> r, std::span<const double> A, double lambda,
                   double R)
{
    if (!(lambda > 0.0)) {
        throw DomainError("decay_fit: requires lambda > 0");
    }
    if (r.size() != A.size()) {
        throw ParameterError("decay_fit: r and A lengths differ");
    }
    DecayFit fit;
    fit.window_lo = 0.6 * R;
    fit.window_hi = 0.9 * R;
    fit.required_rate = 0.75 * std::sqrt(lambda);

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < fit.window_lo || r[i] > fit.window_hi || std::abs(A[i]) <= 1e-12) {
            continue;
        }
        const double y = std::log(A[i] * A[i]);
        sx += r[i];
        sy += y;
        sxx += r[i] * r[i];
        sxy += r[i] * y;
        ++n;
    }
    fit.samples_used = n;
    if (n < 2) {
        return fit;
    }
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) {
        return fit;
    }
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    fit.available = true;
    fit.fitted_rate = -slope;
    fit.C_fit = std::exp(intercept);
    fit.rate_ok = fit.fitted_rate >= fit.required_rate;
    return fit;
}

DecayFit decay_fit(const SolitonSolution& solution)
{
    return decay_fit(solution.profile_r, solution.profile_A, solution.lambda, solution.R);
}

} // namespace vortexsol
