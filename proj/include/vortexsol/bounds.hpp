#pragma once

#include "vortexsol/solution.hpp"

#include <optional>
#include <span>

namespace vortexsol {

/// First positive zero of the Bessel function J0.
inline constexpr double kBesselJ0FirstZero = 2.4048255577;

/// 2 ln 2 - 1, recurring in every tent-function bound.
double tent_log_constant();

/// Upper bound on the frequency shift of any nontrivial solution:
/// f_max - (r0^2 + m^2) / R^2. R may be +infinity.
double necessary_upper_bound(int m, double R, double f_max = 0.25);

/// k(b) = (ln(1+b^2) + (3/b) atan(b) - 3) / b^2, even in b, k(0) = 0.
double k_of_b(double b);

struct KMax {
    double k_max = 0.0;
    double b0 = 0.0;
};

/// Maximizer of k on (lo, hi] by golden-section search followed by a
/// Newton polish on k'(b) = 0.
KMax find_k_max(double lo = 0.0, double hi = 10.0);

struct DirectExistence {
    double lambda_max = 0.0;       // 3 k_max / (1 + delta)
    double R_min = 0.0;            // sqrt(12 (1 + m^2 (2ln2-1)) / (lambda delta))
    double R_min_theorem = 0.0;    // sqrt(6 (1 + m^2 (2ln2-1)) / lambda), the delta = 1 statement
};

/// Throws DomainError unless 0 < lambda < 3 k_max / (1 + delta) and delta > 0.
DirectExistence direct_existence_region(double lambda, int m, double delta = 1.0);

/// Closed-form values for the tent profile A0 peaking at r = a with height b
/// on [0, 2a].
struct TentOracles {
    double int_r_A2 = 0.0;         // int r A0^2
    double int_r_Ar2 = 0.0;        // int r A0'^2
    double int_A2_over_r = 0.0;    // int A0^2 / r
    double int_r_log = 0.0;        // int r ln(1 + A0^2)
    double int_r_over = 0.0;       // int r / (1 + A0^2)
    double I_closed = 0.0;         // action at lambda
    double J_closed = 0.0;
};

TentOracles tent_oracles(double a_half, double b, int m, double lambda);

/// Tent profile sample at radius r.
double tent_profile(double a_half, double b, double r);

struct PhotonPredicates {
    bool small_photon_excluded = false;
    bool hypothesis_holds = true;     // m^2 + r^2 lambda > 0 on [0, R]
    bool negative_lambda_forced = false;
    double charge_threshold = 0.0;      // N0 / (2 pi)
    double tent_b = 0.0;                // b with b^2 = 3 N0 / (pi R^2)
    double lambda_lower = 0.0;
};

PhotonPredicates photon_predicates(double N0, int m, double R,
                                 std::optional<double> lambda = std::nullopt);

struct BoundsReport {
    int m = 1;
    double R = 0.0;
    std::optional<double> N0;
    std::optional<double> lambda;

    double r0 = kBesselJ0FirstZero;
    double f_max = 0.25;
    double necessary_upper = 0.0;
    std::optional<bool> necessary_ok;

    std::optional<PhotonPredicates> photon;

    double k_max = 0.0;
    double b0 = 0.0;
    double lambda_max_direct = 0.0;     // (3/2) k_max, delta = 1
    double lambda_limit_direct = 0.0;   // 3 k_max, delta -> 0
    std::optional<DirectExistence> direct;
    std::optional<bool> direct_radius_ok;
};

BoundsReport make_bounds_report(int m, double R, std::optional<double> N0,
                                std::optional<double> lambda);

struct DecayFit {
    bool available = false;
    double fitted_rate = 0.0;      // slope of -ln A^2 against r
    double C_fit = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    int samples_used = 0;
    double required_rate = 0.0;    // 0.75 sqrt(lambda)
    bool rate_ok = false;
};

/// Least-squares fit of ln A^2 = ln C - rate * r over [0.6 R, 0.9 R].
/// Samples with |A| <= 1e-12 are skipped; fewer than two usable samples
/// leave the fit unavailable. Throws DomainError for lambda <= 0.
DecayFit decay_fit(std::span<const double> r, std::span<const double> A, double lambda,
                   double R);
DecayFit decay_fit(const SolitonSolution& solution);

} // namespace vortexsol
