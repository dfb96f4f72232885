#pragma once

#include "vortexsol/basis.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vortexsol {

struct ProblemParams {
    int m = 1;
    double R = 40.0;
    std::optional<double> lambda;   // direct mode input
    std::optional<double> N0;       // constrained mode input
};

enum class InitKind { tent, single_mode, random };

std::string to_string(InitKind kind);
InitKind parse_init_kind(const std::string& text);

struct SolverConfig {
    int max_iters = 50000;
    double grad_tol = 1e-8;          // on ||projected gradient|| / (1 + |F|)
    double step_init = 1.0;
    double contraction = 0.5;
    double sufficient_decrease = 1e-4;
    std::uint64_t seed = 0;
    InitKind init = InitKind::tent;

    bool newton_polish = true;
    double newton_switch = 1e-3;     // try Newton once pg <= newton_switch * (1 + |F|)

    int stall_window = 5;
    double stall_rtol = 1e-12;

    // Interior dips below -positivity_rtol * A_max flag positivity_ok = false.
    double positivity_rtol = 1e-3;

    void validate() const;
};

enum class SolveMode { constrained, direct };

struct SolitonSolution {
    SolveMode mode = SolveMode::constrained;
    VariationalVector a;

    // uniform output grid on [0, R]
    std::vector<double> profile_r;
    std::vector<double> profile_A;

    double lambda = 0.0;
    double multiplier_raw = 0.0;          // xi with g = 2 xi a (constrained mode)
    double lambda_from_multiplier = 0.0;  // -4 pi xi
    double A_max = 0.0;
    double r_at_max = 0.0;
    double N0 = 0.0;                      // prescribed (constrained) or attained (direct)
    double photon_number = 0.0;           // quadrature value for the final profile
    int m = 1;
    double R = 0.0;
    double J_value = 0.0;
    double I_value = 0.0;
    double residual_weak = 0.0;
    double residual_strong = 0.0;
    double pg_norm = 0.0;
    int iterations = 0;
    std::string stop_reason;
    double min_A = 0.0;
    bool positivity_ok = false;
    bool bounds_ok = false;
    bool trivial = false;

    std::vector<double> history;          // objective per accepted iterate
};

} // namespace vortexsol
