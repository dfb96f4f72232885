#pragma once

#include "vortexsol/basis.hpp"
#include "vortexsol/solution.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vortexsol {

/// Smooth objective in coefficient space. The Hessian is optional and only
/// used by the Newton polish.
struct Objective {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
};

struct MinimizerResult {
    Eigen::VectorXd x;
    double value = 0.0;
    Eigen::VectorXd gradient;
    double multiplier = 0.0;   // xi in g = 2 xi x (sphere mode)
    double pg_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string stop_reason;
    std::vector<double> history;
};

/// Raised when the iteration cap is hit or the line search breaks down.
/// Carries the last iterate for diagnostics.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, MinimizerResult last)
        : std::runtime_error(what)
        , last_(std::move(last))
    {
    }

    const MinimizerResult& last() const { return last_; }

private:
    MinimizerResult last_;
};

/// a * sqrt(N0 / |a|^2). Throws DegenerateInputError for a = 0.
VariationalVector sphere_project(const VariationalVector& a, double N0);

/// Minimize on the sphere |x|^2 = radius2 by Riemannian gradient descent
/// (projection retraction, Barzilai-Borwein trial step, Armijo backtracking)
/// with an optional Newton polish on the KKT system.
MinimizerResult minimize_on_sphere(const Objective& objective, const Eigen::VectorXd& x0,
                                   double radius2, const SolverConfig& config);

/// Same machinery without the constraint.
MinimizerResult minimize_unconstrained(const Objective& objective, const Eigen::VectorXd& x0,
                                       const SolverConfig& config);

/// Starting vector for a solve; N0 scales tent and random starts for the
/// constrained problem and is ignored by the direct problem's tent start.
VariationalVector initial_vector(const SpectralBasis& basis, InitKind kind, std::uint64_t seed,
                                 double target_norm2, double tent_height);

/// min J(sum a_j psi_j) subject to sum a_j^2 = N0.
SolitonSolution minimize_constrained(const SpectralBasis& basis, const ProblemParams& params,
                                     const SolverConfig& config,
                                     std::optional<VariationalVector> init = std::nullopt);

/// Unconstrained min of the action at the prescribed lambda.
SolitonSolution minimize_direct(const SpectralBasis& basis, const ProblemParams& params,
                                const SolverConfig& config,
                                std::optional<VariationalVector> init = std::nullopt);

} // namespace vortexsol
