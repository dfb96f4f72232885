#include "vortexsol/functionals.hpp"

#include "vortexsol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace vortexsol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_samples(const RadialGrid& grid, std::span<const double> A, const char* what)
{
    if (A.size() != grid.size()) {
        throw ParameterError(std::string(what) + ": expected " + std::to_string(grid.size()) +
                             " samples, got " + std::to_string(A.size()));
    }
}

void check_charge(int m, const char* what)
{
    if (m == 0) {
        throw ParameterError(std::string(what) + ": topological charge must satisfy |m| >= 1");
    }
}

// A^3/(1+A^2)^2 = f(A^2) A and its derivative in A.
double cubic_response(double A)
{
    const double d = 1.0 + A * A;
    return A * A * A / (d * d);
}

double cubic_response_slope(double A)
{
    const double a2 = A * A;
    const double d = 1.0 + a2;
    return (3.0 * a2 - a2 * a2) / (d * d * d);
}

} // namespace

double photon_number(const RadialGrid& grid, std::span<const double> A)
{
    check_samples(grid, A, "photon_number");
    double sum = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        sum += grid.weights[i] * grid.nodes[i] * A[i] * A[i];
    }
    return kTwoPi * sum;
}

double j_functional(const RadialGrid& grid, std::span<const double> A,
                    std::span<const double> A_r, int m)
{
    check_samples(grid, A, "j_functional");
    check_samples(grid, A_r, "j_functional");
    check_charge(m, "j_functional");
    const double m2 = static_cast<double>(m) * m;
    double sum = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        const double r = grid.nodes[i];
        const double a2 = A[i] * A[i];
        const double integrand = r * A_r[i] * A_r[i] + m2 / r * a2 - r * std::log1p(a2) +
                                 r * a2 / (1.0 + a2);
        sum += grid.weights[i] * integrand;
    }
    return 0.5 * sum;
}

double action_functional(const RadialGrid& grid, std::span<const double> A,
                         std::span<const double> A_r, int m, double lambda)
{
    check_samples(grid, A, "action_functional");
    check_samples(grid, A_r, "action_functional");
    check_charge(m, "action_functional");
    const double m2 = static_cast<double>(m) * m;
    double sum = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        const double r = grid.nodes[i];
        const double a2 = A[i] * A[i];
        const double integrand = r * A_r[i] * A_r[i] + m2 / r * a2 + lambda * r * a2 -
                                 r * std::log1p(a2) + (r - r / (1.0 + a2));
        sum += grid.weights[i] * integrand;
    }
    return 0.5 * sum;
}

double energy(const RadialGrid& grid, std::span<const double> A, std::span<const double> A_r)
{
    check_samples(grid, A, "energy");
    check_samples(grid, A_r, "energy");
    double sum = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        const double r = grid.nodes[i];
        sum += grid.weights[i] * (r * A_r[i] * A_r[i] + A[i] * A[i] / r);
    }
    return sum;
}

Eigen::VectorXd grad_j_coeffs(const SpectralBasis& basis, const VariationalVector& a, int m)
{
    check_charge(m, "grad_j_coeffs");
    const auto prof = synth(basis, a);
    const RadialGrid& grid = basis.grid();
    const auto n = static_cast<Eigen::Index>(grid.size());
    const double m2 = static_cast<double>(m) * m;

    Eigen::VectorXd value_part(n), slope_part(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = grid.nodes[i];
        const double w = grid.weights[i];
        value_part[i] = w * (m2 / r * prof.A[i] - r * cubic_response(prof.A[i]));
        slope_part[i] = w * r * prof.A_r[i];
    }
    return basis.psi() * value_part + basis.dpsi() * slope_part;
}

Eigen::MatrixXd hessian_j_coeffs(const SpectralBasis& basis, const VariationalVector& a, int m)
{
    check_charge(m, "hessian_j_coeffs");
    const auto prof = synth(basis, a);
    const RadialGrid& grid = basis.grid();
    const auto n = static_cast<Eigen::Index>(grid.size());
    const double m2 = static_cast<double>(m) * m;

    Eigen::VectorXd value_w(n), slope_w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = grid.nodes[i];
        const double w = grid.weights[i];
        value_w[i] = w * (m2 / r - r * cubic_response_slope(prof.A[i]));
        slope_w[i] = w * r;
    }
    return basis.dpsi() * slope_w.asDiagonal() * basis.dpsi().transpose() +
           basis.psi() * value_w.asDiagonal() * basis.psi().transpose();
}

double lambda_from_profile(const RadialGrid& grid, std::span<const double> A,
                           std::span<const double> A_r, int m, double N0)
{
    if (!(N0 > 0.0)) {
        throw ParameterError("lambda_from_profile: N0 must be positive");
    }
    check_samples(grid, A, "lambda_from_profile");
    check_samples(grid, A_r, "lambda_from_profile");
    const double m2 = static_cast<double>(m) * m;
    double sum = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        const double r = grid.nodes[i];
        const double a2 = A[i] * A[i];
        const double d = 1.0 + a2;
        sum += grid.weights[i] * (r * A_r[i] * A_r[i] + m2 / r * a2 - r * a2 * a2 / (d * d));
    }
    return -kTwoPi / N0 * sum;
}

bool photon_number_matches(const RadialGrid& grid, std::span<const double> A, double N0,
                           double rtol)
{
    return std::abs(photon_number(grid, A) - N0) <= rtol * std::abs(N0);
}

double el_residual(const SpectralBasis& basis, const VariationalVector& a, int m, double lambda)
{
    // With the orthonormal basis <N'(A), psi_j> = 2 a_j exactly; assemble it
    // by quadrature anyway so the residual does not lean on orthonormality.
    const auto prof = synth(basis, a);
    const RadialGrid& grid = basis.grid();
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd rA(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rA[i] = grid.weights[i] * grid.nodes[i] * prof.A[i];
    }
    const Eigen::VectorXd n_prime = 2.0 * kTwoPi * (basis.psi() * rA);
    const Eigen::VectorXd g = grad_j_coeffs(basis, a, m);
    return (g + lambda / (2.0 * kTwoPi) * n_prime).norm();
}

double strong_residual(const SpectralBasis& basis, const VariationalVector& a, int m,
                       double lambda, double lo, double hi)
{
    const auto prof = synth(basis, a);
    const RadialGrid& grid = basis.grid();
    const double m2 = static_cast<double>(m) * m;
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.nodes[i];
        if (r < lo || r > hi) {
            continue;
        }
        const double A = prof.A[i];
        const double res = prof.A_rr[i] + prof.A_r[i] / r - m2 / (r * r) * A - lambda * A +
                           cubic_response(A);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

} // namespace vortexsol
