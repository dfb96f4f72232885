#pragma once

#include "vortexsol/basis.hpp"
#include "vortexsol/quadrature.hpp"

#include <Eigen/Dense>

#include <span>

namespace vortexsol {

/// Saturable focusing-defocusing response f(I) = I / (1 + I)^2.
struct NonlinearityModel {
    static constexpr double f_max = 0.25;   // attained at I = 1

    static double f(double intensity)
    {
        const double d = 1.0 + intensity;
        return intensity / (d * d);
    }
};

/// 2 pi int r A^2 dr.
double photon_number(const RadialGrid& grid, std::span<const double> A);

/// Constrained objective
///   J(A) = 1/2 int { r A_r^2 + (m^2/r) A^2 - r ln(1+A^2) + r A^2/(1+A^2) } dr.
double j_functional(const RadialGrid& grid, std::span<const double> A,
                    std::span<const double> A_r, int m);

/// Action at fixed frequency shift
///   I(A) = 1/2 int { r A_r^2 + (m^2/r) A^2 + lambda r A^2 - r ln(1+A^2) + r - r/(1+A^2) } dr.
double action_functional(const RadialGrid& grid, std::span<const double> A,
                         std::span<const double> A_r, int m, double lambda);

/// int { r A_r^2 + A^2 / r } dr.
double energy(const RadialGrid& grid, std::span<const double> A, std::span<const double> A_r);

/// g_j = <J'(A), psi_j> for A = synth(a).
Eigen::VectorXd grad_j_coeffs(const SpectralBasis& basis, const VariationalVector& a, int m);

/// Second variation of J in coefficient space, H_jk = <J''(A) psi_j, psi_k>.
Eigen::MatrixXd hessian_j_coeffs(const SpectralBasis& basis, const VariationalVector& a, int m);

/// lambda = -(2 pi / N0) int { r A_r^2 + (m^2/r) A^2 - r A^4/(1+A^2)^2 } dr.
/// Throws ParameterError for N0 <= 0.
double lambda_from_profile(const RadialGrid& grid, std::span<const double> A,
                           std::span<const double> A_r, int m, double N0);

/// True when the photon number of A matches N0 to the given relative tolerance.
bool photon_number_matches(const RadialGrid& grid, std::span<const double> A, double N0,
                           double rtol = 1e-8);

/// l2 norm over j of <J'(A), psi_j> + (lambda / 4 pi) <N'(A), psi_j>, the
/// weak residual of the m-vortex equation; <N'(A), psi_j> = 4 pi int r A psi_j dr.
double el_residual(const SpectralBasis& basis, const VariationalVector& a, int m, double lambda);

/// max |A'' + A'/r - m^2 A / r^2 - lambda A + f(A^2) A| over nodes in [lo, hi].
/// Diagnostic only: spectral truncation keeps this large near the core.
double strong_residual(const SpectralBasis& basis, const VariationalVector& a, int m,
                       double lambda, double lo, double hi);

} // namespace vortexsol
