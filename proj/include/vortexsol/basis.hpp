#pragma once

#include "vortexsol/quadrature.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

namespace vortexsol {

/// Coefficient vector a of A = sum_j a_j psi_j. With the orthonormal basis
/// the photon number of A is simply a.squaredNorm().
using VariationalVector = Eigen::VectorXd;

/// A profile and its first two derivatives tabulated on grid nodes.
struct ProfileSamples {
    std::vector<double> A;
    std::vector<double> A_r;
    std::vector<double> A_rr;
};

/// Sines sin(j pi r / R), j = 1..N, orthonormalized under
/// <u, v> = 2 pi int_0^R r u v dr.
///
/// The mixing map is the inverse of the lower Cholesky factor of the Gram
/// matrix, so psi_j only involves phi_1..phi_j and enlarging N leaves the
/// leading functions unchanged. All tables are immutable after construction.
class SpectralBasis {
public:
    SpectralBasis(std::shared_ptr<const RadialGrid> grid, int size);

    int size() const { return size_; }
    double radius() const { return grid_->R; }
    const RadialGrid& grid() const { return *grid_; }
    std::shared_ptr<const RadialGrid> grid_ptr() const { return grid_; }

    // N x nodes tables
    const Eigen::MatrixXd& psi() const { return psi_; }
    const Eigen::MatrixXd& dpsi() const { return dpsi_; }
    const Eigen::MatrixXd& d2psi() const { return d2psi_; }
    const Eigen::MatrixXd& mixing() const { return mixing_; }

    /// Coefficients of A in the raw sine family (mixing^T a).
    Eigen::VectorXd raw_coefficients(const VariationalVector& a) const;

    /// A(r), A'(r) and A''(r) at an arbitrary radius in [0, R].
    double value_at(const Eigen::VectorXd& raw, double r) const;
    double derivative_at(const Eigen::VectorXd& raw, double r) const;
    double second_derivative_at(const Eigen::VectorXd& raw, double r) const;

    /// Orthogonal projection of nodal samples onto span{psi_j}.
    VariationalVector project(std::span<const double> samples) const;

private:
    std::shared_ptr<const RadialGrid> grid_;
    int size_;
    Eigen::MatrixXd mixing_;
    Eigen::MatrixXd psi_;
    Eigen::MatrixXd dpsi_;
    Eigen::MatrixXd d2psi_;
};

ProfileSamples synth(const SpectralBasis& basis, const VariationalVector& a);

} // namespace vortexsol
