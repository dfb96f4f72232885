#include "vortexsol/basis.hpp"

#include "vortexsol/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace vortexsol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Smallest acceptable pivot ratio of the Cholesky factor; below this the
// Gram matrix is treated as numerically singular.
constexpr double kMinPivotRatio = 1e-7;

} // namespace

SpectralBasis::SpectralBasis(std::shared_ptr<const RadialGrid> grid, int size)
    : grid_(std::move(grid))
    , size_(size)
{
    if (!grid_ || grid_->size() == 0) {
        throw ParameterError("SpectralBasis: grid is empty");
    }
    if (size_ < 1) {
        throw ParameterError("SpectralBasis: size must be >= 1");
    }

    const auto n = static_cast<Eigen::Index>(grid_->size());
    const double R = grid_->R;
    Eigen::MatrixXd phi(size_, n), dphi(size_, n), d2phi(size_, n);
    for (int j = 0; j < size_; ++j) {
        const double k = (j + 1) * std::numbers::pi / R;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = grid_->nodes[i];
            const double s = std::sin(k * r);
            phi(j, i) = s;
            dphi(j, i) = k * std::cos(k * r);
            d2phi(j, i) = -k * k * s;
        }
    }

    Eigen::VectorXd rw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rw[i] = kTwoPi * grid_->nodes[i] * grid_->weights[i];
    }
    const Eigen::MatrixXd gram = phi * rw.asDiagonal() * phi.transpose();

    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw ConditioningError("SpectralBasis: Gram matrix is not positive definite at N=" +
                                std::to_string(size_));
    }
    const Eigen::MatrixXd L = llt.matrixL();
    const Eigen::VectorXd diag = L.diagonal();
    if (diag.minCoeff() < kMinPivotRatio * diag.maxCoeff()) {
        throw ConditioningError("SpectralBasis: Gram matrix is numerically singular at N=" +
                                std::to_string(size_) + " (refine the quadrature grid)");
    }

    mixing_ = L.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(size_, size_));
    psi_ = mixing_ * phi;
    dpsi_ = mixing_ * dphi;
    d2psi_ = mixing_ * d2phi;
}

Eigen::VectorXd SpectralBasis::raw_coefficients(const VariationalVector& a) const
{
    if (a.size() != size_) {
        throw ParameterError("raw_coefficients: coefficient length mismatch");
    }
    return mixing_.transpose() * a;
}

double SpectralBasis::value_at(const Eigen::VectorXd& raw, double r) const
{
    double sum = 0.0;
    for (Eigen::Index j = 0; j < raw.size(); ++j) {
        sum += raw[j] * std::sin((j + 1) * std::numbers::pi * r / grid_->R);
    }
    return sum;
}

double SpectralBasis::derivative_at(const Eigen::VectorXd& raw, double r) const
{
    double sum = 0.0;
    for (Eigen::Index j = 0; j < raw.size(); ++j) {
        const double k = (j + 1) * std::numbers::pi / grid_->R;
        sum += raw[j] * k * std::cos(k * r);
    }
    return sum;
}

double SpectralBasis::second_derivative_at(const Eigen::VectorXd& raw, double r) const
{
    double sum = 0.0;
    for (Eigen::Index j = 0; j < raw.size(); ++j) {
        const double k = (j + 1) * std::numbers::pi / grid_->R;
        sum -= raw[j] * k * k * std::sin(k * r);
    }
    return sum;
}

VariationalVector SpectralBasis::project(std::span<const double> samples) const
{
    if (samples.size() != grid_->size()) {
        throw ParameterError("project: sample length mismatch");
    }
    Eigen::VectorXd weighted(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        weighted[static_cast<Eigen::Index>(i)] =
            kTwoPi * grid_->nodes[i] * grid_->weights[i] * samples[i];
    }
    return psi_ * weighted;
}

ProfileSamples synth(const SpectralBasis& basis, const VariationalVector& a)
{
    if (a.size() != basis.size()) {
        throw ParameterError("synth: expected " + std::to_string(basis.size()) +
                             " coefficients, got " + std::to_string(a.size()));
    }
    const auto n = static_cast<Eigen::Index>(basis.grid().size());
    ProfileSamples out;
    out.A.resize(n);
    out.A_r.resize(n);
    out.A_rr.resize(n);
    Eigen::Map<Eigen::RowVectorXd>(out.A.data(), n) = a.transpose() * basis.psi();
    Eigen::Map<Eigen::RowVectorXd>(out.A_r.data(), n) = a.transpose() * basis.dpsi();
    Eigen::Map<Eigen::RowVectorXd>(out.A_rr.data(), n) = a.transpose() * basis.d2psi();
    return out;
}

} // namespace vortexsol
