#include "vortexsol/basis.hpp"
#include "vortexsol/errors.hpp"
#include "vortexsol/functionals.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

using namespace vortexsol;

namespace {

std::shared_ptr<const RadialGrid> default_grid()
{
    static const auto g = std::make_shared<const RadialGrid>(build_grid(40.0, 64, 8));
    return g;
}

double inner(const RadialGrid& g, const Eigen::MatrixXd& psi, int j, int k)
{
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        s += g.weights[i] * g.nodes[i] * psi(j, i) * psi(k, i);
    }
    return 2.0 * std::numbers::pi * s;
}

} // namespace

TEST_CASE("single function is self-normalized")
{
    SpectralBasis b(default_grid(), 1);
    CHECK(std::abs(inner(b.grid(), b.psi(), 0, 0) - 1.0) < 1e-10);
}

TEST_CASE("orthonormality at N = 20, R = 40")
{
    SpectralBasis b(default_grid(), 20);
    double worst = 0.0;
    for (int j = 0; j < 20; ++j) {
        for (int k = 0; k < 20; ++k) {
            worst = std::max(worst, std::abs(inner(b.grid(), b.psi(), j, k) - (j == k ? 1.0 : 0.0)));
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("psi_j / r stays bounded at the innermost node")
{
    SpectralBasis b(default_grid(), 20);
    const double r0 = b.grid().nodes.front();
    // |psi_j| <= |raw coefficients| * sum_k k pi r / R near the origin
    const double bound = b.mixing().cwiseAbs().rowwise().sum().maxCoeff() * 20.0 * std::numbers::pi / 40.0;
    for (int j = 0; j < 20; ++j) {
        CHECK(std::abs(b.psi()(j, 0)) / r0 <= bound * (1.0 + 1e-12));
        CHECK(std::isfinite(b.psi()(j, 0) * b.psi()(j, 0) / r0));
    }
}

TEST_CASE("mixing is lower triangular; growing N keeps leading functions")
{
    SpectralBasis small(default_grid(), 8);
    SpectralBasis big(default_grid(), 20);
    for (int j = 0; j < 8; ++j) {
        for (int k = j + 1; k < 20; ++k) {
            CHECK(big.mixing()(j, k) == 0.0);
        }
        CHECK((small.psi().row(j) - big.psi().row(j)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("synth: zero, single mode, Parseval")
{
    SpectralBasis b(default_grid(), 20);
    const auto zero = synth(b, VariationalVector::Zero(20));
    for (double v : zero.A) CHECK(v == 0.0);

    VariationalVector e1 = VariationalVector::Zero(20);
    e1[0] = std::sqrt(500.0);
    CHECK(std::abs(photon_number(b.grid(), synth(b, e1).A) - 500.0) < 1e-9 * 500.0);

    std::mt19937_64 rng(11);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        VariationalVector a(20);
        for (int j = 0; j < 20; ++j) a[j] = N(rng) * std::pow(0.8, j);
        const double n = photon_number(b.grid(), synth(b, a).A);
        CHECK(std::abs(n - a.squaredNorm()) < 1e-9 * a.squaredNorm());
    }
}

TEST_CASE("synth is linear and matches pointwise evaluation")
{
    SpectralBasis b(default_grid(), 20);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N(0.0, 1.0);
    VariationalVector u(20), v(20);
    for (int j = 0; j < 20; ++j) { u[j] = N(rng); v[j] = N(rng); }
    const auto pu = synth(b, u), pv = synth(b, v), pw = synth(b, 2.0 * u - 3.0 * v);
    const Eigen::VectorXd raw = b.raw_coefficients(u);
    for (std::size_t i = 0; i < pu.A.size(); i += 37) {
        CHECK(pw.A[i] == doctest::Approx(2.0 * pu.A[i] - 3.0 * pv.A[i]).epsilon(1e-12));
        const double r = b.grid().nodes[i];
        CHECK(b.value_at(raw, r) == doctest::Approx(pu.A[i]).epsilon(1e-10));
        CHECK(b.derivative_at(raw, r) == doctest::Approx(pu.A_r[i]).epsilon(1e-10));
        CHECK(b.second_derivative_at(raw, r) == doctest::Approx(pu.A_rr[i]).epsilon(1e-10));
    }
}

TEST_CASE("boundary: profiles vanish at both ends and like O(r) at the origin")
{
    SpectralBasis b(default_grid(), 20);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(0.0, 1.0);
    VariationalVector a(20);
    for (int j = 0; j < 20; ++j) a[j] = N(rng);
    a.normalize();
    const Eigen::VectorXd raw = b.raw_coefficients(a);
    CHECK(std::abs(b.value_at(raw, 0.0)) < 1e-14);
    CHECK(std::abs(b.value_at(raw, 40.0)) < 1e-12);
    const double slope = std::abs(b.derivative_at(raw, 0.0));
    const double r0 = b.grid().nodes.front();
    CHECK(std::abs(synth(b, a).A.front()) <= 1.01 * slope * r0 + 1e-12);
}

TEST_CASE("projection recovers basis coefficients")
{
    SpectralBasis b(default_grid(), 20);
    VariationalVector a = VariationalVector::LinSpaced(20, 1.0, -1.0);
    const auto p = synth(b, a);
    CHECK((b.project(p.A) - a).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("errors: size mismatch and conditioning")
{
    SpectralBasis b(default_grid(), 4);
    CHECK_THROWS_AS(synth(b, VariationalVector::Zero(5)), ParameterError);
    CHECK_THROWS_AS(SpectralBasis(default_grid(), 0), ParameterError);
    // 40 sines cannot be resolved by a 2-point, 4-panel rule
    auto coarse = std::make_shared<const RadialGrid>(build_grid(40.0, 4, 2));
    CHECK_THROWS_AS(SpectralBasis(coarse, 40), ConditioningError);
}
