#include "vortexsol/quadrature.hpp"

#include "vortexsol/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace vortexsol {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order)
{
    if (order < 1) {
        throw ParameterError("gauss_legendre: order must be >= 1");
    }
    const int n = order;
    std::vector<double> x(n), w(n);
    // Roots are symmetric; Newton on P_n from the Chebyshev-like guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);

        const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if (n % 2 == 1) {
        x[n / 2] = 0.0;
    }
    return {std::move(x), std::move(w)};
}

RadialGrid build_grid(double R, int panels, int order)
{
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw ParameterError("build_grid: R must be positive, got " + std::to_string(R));
    }
    if (panels < 1) {
        throw ParameterError("build_grid: panels must be >= 1");
    }
    if (order < 2) {
        throw ParameterError("build_grid: order must be >= 2");
    }

    const auto [x, w] = gauss_legendre(order);
    RadialGrid grid;
    grid.R = R;
    grid.panels = panels;
    grid.order = order;
    grid.nodes.reserve(static_cast<std::size_t>(panels) * order);
    grid.weights.reserve(static_cast<std::size_t>(panels) * order);

    const double h = R / panels;
    for (int p = 0; p < panels; ++p) {
        const double left = p * h;
        for (int k = 0; k < order; ++k) {
            grid.nodes.push_back(left + 0.5 * h * (x[k] + 1.0));
            grid.weights.push_back(0.5 * h * w[k]);
        }
    }
    return grid;
}

double integrate(const RadialGrid& grid, std::span<const double> samples)
{
    if (samples.size() != grid.weights.size()) {
        throw ParameterError("integrate: expected " + std::to_string(grid.weights.size()) +
                             " samples, got " + std::to_string(samples.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        sum += grid.weights[i] * samples[i];
    }
    return sum;
}

} // namespace vortexsol
