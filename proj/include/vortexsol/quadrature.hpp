#pragma once

#include <span>
#include <utility>
#include <vector>

namespace vortexsol {

/// Composite Gauss-Legendre rule on [0, R].
///
/// The interval is split into `panels` equal subintervals with `order`
/// Gauss points in each, so every node lies strictly inside (0, R) and
/// integrands carrying 1/r are never evaluated at the origin. Polynomials
/// of degree up to 2*order-1 are integrated exactly on every panel.
struct RadialGrid {
    double R = 0.0;
    int panels = 0;
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order);

RadialGrid build_grid(double R, int panels, int order);

/// Sum of weight_i * samples_i.
double integrate(const RadialGrid& grid, std::span<const double> samples);

} // namespace vortexsol
