#include "fracdiff/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracdiff {

GaussRule gauss_legendre(int n)
{
    if (n < 1) {
        throw std::invalid_argument("gauss_legendre: need at least one point");
    }
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
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
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -z;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    return rule;
}

QuadratureRule QuadratureRule::for_levels(int j, int s, int points_per_cell)
{
    return QuadratureRule{points_per_cell, std::max(j, s) + 2};
}

QuadraturePoints composite_points(const QuadratureRule& rule, double a, double b)
{
    if (rule.cell_level < 0 || rule.cell_level > 24) {
        throw std::invalid_argument("composite_points: cell level out of range");
    }
    const GaussRule g = gauss_legendre(rule.points_per_cell);
    const std::size_t cells = std::size_t{1} << rule.cell_level;
    const double h = (b - a) / static_cast<double>(cells);
    QuadraturePoints pts;
    pts.x.reserve(cells * g.nodes.size());
    pts.w.reserve(cells * g.nodes.size());
    for (std::size_t c = 0; c < cells; ++c) {
        const double left = a + h * static_cast<double>(c);
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            pts.x.push_back(left + 0.5 * h * (g.nodes[i] + 1.0));
            pts.w.push_back(0.5 * h * g.weights[i]);
        }
    }
    return pts;
}

}  // namespace fracdiff
