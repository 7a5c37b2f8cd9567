#pragma once

#include <vector>

namespace fracdiff {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

/// Composite Gauss-Legendre on dyadic cells of [a, b].
///
/// The interval is split into 2^cell_level equal cells with points_per_cell
/// nodes each, so the rule is exact for piecewise polynomials of degree
/// <= 2 points_per_cell - 1 whose breakpoints lie on the cell grid.
struct QuadratureRule {
    int points_per_cell = 8;
    int cell_level = 0;

    /// Rule with cells at level max(j, s) + 2.
    static QuadratureRule for_levels(int j, int s, int points_per_cell = 8);
};

struct QuadraturePoints {
    std::vector<double> x;
    std::vector<double> w;
};

QuadraturePoints composite_points(const QuadratureRule& rule, double a, double b);

}  // namespace fracdiff
