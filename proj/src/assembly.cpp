#include "fracdiff/assembly.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace fracdiff {

namespace {

// Basis values at the quadrature points; zero outside each support.
DenseMatrix tabulate(const SpatialBasis& basis, const QuadraturePoints& pts, int deriv)
{
    DenseMatrix table(basis.size(), pts.x.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto [lo, hi] = basis.support(k);
        for (std::size_t q = 0; q < pts.x.size(); ++q) {
            const double x = pts.x[q];
            if (x > lo && x < hi) {
                table(k, q) = basis.value(k, x, deriv);
            }
        }
    }
    return table;
}

DenseMatrix gram(const DenseMatrix& table, const std::vector<double>& w)
{
    const std::size_t n = table.rows();
    DenseMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = k; i < n; ++i) {
            double s = 0.0;
            for (std::size_t q = 0; q < w.size(); ++q) {
                s += w[q] * table(k, q) * table(i, q);
            }
            m(k, i) = s;
            m(i, k) = s;
        }
    }
    return m;
}

}  // namespace

DenseMatrix assemble_mass(const SpatialBasis& basis, const QuadratureRule& quad)
{
    const auto pts = composite_points(quad, 0.0, 1.0);
    return gram(tabulate(basis, pts, 0), pts.w);
}

DenseMatrix assemble_stiffness(const SpatialBasis& basis, const QuadratureRule& quad)
{
    const auto pts = composite_points(quad, 0.0, 1.0);
    return gram(tabulate(basis, pts, 1), pts.w);
}

DenseMatrix assemble_load_matrix(const SpatialBasis& basis, const SpaceTimeFunction& f,
                                 std::span<const double> times, const QuadratureRule& quad)
{
    const auto pts = composite_points(quad, 0.0, 1.0);
    const DenseMatrix table = tabulate(basis, pts, 0);
    DenseMatrix load(basis.size(), times.size());
    std::vector<double> weighted(pts.x.size());
    for (std::size_t p = 0; p < times.size(); ++p) {
        for (std::size_t q = 0; q < pts.x.size(); ++q) {
            weighted[q] = pts.w[q] * f(times[p], pts.x[q]);
        }
        for (std::size_t k = 0; k < basis.size(); ++k) {
            double s = 0.0;
            for (std::size_t q = 0; q < pts.x.size(); ++q) {
                s += weighted[q] * table(k, q);
            }
            load(k, p) = s;
        }
    }
    return load;
}

std::vector<double> assemble_load(const SpatialBasis& basis, const SpaceTimeFunction& f, double t,
                                  const QuadratureRule& quad)
{
    const double times[] = {t};
    const DenseMatrix load = assemble_load_matrix(basis, f, times, quad);
    return {load.data().begin(), load.data().end()};
}

CollocationMatrices assemble_collocation(const TemporalBasis& tbasis, double gamma_order, int q, bool include_ic_row)
{
    if (!(gamma_order > 0.0 && gamma_order < tbasis.degree() + 0.5)) {
        throw std::invalid_argument("assemble_collocation: derivative order outside (0, beta + 1/2)");
    }
    if (q < 0 || q > 24) {
        throw std::invalid_argument("assemble_collocation: collocation level out of range");
    }
    const std::size_t last = (std::size_t{1} << q) * static_cast<std::size_t>(tbasis.horizon());
    const std::size_t first = include_ic_row ? 0 : 1;
    const double step = std::ldexp(1.0, -q);

    CollocationMatrices out;
    out.ic_row = include_ic_row;
    for (std::size_t p = first; p <= last; ++p) {
        out.nodes.push_back(static_cast<double>(p) * step);
    }
    out.a = DenseMatrix(out.nodes.size(), tbasis.size());
    out.g = DenseMatrix(out.nodes.size(), tbasis.size());
    for (std::size_t p = 0; p < out.nodes.size(); ++p) {
        for (std::size_t c = 0; c < tbasis.size(); ++c) {
            const int r = tbasis.translate(c);
            out.g(p, c) = tbasis.eval(r, out.nodes[p], 0.0);
            if (!(include_ic_row && p == 0)) {
                out.a(p, c) = tbasis.eval(r, out.nodes[p], gamma_order);
            }
        }
    }
    return out;
}

void write_triplets(std::ostream& out, const DenseMatrix& m)
{
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j) != 0.0) {
                out << i << ' ' << j << ' ' << m(i, j) << '\n';
            }
        }
    }
    out.flags(flags);
    out.precision(precision);
}

}  // namespace fracdiff
