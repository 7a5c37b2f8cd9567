#include "fracdiff/assembly.hpp"
#include "fracdiff/caputo.hpp"
#include "fracdiff/problem.hpp"
#include "fracdiff/quadrature.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace fracdiff;

namespace {

// Gram matrix by 16-point Gauss on every cell of a 2^(j+1) grid, straight from basis values.
DenseMatrix reference_gram(const SpatialBasis& basis, int deriv)
{
    const auto rule = gauss_legendre(16);
    const int cells = 1 << (basis.level() + 1);
    DenseMatrix out(basis.size(), basis.size());
    for (int c = 0; c < cells; ++c) {
        const double a = static_cast<double>(c) / cells;
        const double h = 1.0 / cells;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = a + 0.5 * h * (rule.nodes[q] + 1.0);
            const double w = 0.5 * h * rule.weights[q];
            for (std::size_t k = 0; k < basis.size(); ++k) {
                const double vk = basis.value(k, x, deriv);
                for (std::size_t i = 0; i < basis.size(); ++i) {
                    out(k, i) += w * vk * basis.value(i, x, deriv);
                }
            }
        }
    }
    return out;
}

std::vector<double> interpolate_x_one_minus_x(const SpatialBasis& basis)
{
    const std::size_t samples = 120;
    DenseMatrix a(samples, basis.size());
    std::vector<double> rhs(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = (i + 0.5) / samples;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            a(i, k) = basis.value(k, x);
        }
        rhs[i] = x * (1.0 - x);
    }
    return lstsq_solve(a, rhs).x;
}

double quadratic_form(const DenseMatrix& m, const std::vector<double>& c)
{
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t k = 0; k < m.cols(); ++k) {
            v += c[i] * m(i, k) * c[k];
        }
    }
    return v;
}

}  // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly)
{
    for (int n : {1, 2, 4, 8, 16}) {
        const auto rule = gauss_legendre(n);
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                sum += rule.weights[i] * std::pow(rule.nodes[i], deg);
            }
            const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
            EXPECT_NEAR(sum, exact, 1e-14) << n << ' ' << deg;
        }
    }
    EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
}

TEST(CompositePoints, CoverTheInterval)
{
    const auto pts = composite_points(QuadratureRule{4, 3}, 0.0, 1.0);
    EXPECT_EQ(pts.x.size(), 32u);
    double total = 0.0;
    for (double w : pts.w) {
        total += w;
    }
    EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(Mass, InteriorEntriesAndBand)
{
    for (int j : {3, 4, 5}) {
        const auto basis = build_spatial(j, 3);
        const auto m = assemble_mass(basis, QuadratureRule::for_levels(j, 0));
        const std::size_t mid = basis.size() / 2;
        EXPECT_NEAR(m(mid, mid), std::ldexp(151.0 / 315.0, -j), 1e-15);
        EXPECT_NEAR(m(mid, mid + 1), std::ldexp(397.0 / 1680.0, -j), 1e-15);
        for (std::size_t k = 0; k < m.rows(); ++k) {
            for (std::size_t i = 0; i < m.cols(); ++i) {
                EXPECT_NEAR(m(k, i), m(i, k), 1e-14);
                const std::size_t gap = k > i ? k - i : i - k;
                if (gap > 3) {
                    EXPECT_EQ(m(k, i), 0.0);
                }
            }
        }
    }
}

TEST(Mass, MatchesReferenceQuadrature)
{
    const auto basis = build_spatial(3, 3);
    const auto m = assemble_mass(basis, QuadratureRule::for_levels(3, 0));
    const auto ref = reference_gram(basis, 0);
    for (std::size_t k = 0; k < m.rows(); ++k) {
        for (std::size_t i = 0; i < m.cols(); ++i) {
            EXPECT_NEAR(m(k, i), ref(k, i), 1e-15);
        }
    }
}

TEST(Mass, PositiveDefinite)
{
    for (int j : {3, 4, 5}) {
        const auto basis = build_spatial(j, 3);
        EXPECT_TRUE(oracle::is_positive_definite(assemble_mass(basis, QuadratureRule::for_levels(j, 0)))) << j;
    }
}

TEST(Stiffness, InteriorEntriesAndReference)
{
    const int j = 4;
    const auto basis = build_spatial(j, 3);
    const auto l = assemble_stiffness(basis, QuadratureRule::for_levels(j, 0));
    const std::size_t mid = basis.size() / 2;
    EXPECT_NEAR(l(mid, mid), std::ldexp(2.0 / 3.0, j), 1e-12);
    EXPECT_NEAR(l(mid, mid + 1), std::ldexp(-1.0 / 8.0, j), 1e-12);
    const auto ref = reference_gram(basis, 1);
    for (std::size_t k = 0; k < l.rows(); ++k) {
        EXPECT_GT(l(k, k), 0.0);
        for (std::size_t i = 0; i < l.cols(); ++i) {
            EXPECT_NEAR(l(k, i), ref(k, i), 1e-11);
            EXPECT_NEAR(l(k, i), l(i, k), 1e-12);
        }
    }
    EXPECT_TRUE(oracle::is_positive_definite(l));
}

TEST(Stiffness, FullTranslateFamilyAnnihilatesConstants)
{
    // Interior rows of the stiffness matrix built on all 2^j + 3 translates sum to zero.
    const auto basis = build_spatial(4, 3);
    const auto pts = composite_points(QuadratureRule::for_levels(4, 0), 0.0, 1.0);
    for (int k = 0; k <= 12; ++k) {
        double row = 0.0;
        for (int i = -3; i <= 15; ++i) {
            for (std::size_t q = 0; q < pts.x.size(); ++q) {
                row += pts.w[q] * basis.translate_value(k, pts.x[q], 1) * basis.translate_value(i, pts.x[q], 1);
            }
        }
        EXPECT_NEAR(row, 0.0, 1e-11) << k;
    }
}

TEST(Gram, QuadraticFormsOfAReproducedPolynomial)
{
    const auto basis = build_spatial(3, 3);
    const auto quad = QuadratureRule::for_levels(3, 0);
    const auto c = interpolate_x_one_minus_x(basis);
    EXPECT_NEAR(quadratic_form(assemble_stiffness(basis, quad), c), 1.0 / 3.0, 1e-10);
    EXPECT_NEAR(quadratic_form(assemble_mass(basis, quad), c), 1.0 / 30.0, 1e-10);
}

TEST(Gram, InvariantUnderQuadratureRefinement)
{
    const auto basis = build_spatial(4, 3);
    const auto m4 = assemble_mass(basis, QuadratureRule::for_levels(4, 0, 4));
    const auto m8 = assemble_mass(basis, QuadratureRule::for_levels(4, 0, 8));
    const auto l4 = assemble_stiffness(basis, QuadratureRule::for_levels(4, 0, 4));
    const auto l8 = assemble_stiffness(basis, QuadratureRule::for_levels(4, 0, 8));
    for (std::size_t k = 0; k < m4.rows(); ++k) {
        for (std::size_t i = 0; i < m4.cols(); ++i) {
            EXPECT_NEAR(m4(k, i), m8(k, i), 1e-13);
            EXPECT_NEAR(l4(k, i), l8(k, i), 1e-13 * 16);
        }
    }
}

TEST(Gram, CentroSymmetric)
{
    const auto basis = build_spatial(4, 3);
    const auto quad = QuadratureRule::for_levels(4, 0);
    const auto m = assemble_mass(basis, quad);
    const auto l = assemble_stiffness(basis, quad);
    const std::size_t n = m.rows();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(m(k, i), m(n - 1 - k, n - 1 - i), 1e-15);
            EXPECT_NEAR(l(k, i), l(n - 1 - k, n - 1 - i), 1e-12);
        }
    }
}

TEST(Load, ZeroForcing)
{
    const auto basis = build_spatial(3, 3);
    const auto f = assemble_load(basis, [](double, double) { return 0.0; }, 0.5, QuadratureRule::for_levels(3, 5));
    for (double v : f) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Load, BasisFunctionForcingGivesMassColumn)
{
    const auto basis = build_spatial(3, 3);
    const auto quad = QuadratureRule::for_levels(3, 5);
    const auto m = assemble_mass(basis, quad);
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const auto f = assemble_load(basis, [&](double, double x) { return basis.value(col, x); }, 0.3, quad);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            EXPECT_NEAR(f[k], m(k, col), 1e-15);
        }
    }
}

TEST(Load, ExampleForcingMatchesTrapezoidOracle)
{
    const auto basis = build_spatial(3, 3);
    const auto problem = example1(0.5);
    const auto f = assemble_load(basis, problem.forcing, 1.0, QuadratureRule::for_levels(3, 5));
    const int n = 1000000;
    std::vector<double> ref(basis.size(), 0.0);
    for (int i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) / n;
        const double w = (i == 0 || i == n) ? 0.5 / n : 1.0 / n;
        const double fx = problem.forcing(1.0, x);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const auto [lo, hi] = basis.support(k);
            if (x >= lo && x <= hi) {
                ref[k] += w * fx * basis.value(k, x);
            }
        }
    }
    for (std::size_t k = 0; k < basis.size(); ++k) {
        EXPECT_NEAR(f[k], ref[k], 1e-9) << k;
    }
}

TEST(Load, MatrixColumnsAreLoadVectors)
{
    const auto basis = build_spatial(3, 3);
    const auto problem = example2(0.5);
    const auto quad = QuadratureRule::for_levels(3, 4);
    const std::vector<double> times{0.0, 0.25, 1.0};
    const auto f = assemble_load_matrix(basis, problem.forcing, times, quad);
    ASSERT_EQ(f.rows(), basis.size());
    ASSERT_EQ(f.cols(), times.size());
    for (std::size_t p = 0; p < times.size(); ++p) {
        const auto col = assemble_load(basis, problem.forcing, times[p], quad);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            EXPECT_EQ(f(k, p), col[k]);
        }
    }
}

TEST(Collocation, ShapesAndNodes)
{
    const auto tb = build_temporal(3, 3.5);
    const auto with_ic = assemble_collocation(tb, 0.5, 4, true);
    const auto without = assemble_collocation(tb, 0.5, 4, false);
    EXPECT_EQ(with_ic.a.rows(), 17u);
    EXPECT_EQ(without.a.rows(), 16u);
    EXPECT_EQ(with_ic.g.cols(), tb.size());
    EXPECT_EQ(with_ic.nodes.front(), 0.0);
    EXPECT_EQ(without.nodes.front(), 1.0 / 16.0);
    EXPECT_EQ(without.nodes.back(), 1.0);
    for (std::size_t c = 0; c < tb.size(); ++c) {
        EXPECT_EQ(with_ic.a(0, c), 0.0);
        EXPECT_EQ(with_ic.g(0, c), tb.eval(tb.translate(c), 0.0));
        for (std::size_t p = 0; p < without.nodes.size(); ++p) {
            EXPECT_EQ(without.a(p, c), with_ic.a(p + 1, c));
            EXPECT_EQ(without.g(p, c), with_ic.g(p + 1, c));
        }
    }
}

TEST(Collocation, Causality)
{
    const auto tb = build_temporal(4, 3.5);
    const auto cm = assemble_collocation(tb, 0.5, 5, true);
    for (std::size_t c = 0; c < tb.size(); ++c) {
        const int r = tb.translate(c);
        for (std::size_t p = 0; p < cm.nodes.size(); ++p) {
            if (cm.nodes[p] <= r / 16.0) {
                EXPECT_EQ(cm.g(p, c), 0.0);
                EXPECT_EQ(cm.a(p, c), 0.0);
            }
        }
    }
}

TEST(Collocation, LinearSplineSingleTerm)
{
    const auto tb = build_temporal(0, 1.0);
    const auto cm = assemble_collocation(tb, 0.5, 1, true);
    ASSERT_EQ(cm.nodes.size(), 3u);
    EXPECT_NEAR(cm.a(2, tb.column(0)), 1.0 / std::tgamma(1.5), 1e-14);
}

TEST(Collocation, CausalColumnsMatchCaputoQuadrature)
{
    const auto tb = build_temporal(2, 3.5);
    const auto cm = assemble_collocation(tb, 0.5, 3, false);
    for (std::size_t c = tb.column(0); c < tb.size(); ++c) {
        const int r = tb.translate(c);
        std::vector<double> knots;
        for (int m = r; m <= r + 10; ++m) {
            knots.push_back(m / 4.0);
        }
        for (std::size_t p = 0; p < cm.nodes.size(); ++p) {
            const double expected = caputo_oracle_numeric([&](double tau) { return tb.eval(r, tau); }, 0.5,
                                                          cm.nodes[p], 1e-4, knots);
            EXPECT_NEAR(cm.a(p, c), expected, 1e-6) << r << ' ' << cm.nodes[p];
        }
    }
}

TEST(Collocation, SmallOrderApproachesValues)
{
    const auto tb = build_temporal(3, 3.5);
    const auto cm = assemble_collocation(tb, 1e-6, 4, false);
    for (std::size_t p = 0; p < cm.nodes.size(); ++p) {
        for (std::size_t c = 0; c < tb.size(); ++c) {
            EXPECT_NEAR(cm.a(p, c), cm.g(p, c), 1e-3);
        }
    }
}

TEST(Collocation, RejectsBadOrder)
{
    const auto tb = build_temporal(3, 1.0);
    EXPECT_THROW(assemble_collocation(tb, 1.5, 4, true), std::invalid_argument);
    EXPECT_THROW(assemble_collocation(tb, 0.0, 4, true), std::invalid_argument);
}

TEST(Triplets, WritesNonzerosWithFullPrecision)
{
    DenseMatrix m(2, 3);
    m(0, 1) = 1.0 / 3.0;
    m(1, 2) = -2.5;
    std::ostringstream out;
    write_triplets(out, m);
    EXPECT_EQ(out.str(), "0 1 0.33333333333333331\n1 2 -2.5\n");
}
