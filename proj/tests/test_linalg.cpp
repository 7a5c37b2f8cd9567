#include "fracdiff/linalg.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

using namespace fracdiff;

namespace {

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b)
{
    EXPECT_EQ(a.rows(), b.rows());
    EXPECT_EQ(a.cols(), b.cols());
    double d = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    }
    return d;
}

// Row-major X (outer.cols x inner.cols) flattened with the inner index fastest.
std::vector<double> flatten(const DenseMatrix& x) { return {x.data().begin(), x.data().end()}; }

}  // namespace

TEST(DenseMatrix, BasicOperations)
{
    DenseMatrix a(2, 3);
    a(0, 0) = 1;
    a(0, 2) = 2;
    a(1, 1) = 3;
    const auto at = a.transpose();
    EXPECT_EQ(at.rows(), 3u);
    EXPECT_EQ(at(2, 0), 2.0);
    const auto p = a * at;
    EXPECT_EQ(p(0, 0), 5.0);
    EXPECT_EQ(p(1, 1), 9.0);
    EXPECT_EQ(p(0, 1), 0.0);
    EXPECT_NEAR(a.frobenius_norm(), std::sqrt(14.0), 1e-15);
    EXPECT_EQ(max_abs_diff(DenseMatrix::identity(3) * at, at), 0.0);
    EXPECT_EQ(max_abs_diff((a + a) - a, a), 0.0);
    const std::vector<double> x{1.0, 1.0, 1.0};
    const auto y = a * std::span<const double>(x);
    EXPECT_EQ(y, (std::vector<double>{3.0, 3.0}));
    EXPECT_TRUE(a.all_finite());
    a(1, 2) = std::numeric_limits<double>::infinity();
    EXPECT_FALSE(a.all_finite());
    EXPECT_THROW(a * a, std::invalid_argument);
    EXPECT_THROW(a + at, std::invalid_argument);
}

TEST(Norm2, AvoidsOverflow)
{
    const std::vector<double> v{3e200, 4e200};
    EXPECT_NEAR(norm2(v) / 5e200, 1.0, 1e-15);
    EXPECT_EQ(norm2(std::vector<double>{}), 0.0);
}

TEST(Kron, MatchesExplicitProduct)
{
    std::mt19937 rng(1);
    const auto a = oracle::random_matrix(3, 2, rng);
    const auto b = oracle::random_matrix(2, 4, rng);
    EXPECT_EQ(max_abs_diff(kron(a, b), oracle::explicit_kron(a, b)), 0.0);
}

TEST(KronApply, IdentityLeavesInputUnchanged)
{
    std::mt19937 rng(2);
    const auto x = oracle::random_matrix(4, 5, rng);
    EXPECT_EQ(max_abs_diff(kron_apply(DenseMatrix::identity(4), DenseMatrix::identity(5), x), x), 0.0);
}

TEST(KronApply, ExhaustiveSmallShapesAgainstMaterializedProduct)
{
    std::mt19937 rng(3);
    for (std::size_t m = 1; m <= 8; ++m) {
        for (std::size_t n = 1; n <= 8; ++n) {
            for (std::size_t p = 1; p <= 8; ++p) {
                for (std::size_t q = 1; q <= 8; ++q) {
                    const auto outer = oracle::random_matrix(m, n, rng);
                    const auto inner = oracle::random_matrix(p, q, rng);
                    const auto x = oracle::random_matrix(n, q, rng);
                    const auto got = kron_apply(outer, inner, x);
                    const auto big = oracle::explicit_kron(outer, inner);
                    const auto expected = big * std::span<const double>(flatten(x));
                    ASSERT_EQ(got.rows(), m);
                    ASSERT_EQ(got.cols(), p);
                    for (std::size_t i = 0; i < expected.size(); ++i) {
                        ASSERT_NEAR(got.data()[i], expected[i], 1e-13) << m << n << p << q;
                    }
                }
            }
        }
    }
}

TEST(KronApply, ShapeMismatch)
{
    EXPECT_THROW(kron_apply(DenseMatrix(2, 3), DenseMatrix(2, 2), DenseMatrix(2, 2)), std::invalid_argument);
}

TEST(KroneckerSum, ApplyAndMaterialize)
{
    std::mt19937 rng(4);
    const auto m = oracle::random_matrix(4, 4, rng);
    const auto a = oracle::random_matrix(6, 5, rng);
    const auto l = oracle::random_matrix(4, 4, rng);
    const auto g = oracle::random_matrix(6, 5, rng);
    const KroneckerSum op(m, a, l, g);
    EXPECT_EQ(op.rows(), 24u);
    EXPECT_EQ(op.cols(), 20u);
    const auto expected = oracle::explicit_kron(m, a) + oracle::explicit_kron(l, g);
    EXPECT_LT(max_abs_diff(op.materialize(), expected), 1e-15);
    const auto cm = op.materialize_column_major();
    for (std::size_t c = 0; c < op.cols(); ++c) {
        std::vector<double> e(op.cols(), 0.0);
        e[c] = 1.0;
        const auto col = op.apply(e);
        for (std::size_t r = 0; r < op.rows(); ++r) {
            EXPECT_NEAR(col[r], expected(r, c), 1e-15);
            EXPECT_EQ(cm[c * op.rows() + r], op.materialize()(r, c));
        }
    }
    EXPECT_THROW(KroneckerSum(m, a, l, DenseMatrix(5, 5)), std::invalid_argument);
}

TEST(PivotedQr, Reconstruction)
{
    std::mt19937 rng(5);
    for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{5, 5}, {30, 12}, {120, 60}, {200, 100}}) {
        const auto a = oracle::random_matrix(rows, cols, rng);
        const PivotedQr qr(a);
        const auto q = qr.q();
        const auto r = qr.r();
        DenseMatrix ap(rows, cols);
        for (std::size_t c = 0; c < cols; ++c) {
            for (std::size_t i = 0; i < rows; ++i) {
                ap(i, c) = a(i, qr.permutation()[c]);
            }
        }
        EXPECT_LT((q * r - ap).frobenius_norm() / a.frobenius_norm(), 1e-13) << rows << 'x' << cols;
        const auto qtq = q.transpose() * q;
        EXPECT_LT((qtq - DenseMatrix::identity(cols)).frobenius_norm(), 1e-13);
        const auto d = qr.r_diagonal();
        for (std::size_t i = 1; i < d.size(); ++i) {
            EXPECT_LE(std::abs(d[i]), std::abs(d[i - 1]) * (1 + 1e-12));
        }
        EXPECT_EQ(qr.rank(default_rcond(rows, cols)), cols);
        EXPECT_GE(qr.condition_estimate(), 1.0);
    }
}

TEST(LeastSquares, SquareNonsingular)
{
    std::mt19937 rng(6);
    auto a = oracle::random_matrix(12, 12, rng);
    for (std::size_t i = 0; i < 12; ++i) {
        a(i, i) += 4.0;
    }
    const std::vector<double> b(12, 1.0);
    const auto res = lstsq_solve(a, b);
    EXPECT_LT(res.report.residual_norm, 1e-10 * norm2(b));
    EXPECT_FALSE(res.report.rank_deficient);
    EXPECT_EQ(res.report.rank, 12u);
}

TEST(LeastSquares, ConsistentOverdeterminedRecoversGenerator)
{
    std::mt19937 rng(7);
    const auto a = oracle::random_matrix(40, 15, rng);
    std::vector<double> x_star(15);
    for (std::size_t i = 0; i < 15; ++i) {
        x_star[i] = std::sin(1.0 + i);
    }
    const auto b = a * std::span<const double>(x_star);
    const auto res = lstsq_solve(a, b);
    for (std::size_t i = 0; i < 15; ++i) {
        EXPECT_NEAR(res.x[i], x_star[i], 1e-10);
    }
    EXPECT_LT(res.report.residual_norm, 1e-12);
}

TEST(LeastSquares, MatchesExtendedPrecisionNormalEquations)
{
    std::mt19937 rng(8);
    const auto a = oracle::random_matrix(50, 20, rng);
    std::vector<double> b(50);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : b) {
        v = dist(rng);
    }
    const auto res = lstsq_solve(a, b);
    const auto ref = oracle::normal_equations_hp(a, b);
    for (std::size_t i = 0; i < 20; ++i) {
        EXPECT_NEAR(res.x[i], ref[i], 1e-8);
    }
}

TEST(LeastSquares, ResidualOrthogonality)
{
    std::mt19937 rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = oracle::random_matrix(80, 30, rng);
        const auto b = oracle::random_matrix(80, 1, rng);
        const std::vector<double> rhs(b.data().begin(), b.data().end());
        const auto res = lstsq_solve(a, rhs);
        auto r = a * std::span<const double>(res.x);
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] -= rhs[i];
        }
        const auto atr = a.transpose() * std::span<const double>(r);
        EXPECT_LT(norm2(atr), 1e-8 * a.frobenius_norm() * norm2(rhs));
        EXPECT_NEAR(res.report.residual_norm, norm2(r), 1e-12);
    }
}

TEST(LeastSquares, RankDeficiencyIsFlaggedNotFatal)
{
    std::mt19937 rng(10);
    auto a = oracle::random_matrix(20, 6, rng);
    for (std::size_t i = 0; i < 20; ++i) {
        a(i, 5) = a(i, 1) + a(i, 2);
    }
    std::vector<double> b(20, 1.0);
    const auto res = lstsq_solve(a, b);
    EXPECT_TRUE(res.report.rank_deficient);
    EXPECT_EQ(res.report.rank, 5u);
    for (double v : res.x) {
        EXPECT_TRUE(std::isfinite(v));
    }
    // The basic solution still attains the minimal residual.
    const auto full = lstsq_solve(a, b, 0.0);
    EXPECT_LE(res.report.residual_norm, full.report.residual_norm + 1e-10);
}

TEST(LeastSquares, KroneckerOperatorMatchesDenseSolve)
{
    std::mt19937 rng(11);
    const auto m = oracle::random_matrix(3, 3, rng);
    const auto a = oracle::random_matrix(7, 4, rng);
    const auto l = oracle::random_matrix(3, 3, rng);
    const auto g = oracle::random_matrix(7, 4, rng);
    const KroneckerSum op(m, a, l, g);
    std::vector<double> rhs(op.rows());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        rhs[i] = std::cos(0.3 * i);
    }
    const auto structured = lstsq_solve(op, rhs);
    const auto dense = lstsq_solve(op.materialize(), rhs);
    for (std::size_t i = 0; i < op.cols(); ++i) {
        EXPECT_NEAR(structured.x[i], dense.x[i], 1e-12);
    }
    EXPECT_NEAR(structured.report.residual_norm, dense.report.residual_norm, 1e-12);
}

TEST(LeastSquares, Underdetermined)
{
    EXPECT_THROW(lstsq_solve(DenseMatrix(3, 5), std::vector<double>(3)), std::invalid_argument);
    EXPECT_THROW(lstsq_solve(DenseMatrix(5, 3), std::vector<double>(4)), std::invalid_argument);
}
