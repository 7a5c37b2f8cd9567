#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracdiff {

/// Dense row-major matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    DenseMatrix transpose() const;
    double frobenius_norm() const;
    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x);

double norm2(std::span<const double> v);

/// Explicit Kronecker product kron(a, b).
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

/// (outer ⊗ inner) applied to X without forming the product.
///
/// X has shape outer.cols() x inner.cols() and is read as the vector of its
/// row-major entries, so the inner (temporal) index runs fastest. The result,
/// outer * X * inner^T, has shape outer.rows() x inner.rows() in the same layout.
/// Throws std::invalid_argument on shape mismatch.
DenseMatrix kron_apply(const DenseMatrix& outer, const DenseMatrix& inner, const DenseMatrix& x);

/// outer1 ⊗ inner1 + outer2 ⊗ inner2, the operator of the collocation system.
class KroneckerSum {
public:
    KroneckerSum(DenseMatrix outer1, DenseMatrix inner1, DenseMatrix outer2, DenseMatrix inner2);

    std::size_t rows() const noexcept { return outer1_.rows() * inner1_.rows(); }
    std::size_t cols() const noexcept { return outer1_.cols() * inner1_.cols(); }
    std::size_t block_rows() const noexcept { return inner1_.rows(); }
    std::size_t block_cols() const noexcept { return inner1_.cols(); }

    /// Operator applied to a vector laid out as (outer index, inner index), inner fastest.
    std::vector<double> apply(std::span<const double> x) const;

    DenseMatrix materialize() const;
    /// Column-major copy of materialize(), as consumed by LAPACK.
    std::vector<double> materialize_column_major() const;

private:
    DenseMatrix outer1_, inner1_, outer2_, inner2_;
};

struct LeastSquaresReport {
    double residual_norm = 0.0;
    /// |R_00| / min_i |R_ii| of the pivoted triangular factor.
    double condition_estimate = 1.0;
    bool rank_deficient = false;
    std::size_t rank = 0;
};

struct LeastSquaresResult {
    std::vector<double> x;
    LeastSquaresReport report;
};

/// Householder QR with column pivoting, A P = Q R.
class PivotedQr {
public:
    explicit PivotedQr(const DenseMatrix& a);
    /// Takes ownership of a column-major rows x cols buffer.
    PivotedQr(std::size_t rows, std::size_t cols, std::vector<double> column_major);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    /// Zero-based column permutation: column j of A P is column permutation()[j] of A.
    const std::vector<std::size_t>& permutation() const noexcept { return perm_; }
    /// Absolute diagonal of R, non-increasing.
    std::vector<double> r_diagonal() const;
    /// Upper-triangular factor, min(rows, cols) x cols.
    DenseMatrix r() const;
    /// Thin orthogonal factor, rows x min(rows, cols).
    DenseMatrix q() const;

    /// Number of diagonal entries with |R_ii| > rcond |R_00|.
    std::size_t rank(double rcond) const;
    double condition_estimate() const;

    /// Basic least-squares solution: columns beyond the numerical rank are set to 0.
    std::vector<double> solve(std::span<const double> rhs, double rcond) const;

private:
    void factorize();

    std::size_t rows_, cols_;
    std::vector<double> qr_;  // column-major, LAPACK layout
    std::vector<double> tau_;
    std::vector<std::size_t> perm_;
};

/// Default relative rank threshold eps * max(rows, cols).
double default_rcond(std::size_t rows, std::size_t cols);

/// Minimizes ||A x - b||_2. Requires rows >= cols. A negative rcond selects default_rcond.
LeastSquaresResult lstsq_solve(const DenseMatrix& a, std::span<const double> rhs, double rcond = -1.0);

/// Same for the Kronecker-sum operator; the matrix is materialized for the
/// factorization and the residual is evaluated in structured form.
LeastSquaresResult lstsq_solve(const KroneckerSum& op, std::span<const double> rhs, double rcond = -1.0);

}  // namespace fracdiff
