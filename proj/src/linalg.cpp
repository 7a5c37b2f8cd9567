#include "fracdiff/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fracdiff {

namespace {

void require(bool condition, const char* what)
{
    if (!condition) {
        throw std::invalid_argument(what);
    }
}

lapack_int as_lapack(std::size_t n)
{
    if (n > static_cast<std::size_t>(std::numeric_limits<lapack_int>::max())) {
        throw std::length_error("matrix dimension exceeds LAPACK index range");
    }
    return static_cast<lapack_int>(n);
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

DenseMatrix DenseMatrix::transpose() const
{
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

double DenseMatrix::frobenius_norm() const
{
    return norm2(data_);
}

bool DenseMatrix::all_finite() const
{
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b)
{
    require(a.cols() == b.rows(), "matrix product: shape mismatch");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                ci[j] += aik * bk[j];
            }
        }
    }
    return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b)
{
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum: shape mismatch");
    DenseMatrix c = a;
    auto cd = c.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < cd.size(); ++i) {
        cd[i] += bd[i];
    }
    return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b)
{
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix difference: shape mismatch");
    DenseMatrix c = a;
    auto cd = c.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < cd.size(); ++i) {
        cd[i] -= bd[i];
    }
    return c;
}

std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x)
{
    require(a.cols() == x.size(), "matrix-vector product: shape mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ai = a.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < ai.size(); ++j) {
            s += ai[j] * x[j];
        }
        y[i] = s;
    }
    return y;
}

double norm2(std::span<const double> v)
{
    // Scaled accumulation, as in LAPACK dnrm2.
    double scale = 0.0;
    double ssq = 1.0;
    for (double x : v) {
        if (x != 0.0) {
            const double ax = std::abs(x);
            if (scale < ax) {
                ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
                scale = ax;
            } else {
                ssq += (ax / scale) * (ax / scale);
            }
        }
    }
    return scale * std::sqrt(ssq);
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b)
{
    DenseMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            for (std::size_t p = 0; p < b.rows(); ++p) {
                for (std::size_t r = 0; r < b.cols(); ++r) {
                    k(i * b.rows() + p, j * b.cols() + r) = aij * b(p, r);
                }
            }
        }
    }
    return k;
}

DenseMatrix kron_apply(const DenseMatrix& outer, const DenseMatrix& inner, const DenseMatrix& x)
{
    require(x.rows() == outer.cols() && x.cols() == inner.cols(), "kron_apply: shape mismatch");
    return outer * (x * inner.transpose());
}

KroneckerSum::KroneckerSum(DenseMatrix outer1, DenseMatrix inner1, DenseMatrix outer2, DenseMatrix inner2)
    : outer1_(std::move(outer1)), inner1_(std::move(inner1)), outer2_(std::move(outer2)), inner2_(std::move(inner2))
{
    require(outer1_.rows() == outer2_.rows() && outer1_.cols() == outer2_.cols(),
            "KroneckerSum: outer factors differ in shape");
    require(inner1_.rows() == inner2_.rows() && inner1_.cols() == inner2_.cols(),
            "KroneckerSum: inner factors differ in shape");
}

std::vector<double> KroneckerSum::apply(std::span<const double> x) const
{
    require(x.size() == cols(), "KroneckerSum::apply: vector length mismatch");
    DenseMatrix xm(outer1_.cols(), inner1_.cols());
    std::copy(x.begin(), x.end(), xm.data().begin());
    const DenseMatrix y = kron_apply(outer1_, inner1_, xm) + kron_apply(outer2_, inner2_, xm);
    return {y.data().begin(), y.data().end()};
}

DenseMatrix KroneckerSum::materialize() const
{
    return kron(outer1_, inner1_) + kron(outer2_, inner2_);
}

std::vector<double> KroneckerSum::materialize_column_major() const
{
    const std::size_t m = rows();
    const std::size_t bp = inner1_.rows();
    const std::size_t br = inner1_.cols();
    std::vector<double> out(m * cols(), 0.0);
    for (std::size_t i = 0; i < outer1_.cols(); ++i) {
        for (std::size_t r = 0; r < br; ++r) {
            double* column = out.data() + (i * br + r) * m;
            for (std::size_t k = 0; k < outer1_.rows(); ++k) {
                const double o1 = outer1_(k, i);
                const double o2 = outer2_(k, i);
                if (o1 == 0.0 && o2 == 0.0) {
                    continue;
                }
                for (std::size_t p = 0; p < bp; ++p) {
                    column[k * bp + p] = o1 * inner1_(p, r) + o2 * inner2_(p, r);
                }
            }
        }
    }
    return out;
}

PivotedQr::PivotedQr(const DenseMatrix& a) : rows_(a.rows()), cols_(a.cols()), qr_(a.rows() * a.cols())
{
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            qr_[j * rows_ + i] = a(i, j);
        }
    }
    factorize();
}

PivotedQr::PivotedQr(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), qr_(std::move(column_major))
{
    require(qr_.size() == rows * cols, "PivotedQr: buffer size mismatch");
    factorize();
}

void PivotedQr::factorize()
{
    require(rows_ > 0 && cols_ > 0, "PivotedQr: empty matrix");
    if (!std::all_of(qr_.begin(), qr_.end(), [](double v) { return std::isfinite(v); })) {
        throw std::invalid_argument("PivotedQr: matrix has non-finite entries");
    }
    std::vector<lapack_int> jpvt(cols_, 0);
    tau_.assign(std::min(rows_, cols_), 0.0);
    const lapack_int info = LAPACKE_dgeqp3(LAPACK_COL_MAJOR, as_lapack(rows_), as_lapack(cols_), qr_.data(),
                                           as_lapack(rows_), jpvt.data(), tau_.data());
    if (info != 0) {
        throw std::runtime_error("dgeqp3 failed with info " + std::to_string(info));
    }
    perm_.resize(cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
        perm_[j] = static_cast<std::size_t>(jpvt[j] - 1);
    }
}

std::vector<double> PivotedQr::r_diagonal() const
{
    std::vector<double> d(std::min(rows_, cols_));
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = std::abs(qr_[i * rows_ + i]);
    }
    return d;
}

DenseMatrix PivotedQr::r() const
{
    const std::size_t k = std::min(rows_, cols_);
    DenseMatrix r(k, cols_);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < cols_; ++j) {
            r(i, j) = qr_[j * rows_ + i];
        }
    }
    return r;
}

DenseMatrix PivotedQr::q() const
{
    const std::size_t k = std::min(rows_, cols_);
    std::vector<double> q(qr_.begin(), qr_.begin() + static_cast<std::ptrdiff_t>(rows_ * k));
    const lapack_int info = LAPACKE_dorgqr(LAPACK_COL_MAJOR, as_lapack(rows_), as_lapack(k), as_lapack(k), q.data(),
                                           as_lapack(rows_), tau_.data());
    if (info != 0) {
        throw std::runtime_error("dorgqr failed with info " + std::to_string(info));
    }
    DenseMatrix out(rows_, k);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            out(i, j) = q[j * rows_ + i];
        }
    }
    return out;
}

std::size_t PivotedQr::rank(double rcond) const
{
    const auto d = r_diagonal();
    if (d.empty() || d[0] == 0.0) {
        return 0;
    }
    std::size_t r = 0;
    while (r < d.size() && d[r] > rcond * d[0]) {
        ++r;
    }
    return r;
}

double PivotedQr::condition_estimate() const
{
    const auto d = r_diagonal();
    const double smallest = *std::min_element(d.begin(), d.end());
    if (smallest == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return d.front() / smallest;
}

std::vector<double> PivotedQr::solve(std::span<const double> rhs, double rcond) const
{
    require(rhs.size() == rows_, "PivotedQr::solve: right-hand side length mismatch");
    std::vector<double> qtb(rhs.begin(), rhs.end());
    const std::size_t k = std::min(rows_, cols_);
    const lapack_int info = LAPACKE_dormqr(LAPACK_COL_MAJOR, 'L', 'T', as_lapack(rows_), 1, as_lapack(k), qr_.data(),
                                           as_lapack(rows_), tau_.data(), qtb.data(), as_lapack(rows_));
    if (info != 0) {
        throw std::runtime_error("dormqr failed with info " + std::to_string(info));
    }
    const std::size_t r = rank(rcond);
    std::vector<double> y(r);
    for (std::size_t ii = r; ii-- > 0;) {
        double s = qtb[ii];
        for (std::size_t j = ii + 1; j < r; ++j) {
            s -= qr_[j * rows_ + ii] * y[j];
        }
        y[ii] = s / qr_[ii * rows_ + ii];
    }
    std::vector<double> x(cols_, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        x[perm_[i]] = y[i];
    }
    return x;
}

double default_rcond(std::size_t rows, std::size_t cols)
{
    return std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(rows, cols));
}

namespace {

template <class Residual>
LeastSquaresResult finish(const PivotedQr& qr, std::span<const double> rhs, double rcond, Residual&& residual)
{
    LeastSquaresResult result;
    result.x = qr.solve(rhs, rcond);
    result.report.rank = qr.rank(rcond);
    result.report.rank_deficient = result.report.rank < qr.cols();
    result.report.condition_estimate = qr.condition_estimate();
    const std::vector<double> ax = residual(result.x);
    std::vector<double> diff(rhs.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = ax[i] - rhs[i];
    }
    result.report.residual_norm = norm2(diff);
    return result;
}

}  // namespace

LeastSquaresResult lstsq_solve(const DenseMatrix& a, std::span<const double> rhs, double rcond)
{
    require(a.rows() >= a.cols(), "lstsq_solve: system must have at least as many rows as columns");
    require(rhs.size() == a.rows(), "lstsq_solve: right-hand side length mismatch");
    if (rcond < 0.0) {
        rcond = default_rcond(a.rows(), a.cols());
    }
    const PivotedQr qr(a);
    return finish(qr, rhs, rcond, [&](const std::vector<double>& x) { return a * x; });
}

LeastSquaresResult lstsq_solve(const KroneckerSum& op, std::span<const double> rhs, double rcond)
{
    require(op.rows() >= op.cols(), "lstsq_solve: system must have at least as many rows as columns");
    require(rhs.size() == op.rows(), "lstsq_solve: right-hand side length mismatch");
    if (rcond < 0.0) {
        rcond = default_rcond(op.rows(), op.cols());
    }
    const PivotedQr qr(op.rows(), op.cols(), op.materialize_column_major());
    return finish(qr, rhs, rcond, [&](const std::vector<double>& x) { return op.apply(x); });
}

}  // namespace fracdiff
