#pragma once

#include "fracdiff/frbspline.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace fracdiff {

/// Dirichlet B-basis of degree n on [0, 1] at dyadic level j.
///
/// The spline space is spanned by the 2^j + n translates B_n(2^j x - k),
/// k = -n..2^j-1, restricted to [0, 1]. Its B-basis is the clamped
/// (open-knot) B-spline basis; interior members are the plain translates
/// k = 0..2^j-1-n, the n-1 members at each end are fixed combinations of
/// the cut translates. Dropping the single member that does not vanish at
/// each endpoint leaves 2^j + n - 2 functions with homogeneous Dirichlet
/// values. Function indices run 0..size()-1 from left to right.
class SpatialBasis {
public:
    struct Term {
        int translate;
        double coefficient;
    };

    SpatialBasis(int level, int degree);

    int level() const noexcept { return level_; }
    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return functions_.size(); }

    /// phi_k(x) for deriv = 0, phi_k'(x) for deriv = 1.
    /// Throws std::out_of_range for a bad index, std::domain_error for x outside [0, 1].
    double value(std::size_t k, double x, int deriv = 0) const;

    /// Expansion of function k in the translates B_n(2^j x - translate).
    const std::vector<Term>& terms(std::size_t k) const { return functions_.at(k); }

    /// Closed support of function k within [0, 1].
    std::pair<double, double> support(std::size_t k) const;

    /// Restricted translate B_n(2^j x - translate) or its derivative, translate in [-n, 2^j-1].
    double translate_value(int translate, double x, int deriv = 0) const;

    /// The two dropped clamped B-splines (nonzero at x = 0 and x = 1 respectively).
    double dropped_left(double x, int deriv = 0) const;
    double dropped_right(double x, int deriv = 0) const;

private:
    double combination(const std::vector<Term>& terms, double x, int deriv) const;

    int level_;
    int degree_;
    double scale_;
    FractionalBSpline spline_;
    FractionalBSpline lower_;
    std::vector<std::vector<Term>> functions_;
    std::vector<Term> dropped_left_;
    std::vector<Term> dropped_right_;
};

/// Throws std::invalid_argument if j < 2, n < 1 or 2^j < 2n.
SpatialBasis build_spatial(int j, int n = 3);

/// Temporal family chi_r(t) = B_beta(2^s t - r) on [0, T], r_min <= r <= r_max.
///
/// r_max = 2^s T - 1 is the last translate starting inside [0, T);
/// r_min = -(S - 1) keeps every translate whose effective support
/// [r, r + S] overlaps (0, T].
class TemporalBasis {
public:
    TemporalBasis(int level, double degree, int horizon, double tail_tol = kDefaultTailTol,
                  std::optional<int> support_override = std::nullopt);

    int level() const noexcept { return level_; }
    double degree() const noexcept { return spline_.degree(); }
    int horizon() const noexcept { return horizon_; }
    int effective_support() const noexcept { return support_; }
    int r_min() const noexcept { return r_min_; }
    int r_max() const noexcept { return r_max_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(r_max_ - r_min_ + 1); }

    int translate(std::size_t column) const { return r_min_ + static_cast<int>(column); }
    std::size_t column(int r) const;

    const FractionalBSpline& spline() const noexcept { return spline_; }

    /// chi_r(t) for gamma == 0, otherwise 2^{s gamma} (D^gamma B_beta)(2^s t - r).
    /// Throws std::domain_error for t outside [0, T], std::invalid_argument for
    /// gamma outside [0, beta + 1/2), std::out_of_range for r outside the range.
    double eval(int r, double t, double gamma = 0.0) const;

private:
    int level_;
    int horizon_;
    FractionalBSpline spline_;
    int support_;
    int r_min_;
    int r_max_;
    double dilation_;
};

TemporalBasis build_temporal(int s, double beta, int horizon = 1, double tail_tol = kDefaultTailTol,
                             std::optional<int> support_override = std::nullopt);

}  // namespace fracdiff
