#pragma once

#include "fracdiff/assembly.hpp"
#include "fracdiff/basis.hpp"
#include "fracdiff/linalg.hpp"
#include "fracdiff/problem.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace fracdiff {

/// Condition estimates above this are flagged in SolveResult.
inline constexpr double kConditionWarningThreshold = 1e12;

struct SolveConfig {
    double gamma = 0.5;
    int alpha = 3;        // spatial spline degree
    double beta = 3.5;    // temporal fractional spline degree
    int j = 3;            // spatial level
    int s = 5;            // temporal level
    std::optional<int> q; // collocation level, s + 1 when unset
    int horizon = 1;
    double tail_tol = kDefaultTailTol;
    std::optional<int> temporal_support;  // overrides the effective support of B_beta
    int quad_points = 8;
    bool ic_row = true;
    double ic_weight = 100.0;  // scales the initial-condition rows of the least-squares system
    double rcond = -1.0;  // negative: eps * max(rows, cols)

    int collocation_level() const { return q.value_or(s + 1); }

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

/// u_{s,j}(t, x) = sum_k sum_r lambda(k, r) chi_r(t) phi_k(x).
class Solution {
public:
    Solution(SpatialBasis spatial, TemporalBasis temporal, DenseMatrix lambda, SolveConfig config);

    const SpatialBasis& spatial() const noexcept { return spatial_; }
    const TemporalBasis& temporal() const noexcept { return temporal_; }
    const DenseMatrix& lambda() const noexcept { return lambda_; }
    const SolveConfig& config() const noexcept { return config_; }
    std::size_t dof() const noexcept { return lambda_.rows() * lambda_.cols(); }

    /// Throws std::domain_error outside [0, T] x [0, 1].
    double evaluate(double t, double x) const;
    double evaluate_dx(double t, double x) const;
    /// Caputo derivative in time of order config().gamma.
    double evaluate_dt_gamma(double t, double x) const;

private:
    double contract(double t, double x, double time_order, int space_deriv) const;

    SpatialBasis spatial_;
    TemporalBasis temporal_;
    DenseMatrix lambda_;  // n_x x n_r
    SolveConfig config_;
};

struct SolveResult {
    Solution solution;
    LeastSquaresReport report;
    bool condition_warning = false;
    std::size_t rows = 0;
};

/// Bases and discrete operators for a problem; F has the initial-condition column zeroed.
DiscreteSystem assemble_system(const ProblemSpec& problem, const SolveConfig& config);

/// Builds the bases, assembles, and solves the collocation system in the least-squares sense.
SolveResult solve(const ProblemSpec& problem, const SolveConfig& config);

/// Space-time L2 error over [0, T] x [0, 1], tensor Gauss (4 points per cell at level max(j, s) + 1).
double l2_error(const Solution& solution, const SpaceTimeFunction& exact);

/// Spatial L2 error at t = T.
double l2_error_final_time(const Solution& solution, const SpaceTimeFunction& exact);

struct ErrorReport {
    double l2_error = 0.0;
    double final_time_l2 = 0.0;
    std::size_t dof = 0;
    double condition_estimate = 0.0;
    double residual = 0.0;
};

/// Requires problem.exact.
ErrorReport measure_error(const SolveResult& result, const ProblemSpec& problem);

}  // namespace fracdiff
