#include "fracdiff/solver.hpp"

#include "fracdiff/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracdiff {

namespace {

void require(bool condition, const std::string& what)
{
    if (!condition) {
        throw std::invalid_argument("SolveConfig: " + what);
    }
}

QuadraturePoints time_points(int level, int horizon, int points)
{
    QuadraturePoints all;
    for (int m = 0; m < horizon; ++m) {
        const auto unit = composite_points(QuadratureRule{points, level}, m, m + 1.0);
        all.x.insert(all.x.end(), unit.x.begin(), unit.x.end());
        all.w.insert(all.w.end(), unit.w.begin(), unit.w.end());
    }
    return all;
}

}  // namespace

void SolveConfig::validate() const
{
    require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
    require(beta > gamma - 0.5, "beta must exceed gamma - 1/2");
    require(alpha >= 1, "alpha must be at least 1");
    require(j >= 2 && j <= 12, "j must lie in [2, 12]");
    require(s >= 0 && s <= 12, "s must lie in [0, 12]");
    require(collocation_level() >= s, "q must be at least s");
    require(horizon >= 1, "T must be a positive integer");
    require(tail_tol > 0.0, "tail tolerance must be positive");
    require(quad_points >= 1, "quadrature needs at least one point per cell");
    require(ic_weight > 0.0 && std::isfinite(ic_weight), "initial-condition weight must be positive");
}

Solution::Solution(SpatialBasis spatial, TemporalBasis temporal, DenseMatrix lambda, SolveConfig config)
    : spatial_(std::move(spatial)), temporal_(std::move(temporal)), lambda_(std::move(lambda)), config_(config)
{
    if (lambda_.rows() != spatial_.size() || lambda_.cols() != temporal_.size()) {
        throw std::invalid_argument("Solution: coefficient shape does not match the bases");
    }
    if (!lambda_.all_finite()) {
        throw std::runtime_error("Solution: non-finite coefficients");
    }
}

double Solution::contract(double t, double x, double time_order, int space_deriv) const
{
    if (!(t >= 0.0 && t <= temporal_.horizon() && x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("Solution: point outside [0, T] x [0, 1]");
    }
    std::vector<double> chi(temporal_.size());
    for (std::size_t c = 0; c < chi.size(); ++c) {
        chi[c] = temporal_.eval(temporal_.translate(c), t, time_order);
    }
    double u = 0.0;
    for (std::size_t k = 0; k < spatial_.size(); ++k) {
        const auto [lo, hi] = spatial_.support(k);
        if (x < lo || x > hi) {
            continue;
        }
        const double phi = spatial_.value(k, x, space_deriv);
        if (phi == 0.0) {
            continue;
        }
        double c = 0.0;
        for (std::size_t r = 0; r < chi.size(); ++r) {
            c += lambda_(k, r) * chi[r];
        }
        u += c * phi;
    }
    return u;
}

double Solution::evaluate(double t, double x) const { return contract(t, x, 0.0, 0); }

double Solution::evaluate_dx(double t, double x) const { return contract(t, x, 0.0, 1); }

double Solution::evaluate_dt_gamma(double t, double x) const { return contract(t, x, config_.gamma, 0); }

DiscreteSystem assemble_system(const ProblemSpec& problem, const SolveConfig& config)
{
    config.validate();
    if (std::abs(problem.gamma - config.gamma) > 1e-15) {
        throw std::invalid_argument("solve: problem and configuration disagree on gamma");
    }
    if (std::abs(problem.horizon - config.horizon) > 1e-15) {
        throw std::invalid_argument("solve: problem and configuration disagree on the horizon");
    }
    const SpatialBasis spatial = build_spatial(config.j, config.alpha);
    const TemporalBasis temporal =
        build_temporal(config.s, config.beta, config.horizon, config.tail_tol, config.temporal_support);
    const QuadratureRule quad = QuadratureRule::for_levels(config.j, config.s, config.quad_points);

    DiscreteSystem sys;
    sys.mass = assemble_mass(spatial, quad);
    sys.stiffness = assemble_stiffness(spatial, quad);
    auto colloc = assemble_collocation(temporal, config.gamma, config.collocation_level(), config.ic_row);
    sys.a = std::move(colloc.a);
    sys.g = std::move(colloc.g);
    sys.nodes = std::move(colloc.nodes);
    sys.ic_row = colloc.ic_row;
    sys.load = assemble_load_matrix(spatial, problem.forcing, sys.nodes, quad);
    if (sys.ic_row) {
        for (std::size_t k = 0; k < sys.load.rows(); ++k) {
            sys.load(k, 0) = 0.0;
        }
    }
    return sys;
}

SolveResult solve(const ProblemSpec& problem, const SolveConfig& config)
{
    DiscreteSystem sys = assemble_system(problem, config);
    SpatialBasis spatial = build_spatial(config.j, config.alpha);
    TemporalBasis temporal =
        build_temporal(config.s, config.beta, config.horizon, config.tail_tol, config.temporal_support);

    const std::size_t nx = spatial.size();
    const std::size_t nr = temporal.size();
    if (sys.ic_row) {
        for (double& v : sys.g.row(0)) {
            v *= config.ic_weight;
        }
    }
    const KroneckerSum op(std::move(sys.mass), std::move(sys.a), std::move(sys.stiffness), std::move(sys.g));
    const auto rhs = sys.load.data();
    LeastSquaresResult ls = lstsq_solve(op, rhs, config.rcond);

    DenseMatrix lambda(nx, nr);
    std::copy(ls.x.begin(), ls.x.end(), lambda.data().begin());
    const bool warn = ls.report.condition_estimate > kConditionWarningThreshold;
    return SolveResult{Solution(std::move(spatial), std::move(temporal), std::move(lambda), config), ls.report, warn,
                       op.rows()};
}

double l2_error(const Solution& solution, const SpaceTimeFunction& exact)
{
    const SpatialBasis& spatial = solution.spatial();
    const TemporalBasis& temporal = solution.temporal();
    const int level = std::max(spatial.level(), temporal.level()) + 1;
    const auto xs = composite_points(QuadratureRule{4, level}, 0.0, 1.0);
    const auto ts = time_points(level, temporal.horizon(), 4);

    DenseMatrix phi(spatial.size(), xs.x.size());
    for (std::size_t k = 0; k < spatial.size(); ++k) {
        const auto [lo, hi] = spatial.support(k);
        for (std::size_t i = 0; i < xs.x.size(); ++i) {
            if (xs.x[i] > lo && xs.x[i] < hi) {
                phi(k, i) = spatial.value(k, xs.x[i]);
            }
        }
    }
    DenseMatrix chi(ts.x.size(), temporal.size());
    for (std::size_t i = 0; i < ts.x.size(); ++i) {
        for (std::size_t c = 0; c < temporal.size(); ++c) {
            chi(i, c) = temporal.eval(temporal.translate(c), ts.x[i]);
        }
    }
    const DenseMatrix u = chi * (solution.lambda().transpose() * phi);  // time x space

    double sum = 0.0;
    for (std::size_t a = 0; a < ts.x.size(); ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < xs.x.size(); ++b) {
            const double e = u(a, b) - exact(ts.x[a], xs.x[b]);
            row += xs.w[b] * e * e;
        }
        sum += ts.w[a] * row;
    }
    return std::sqrt(sum);
}

double l2_error_final_time(const Solution& solution, const SpaceTimeFunction& exact)
{
    const int level = std::max(solution.spatial().level(), solution.temporal().level()) + 1;
    const auto xs = composite_points(QuadratureRule{4, level}, 0.0, 1.0);
    const double t = solution.temporal().horizon();
    double sum = 0.0;
    for (std::size_t b = 0; b < xs.x.size(); ++b) {
        const double e = solution.evaluate(t, xs.x[b]) - exact(t, xs.x[b]);
        sum += xs.w[b] * e * e;
    }
    return std::sqrt(sum);
}

ErrorReport measure_error(const SolveResult& result, const ProblemSpec& problem)
{
    if (!problem.exact) {
        throw std::invalid_argument("measure_error: problem has no exact solution");
    }
    ErrorReport report;
    report.l2_error = l2_error(result.solution, *problem.exact);
    report.final_time_l2 = l2_error_final_time(result.solution, *problem.exact);
    report.dof = result.solution.dof();
    report.condition_estimate = result.report.condition_estimate;
    report.residual = result.report.residual_norm;
    return report;
}

}  // namespace fracdiff
