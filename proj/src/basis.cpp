#include "fracdiff/basis.hpp"

#include "fracdiff/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracdiff {

namespace {

// nu-th derivative of the cardinal B-spline of integer degree at u.
double cardinal_derivative(const FractionalBSpline& b, int nu, double u)
{
    return nu == 0 ? b(u) : b.derivative(static_cast<double>(nu), u);
}

}  // namespace

SpatialBasis::SpatialBasis(int level, int degree)
    : level_(level),
      degree_(degree),
      scale_(std::ldexp(1.0, level)),
      spline_(static_cast<double>(degree)),
      lower_(static_cast<double>(std::max(degree - 1, 0)))
{
    if (level < 2 || degree < 1) {
        throw std::invalid_argument("build_spatial: need level >= 2 and degree >= 1");
    }
    const int cells = 1 << level;
    if (cells < 2 * degree) {
        throw std::invalid_argument("build_spatial: level " + std::to_string(level) +
                                    " has too few cells for degree " + std::to_string(degree));
    }
    const int n = degree;

    // Left boundary functions N_1..N_{n-1}: N_i is a combination of translates
    // k = -n..i-n vanishing to order i at x = 0. Coefficient of k = i-n fixed to 1.
    std::vector<std::vector<double>> raw(static_cast<std::size_t>(n));
    for (int i = 1; i < n; ++i) {
        std::vector<double> c(static_cast<std::size_t>(i + 1), 0.0);
        c[static_cast<std::size_t>(i)] = 1.0;
        DenseMatrix system(static_cast<std::size_t>(i), static_cast<std::size_t>(i));
        std::vector<double> rhs(static_cast<std::size_t>(i));
        for (int nu = 0; nu < i; ++nu) {
            for (int m = 0; m < i; ++m) {
                const int k = -n + m;
                system(static_cast<std::size_t>(nu), static_cast<std::size_t>(m)) =
                    cardinal_derivative(spline_, nu, -static_cast<double>(k));
            }
            rhs[static_cast<std::size_t>(nu)] = -cardinal_derivative(spline_, nu, -static_cast<double>(i - n));
        }
        const auto sol = lstsq_solve(system, rhs).x;
        std::copy(sol.begin(), sol.end(), c.begin());
        raw[static_cast<std::size_t>(i)] = std::move(c);
    }
    // Scale so that N_0 + ... + N_{n-1} equals the sum of the cut translates,
    // i.e. the complete family is a partition of unity.
    std::vector<double> column_sum(static_cast<std::size_t>(n), 0.0);  // indexed by k + n
    for (int i = n - 1; i >= 1; --i) {
        auto& c = raw[static_cast<std::size_t>(i)];
        const double factor = 1.0 - column_sum[static_cast<std::size_t>(i)];
        for (int m = 0; m <= i; ++m) {
            c[static_cast<std::size_t>(m)] *= factor;
            column_sum[static_cast<std::size_t>(m)] += c[static_cast<std::size_t>(m)];
        }
    }
    const double dropped_coefficient = 1.0 - column_sum[0];

    const auto mirror = [&](int k) { return cells - n - 1 - k; };
    dropped_left_ = {{-n, dropped_coefficient}};
    dropped_right_ = {{mirror(-n), dropped_coefficient}};

    for (int i = 1; i < n; ++i) {
        std::vector<Term> terms;
        for (int m = 0; m <= i; ++m) {
            terms.push_back({-n + m, raw[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)]});
        }
        functions_.push_back(std::move(terms));
    }
    for (int k = 0; k <= cells - 1 - n; ++k) {
        functions_.push_back({{k, 1.0}});
    }
    for (int i = n - 1; i >= 1; --i) {
        std::vector<Term> terms;
        for (int m = i; m >= 0; --m) {
            terms.push_back({mirror(-n + m), raw[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)]});
        }
        functions_.push_back(std::move(terms));
    }
}

double SpatialBasis::translate_value(int translate, double x, int deriv) const
{
    const double u = scale_ * x - translate;
    switch (deriv) {
    case 0:
        return spline_(u);
    case 1:
        return scale_ * (lower_(u) - lower_(u - 1.0));
    default:
        throw std::invalid_argument("SpatialBasis: only derivative orders 0 and 1 are supported");
    }
}

double SpatialBasis::combination(const std::vector<Term>& terms, double x, int deriv) const
{
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("SpatialBasis: x outside [0, 1]");
    }
    double v = 0.0;
    for (const Term& t : terms) {
        v += t.coefficient * translate_value(t.translate, x, deriv);
    }
    return v;
}

double SpatialBasis::value(std::size_t k, double x, int deriv) const
{
    if (k >= functions_.size()) {
        throw std::out_of_range("SpatialBasis: function index " + std::to_string(k) + " out of range");
    }
    return combination(functions_[k], x, deriv);
}

double SpatialBasis::dropped_left(double x, int deriv) const { return combination(dropped_left_, x, deriv); }

double SpatialBasis::dropped_right(double x, int deriv) const { return combination(dropped_right_, x, deriv); }

std::pair<double, double> SpatialBasis::support(std::size_t k) const
{
    const auto& terms = functions_.at(k);
    int lo = terms.front().translate;
    int hi = terms.front().translate;
    for (const Term& t : terms) {
        lo = std::min(lo, t.translate);
        hi = std::max(hi, t.translate);
    }
    const double a = std::max(0.0, lo / scale_);
    const double b = std::min(1.0, (hi + degree_ + 1) / scale_);
    return {a, b};
}

SpatialBasis build_spatial(int j, int n) { return SpatialBasis(j, n); }

TemporalBasis::TemporalBasis(int level, double degree, int horizon, double tail_tol,
                             std::optional<int> support_override)
    : level_(level), horizon_(horizon), spline_(degree, tail_tol), support_(0), r_min_(0), r_max_(0),
      dilation_(std::ldexp(1.0, level))
{
    if (level < 0 || level > 20) {
        throw std::invalid_argument("build_temporal: level out of range");
    }
    if (horizon < 1) {
        throw std::invalid_argument("build_temporal: horizon must be a positive integer");
    }
    support_ = support_override.value_or(spline_.effective_support());
    if (support_ < 1) {
        throw std::invalid_argument("build_temporal: support override must be positive");
    }
    r_min_ = -(support_ - 1);
    r_max_ = (1 << level) * horizon - 1;
}

std::size_t TemporalBasis::column(int r) const
{
    if (r < r_min_ || r > r_max_) {
        throw std::out_of_range("TemporalBasis: translate " + std::to_string(r) + " out of range");
    }
    return static_cast<std::size_t>(r - r_min_);
}

double TemporalBasis::eval(int r, double t, double gamma_order) const
{
    column(r);
    if (!(t >= 0.0 && t <= static_cast<double>(horizon_))) {
        throw std::domain_error("TemporalBasis: t outside [0, T]");
    }
    const double u = dilation_ * t - r;
    if (gamma_order == 0.0) {
        return spline_(u);
    }
    if (!(gamma_order > 0.0)) {
        throw std::invalid_argument("TemporalBasis: negative derivative order");
    }
    return std::pow(dilation_, gamma_order) * spline_.derivative(gamma_order, u);
}

TemporalBasis build_temporal(int s, double beta, int horizon, double tail_tol, std::optional<int> support_override)
{
    return TemporalBasis(s, beta, horizon, tail_tol, support_override);
}

}  // namespace fracdiff
