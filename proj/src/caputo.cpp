#include "fracdiff/caputo.hpp"

#include "fracdiff/specfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracdiff {

double caputo_oracle(const std::function<double(double)>& derivative, double gamma_order, double t,
                     const std::vector<double>& breakpoints, const CaputoOptions& options)
{
    if (!(gamma_order > 0.0 && gamma_order <= 1.0)) {
        throw std::invalid_argument("caputo_oracle: order must lie in (0, 1]");
    }
    if (t <= 0.0) {
        return 0.0;
    }
    if (gamma_order == 1.0) {
        return derivative(t);
    }
    const double p = 1.0 / (1.0 - gamma_order);
    // sigma in [0, t^{1-g}] maps to tau = t - sigma^p, descending.
    std::vector<double> cuts{0.0, std::pow(t, 1.0 - gamma_order)};
    for (double b : breakpoints) {
        if (b > 0.0 && b < t) {
            cuts.push_back(std::pow(t - b, 1.0 - gamma_order));
        }
    }
    std::sort(cuts.begin(), cuts.end());
    const auto integrand = [&](double sigma) { return p * derivative(t - std::pow(sigma, p)); };

    double total = 0.0;
    double l1 = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) {
            continue;
        }
        double piece_error = 0.0;
        double piece_l1 = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            integrand, cuts[i], cuts[i + 1], options.max_depth, options.tolerance, &piece_error, &piece_l1);
        error += piece_error;
        l1 += piece_l1;
    }
    if (error > options.max_error * std::max(l1, 1.0)) {
        throw std::runtime_error("caputo_oracle: quadrature did not converge");
    }
    return total / gamma(1.0 - gamma_order);
}

double caputo_oracle_numeric(const std::function<double(double)>& f, double gamma_order, double t, double h,
                             const std::vector<double>& breakpoints, const CaputoOptions& options)
{
    if (!(h > 0.0)) {
        throw std::invalid_argument("caputo_oracle_numeric: step must be positive");
    }
    // Stencils stay inside the smooth piece containing x, so kinks of f at the
    // breakpoints (and at 0 and t) do not leak into f'.
    std::vector<double> edges{0.0, t};
    for (double b : breakpoints) {
        if (b > 0.0 && b < t) {
            edges.push_back(b);
        }
    }
    std::sort(edges.begin(), edges.end());
    const auto derivative = [&](double x) {
        auto upper = std::lower_bound(edges.begin(), edges.end(), x);
        if (upper == edges.begin()) {
            ++upper;
        }
        const double hi = upper == edges.end() ? t : *upper;
        const double lo = *(upper - 1);
        if (x - 2.0 * h < lo) {
            return (-25.0 * f(x) + 48.0 * f(x + h) - 36.0 * f(x + 2.0 * h) + 16.0 * f(x + 3.0 * h) -
                    3.0 * f(x + 4.0 * h)) / (12.0 * h);
        }
        if (x + 2.0 * h > hi) {
            return (25.0 * f(x) - 48.0 * f(x - h) + 36.0 * f(x - 2.0 * h) - 16.0 * f(x - 3.0 * h) +
                    3.0 * f(x - 4.0 * h)) / (12.0 * h);
        }
        return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
    };
    return caputo_oracle(derivative, gamma_order, t, breakpoints, options);
}

}  // namespace fracdiff
