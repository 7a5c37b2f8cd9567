#include "fracdiff/frbspline.hpp"

#include "fracdiff/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracdiff {

namespace {

// Enough weights for every argument the solver produces (2^8 T + 64 for T <= 4);
// larger arguments extend the recurrence on the fly.
constexpr std::size_t kStoredWeights = 1200;

constexpr int kSupportSamplesPerUnit = 32;

}  // namespace

double truncated_power(double alpha, double t)
{
    if (t < 0.0) {
        return 0.0;
    }
    if (t == 0.0) {
        return alpha == 0.0 ? 1.0 : (alpha > 0.0 ? 0.0 : HUGE_VAL);
    }
    return std::pow(t, alpha);
}

std::vector<double> finite_diff_weights(double alpha, std::size_t k_max)
{
    std::vector<double> w(k_max + 1);
    double c = 1.0;
    w[0] = 1.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        c *= -(alpha - static_cast<double>(k) + 1.0) / static_cast<double>(k);
        w[k] = c;
    }
    return w;
}

std::vector<double> mask(double alpha, std::size_t k_max)
{
    const double scale = std::pow(2.0, -alpha);
    std::vector<double> a(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        a[k] = scale * gen_binomial(alpha + 1.0, k);
    }
    return a;
}

FractionalBSpline::FractionalBSpline(double degree, double tail_tol)
    : degree_(degree),
      tail_tol_(tail_tol),
      integer_degree_(degree == std::floor(degree)),
      inv_gamma_(0.0),
      support_(0)
{
    if (!(degree > -0.5)) {
        throw std::invalid_argument("FractionalBSpline: degree must exceed -1/2");
    }
    if (!(tail_tol > 0.0)) {
        throw std::invalid_argument("FractionalBSpline: tail tolerance must be positive");
    }
    inv_gamma_ = 1.0 / gamma(degree_ + 1.0);
    weights_ = finite_diff_weights(degree_ + 1.0, kStoredWeights - 1);
    support_ = compute_support();
}

double FractionalBSpline::difference_sum(double exponent, double t) const
{
    // Sum_{k < t} w_k (t-k)^exponent, plus the k = t term when it is nonzero.
    const auto k_last = static_cast<std::size_t>(std::floor(t));
    double sum = 0.0;
    double w = 0.0;
    for (std::size_t k = 0; k <= k_last; ++k) {
        if (k < weights_.size()) {
            w = weights_[k];
        } else {
            w *= -(degree_ + 1.0 - static_cast<double>(k) + 1.0) / static_cast<double>(k);
        }
        if (w == 0.0) {
            if (integer_degree_) {
                break;
            }
            continue;
        }
        sum += w * truncated_power(exponent, t - static_cast<double>(k));
    }
    return sum;
}

double FractionalBSpline::eval_untruncated(double t) const
{
    if (t < 0.0 || (t == 0.0 && degree_ > 0.0)) {
        return 0.0;
    }
    return inv_gamma_ * difference_sum(degree_, t);
}

double FractionalBSpline::operator()(double t) const
{
    if (t >= static_cast<double>(support_)) {
        return 0.0;
    }
    return eval_untruncated(t);
}

double FractionalBSpline::derivative(double gamma_order, double t) const
{
    if (!(gamma_order > 0.0) || !(gamma_order < degree_ + 0.5)) {
        throw std::invalid_argument("FractionalBSpline::derivative: order " +
                                    std::to_string(gamma_order) + " outside (0, degree + 1/2)");
    }
    if (t <= 0.0) {
        return 0.0;
    }
    const double exponent = degree_ - gamma_order;
    if (integer_degree_ && t >= static_cast<double>(support_)) {
        // Delta^{n+1} of a polynomial of degree < n+1 vanishes identically.
        if (exponent == std::floor(exponent)) {
            return 0.0;
        }
    }
    return difference_sum(exponent, t) / gamma(exponent + 1.0);
}

int FractionalBSpline::compute_support() const
{
    if (integer_degree_) {
        return static_cast<int>(degree_) + 1;
    }
    const int min_support = static_cast<int>(std::ceil(degree_)) + 1;
    // Last unit window (m, m+1] on which |B| reaches the tolerance.
    int last_bad = -1;
    for (int m = 0; m < kMaxEffectiveSupport; ++m) {
        double window_max = 0.0;
        for (int i = 1; i <= kSupportSamplesPerUnit; ++i) {
            const double t = m + static_cast<double>(i) / kSupportSamplesPerUnit;
            window_max = std::max(window_max, std::abs(eval_untruncated(t)));
        }
        if (window_max >= tail_tol_) {
            last_bad = m;
        }
    }
    return std::clamp(last_bad + 1, min_support, kMaxEffectiveSupport);
}

}  // namespace fracdiff
