#pragma once

#include <cstddef>
#include <vector>

namespace fracdiff {

/// Default tail tolerance for the effective support of a fractional B-spline.
/// With this value B_3.5 is treated as supported on [0, 10].
inline constexpr double kDefaultTailTol = 1.5e-7;

/// Upper bound on the effective support of non-integer degrees.
inline constexpr int kMaxEffectiveSupport = 64;

/// Fractional truncated power t_+^alpha; 0^0 is taken as 1.
double truncated_power(double alpha, double t);

/// Weights w_k = (-1)^k C(alpha, k), k = 0..k_max, of the generalized difference Delta^alpha.
std::vector<double> finite_diff_weights(double alpha, std::size_t k_max);

/// Two-scale mask a_k = 2^-alpha C(alpha+1, k), k = 0..k_max.
std::vector<double> mask(double alpha, std::size_t k_max);

/// Causal fractional B-spline B_alpha(t) = Delta^{alpha+1} t_+^alpha / Gamma(alpha+1).
///
/// Values are computed from the finite sum over k <= t, which is exact for
/// every fixed t. For non-integer degree the function decays but never
/// vanishes; beyond the effective support S (the first integer after which
/// |B_alpha| stays below the tail tolerance) the value is taken to be 0,
/// which also avoids the cancellation of the alternating sum for large t.
/// Integer degrees n have S = n + 1 and reproduce the polynomial B-splines.
///
/// Immutable after construction; safe to share between threads.
class FractionalBSpline {
public:
    explicit FractionalBSpline(double degree, double tail_tol = kDefaultTailTol);

    double degree() const noexcept { return degree_; }
    double tail_tol() const noexcept { return tail_tol_; }
    int effective_support() const noexcept { return support_; }
    bool is_integer_degree() const noexcept { return integer_degree_; }

    /// B_alpha(t); 0 for t < 0 and for t >= effective_support().
    double operator()(double t) const;
    double eval(double t) const { return (*this)(t); }

    /// Caputo derivative D^gamma B_alpha(t) = Delta^{alpha+1} t_+^{alpha-gamma} / Gamma(alpha-gamma+1).
    ///
    /// Valid for 0 < gamma < alpha + 1/2, integer gamma included (then it is
    /// the ordinary derivative). Not truncated at the effective support: the
    /// derivative of a fractional order has a slowly decaying tail.
    /// Throws std::invalid_argument outside the admissible range of gamma.
    double derivative(double gamma, double t) const;

    /// The same finite sum as operator() without the tail cut-off.
    double eval_untruncated(double t) const;

private:
    double difference_sum(double exponent, double t) const;
    int compute_support() const;

    double degree_;
    double tail_tol_;
    bool integer_degree_;
    double inv_gamma_;
    std::vector<double> weights_;  // (-1)^k C(degree+1, k)
    int support_;
};

}  // namespace fracdiff
