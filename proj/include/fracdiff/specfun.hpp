#pragma once

#include <complex>
#include <cstddef>

namespace fracdiff {

using Complex = std::complex<double>;

/// Euler gamma function on the real line.
///
/// Lanczos approximation (g = 7, 9 coefficients) for x >= 0.5 and the
/// reflection formula below that. Relative accuracy is better than 1e-13
/// on (-10, 30). Throws std::domain_error at the poles x = 0, -1, -2, ...
double gamma(double x);

/// Generalized binomial coefficient C(alpha, k) = Gamma(alpha+1) / (k! Gamma(alpha-k+1)).
///
/// Evaluated by the product recurrence C(alpha,k) = C(alpha,k-1) (alpha-k+1)/k,
/// so integer alpha yields exact zeros for k > alpha instead of gamma poles.
double gen_binomial(double alpha, std::size_t k);

struct KummerOptions {
    double max_abs_z = 50.0;
    double rel_tol = 1e-14;
    std::size_t max_terms = 500;
};

/// Kummer's confluent hypergeometric function 1F1(a; b; z) by direct power series.
///
/// Throws std::domain_error when b is a non-positive integer or |z| exceeds
/// options.max_abs_z, std::runtime_error when the series does not reach the
/// tolerance within options.max_terms terms.
Complex kummer_1f1(double a, double b, Complex z, const KummerOptions& options = {});

}  // namespace fracdiff
