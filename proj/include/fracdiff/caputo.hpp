#pragma once

#include <functional>
#include <vector>

namespace fracdiff {

struct CaputoOptions {
    double tolerance = 1e-10;  // Gauss-Kronrod target
    unsigned max_depth = 12;
    double max_error = 1e-7;   // failure when the estimate exceeds max_error * max(L1, 1)
};

/// Reference Caputo derivative (1/Gamma(1-g)) int_0^t f'(tau) (t-tau)^-g dtau by
/// adaptive Gauss-Kronrod quadrature.
///
/// The substitution t - tau = sigma^{1/(1-g)} removes the endpoint
/// singularity. `breakpoints` lists points in (0, t) where f' may jump; each
/// smooth piece is integrated separately. gamma == 1 returns f'(t).
/// Intended as a test oracle, not for production use.
/// Throws std::runtime_error when the error estimate misses the tolerance.
double caputo_oracle(const std::function<double(double)>& derivative, double gamma, double t,
                     const std::vector<double>& breakpoints = {}, const CaputoOptions& options = {});

/// Same, with f' from 4th-order finite differences of f (step h). Near 0, t and the
/// breakpoints the stencils turn one-sided so they never straddle a kink. Switching
/// stencils leaves small jumps in f', so the default failure threshold is looser.
double caputo_oracle_numeric(const std::function<double(double)>& f, double gamma, double t, double h = 1e-4,
                             const std::vector<double>& breakpoints = {},
                             const CaputoOptions& options = {1e-10, 12, 1e-5});

}  // namespace fracdiff
