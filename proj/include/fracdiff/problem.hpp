#pragma once

#include <functional>
#include <optional>
#include <string>

namespace fracdiff {

using SpaceTimeFunction = std::function<double(double t, double x)>;

/// D_t^gamma u - u_xx = f on [0, T] x [0, 1] with u(0, x) = u(t, 0) = u(t, 1) = 0.
struct ProblemSpec {
    std::string name;
    double gamma = 0.5;
    double horizon = 1.0;
    SpaceTimeFunction forcing;
    std::optional<SpaceTimeFunction> exact;
};

/// u = t^2 sin(2 pi x). Requires 0 < gamma <= 1.
ProblemSpec example1(double gamma);

/// u = sin(pi t) sin(pi x); the Caputo derivative of sin(pi t) is expressed
/// through 1F1(1; 2-gamma; +-i pi t). Requires 0 < gamma <= 1.
ProblemSpec example2(double gamma);

/// Built-in problem by number (1 or 2); throws std::invalid_argument otherwise.
ProblemSpec make_example(int id, double gamma);

}  // namespace fracdiff
