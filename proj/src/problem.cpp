#include "fracdiff/problem.hpp"

#include "fracdiff/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracdiff {

namespace {

void check_order(double gamma_order)
{
    if (!(gamma_order > 0.0 && gamma_order <= 1.0)) {
        throw std::invalid_argument("derivative order must lie in (0, 1], got " + std::to_string(gamma_order));
    }
}

}  // namespace

ProblemSpec example1(double gamma_order)
{
    check_order(gamma_order);
    constexpr double pi = std::numbers::pi;
    const double c = 2.0 / gamma(3.0 - gamma_order);
    ProblemSpec p;
    p.name = "example1";
    p.gamma = gamma_order;
    p.forcing = [c, gamma_order](double t, double x) {
        const double s = std::sin(2.0 * pi * x);
        return c * std::pow(t, 2.0 - gamma_order) * s + 4.0 * pi * pi * t * t * s;
    };
    p.exact = [](double t, double x) { return t * t * std::sin(2.0 * pi * x); };
    return p;
}

ProblemSpec example2(double gamma_order)
{
    check_order(gamma_order);
    constexpr double pi = std::numbers::pi;
    const double b = 2.0 - gamma_order;
    const double c = pi / (2.0 * gamma(b));
    ProblemSpec p;
    p.name = "example2";
    p.gamma = gamma_order;
    p.forcing = [c, b, gamma_order](double t, double x) {
        // 1F1(1,b,i pi t) + 1F1(1,b,-i pi t) = 2 Re 1F1(1,b,i pi t) for real b.
        const double pair = 2.0 * kummer_1f1(1.0, b, Complex{0.0, pi * t}).real();
        const double time_part = c * std::pow(t, 1.0 - gamma_order) * pair + pi * pi * std::sin(pi * t);
        return time_part * std::sin(pi * x);
    };
    p.exact = [](double t, double x) { return std::sin(pi * t) * std::sin(pi * x); };
    return p;
}

ProblemSpec make_example(int id, double gamma_order)
{
    switch (id) {
    case 1:
        return example1(gamma_order);
    case 2:
        return example2(gamma_order);
    default:
        throw std::invalid_argument("unknown example " + std::to_string(id) + " (expected 1 or 2)");
    }
}

}  // namespace fracdiff
