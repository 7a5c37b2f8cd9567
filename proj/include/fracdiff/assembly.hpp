#pragma once

#include "fracdiff/basis.hpp"
#include "fracdiff/linalg.hpp"
#include "fracdiff/problem.hpp"
#include "fracdiff/quadrature.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace fracdiff {

/// m_{k,i} = int_0^1 phi_k phi_i.
DenseMatrix assemble_mass(const SpatialBasis& basis, const QuadratureRule& quad);

/// l_{k,i} = int_0^1 phi_k' phi_i'.
DenseMatrix assemble_stiffness(const SpatialBasis& basis, const QuadratureRule& quad);

/// f_k(t) = int_0^1 f(t, x) phi_k(x) dx.
std::vector<double> assemble_load(const SpatialBasis& basis, const SpaceTimeFunction& f, double t,
                                  const QuadratureRule& quad);

/// Loads at several times: column p holds f_k(times[p]).
DenseMatrix assemble_load_matrix(const SpatialBasis& basis, const SpaceTimeFunction& f,
                                 std::span<const double> times, const QuadratureRule& quad);

struct CollocationMatrices {
    DenseMatrix a;  // D^gamma chi_r(t_p)
    DenseMatrix g;  // chi_r(t_p)
    std::vector<double> nodes;
    bool ic_row = false;
};

/// Collocation at t_p = p / 2^q, 0 < p <= 2^q T.
///
/// With include_ic_row a leading node t = 0 is added; there A is zero
/// (the Caputo derivative of a causal function vanishes at 0) and G holds
/// chi_r(0), so the row imposes the initial condition.
CollocationMatrices assemble_collocation(const TemporalBasis& tbasis, double gamma, int q, bool include_ic_row);

/// Operators of (M ⊗ A + L ⊗ G) vec(Lambda) = vec(F).
struct DiscreteSystem {
    DenseMatrix mass;
    DenseMatrix stiffness;
    DenseMatrix a;
    DenseMatrix g;
    DenseMatrix load;  // n_x x n_p
    std::vector<double> nodes;
    bool ic_row = false;
};

/// Writes "row col value" lines for every nonzero entry, 17 significant digits.
void write_triplets(std::ostream& out, const DenseMatrix& m);

}  // namespace fracdiff
