#pragma once

#include <functional>
#include <span>
#include <vector>

#include "subdiff/grid.hpp"

namespace subdiff {

/// Subdiffusion initial-boundary-value problem on a grid: Caputo order
/// alpha in (0,1], homogeneous Dirichlet boundaries, initial profile g(x)
/// and a source sampled on every node.
struct Problem {
    Problem(Grid grid, double alpha, const std::function<double(double)>& initial,
            Field source);

    Grid grid;
    double alpha;
    std::vector<double> initial;  // g(x_m); endpoints forced to zero
    Field source;                 // f(x_m, t_n)
};

/// Second-order central difference at interior node m of a spatial profile.
double laplacian_stencil(std::span<const double> column, int m, double hx);

/// Implicit L1 / central-difference time stepping: one strictly diagonally
/// dominant tridiagonal solve per level. Returns u on the full grid with
/// u(m,0) = g(x_m) and zero boundary rows.
Field forward_solve(const Problem& problem);

}  // namespace subdiff
