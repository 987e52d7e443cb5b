#include "subdiff/solver.hpp"

#include <stdexcept>

#include "subdiff/l1_weights.hpp"
#include "subdiff/tridiagonal.hpp"

namespace subdiff {

Problem::Problem(Grid grid_, double alpha_, const std::function<double(double)>& initial_,
                 Field source_)
    : grid(grid_), alpha(alpha_), initial(static_cast<std::size_t>(grid_.nx) + 1),
      source(std::move(source_)) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("Problem: alpha must lie in (0,1]");
    if (!(source.grid == grid))
        throw std::invalid_argument("Problem: source sampled on a different grid");
    for (int m = 0; m <= grid.nx; ++m)
        initial[static_cast<std::size_t>(m)] = initial_(grid.x(m));
    // Dirichlet data: the initial profile must vanish at the walls.
    initial.front() = 0.0;
    initial.back() = 0.0;
}

double laplacian_stencil(std::span<const double> column, int m, double hx) {
    if (m < 1 || static_cast<std::size_t>(m) + 1 >= column.size())
        throw std::out_of_range("laplacian_stencil: m must be an interior index");
    const std::size_t i = static_cast<std::size_t>(m);
    return (column[i + 1] - 2.0 * column[i] + column[i - 1]) / (hx * hx);
}

Field forward_solve(const Problem& problem) {
    const Grid& g = problem.grid;
    const L1Weights weights = L1Weights::for_order(problem.alpha, g.tau, g.nt);

    Field u(g);
    for (int m = 0; m <= g.nx; ++m) u(m, 0) = problem.initial[static_cast<std::size_t>(m)];

    const int interior = g.nx - 1;
    const double inv_h2 = 1.0 / (g.hx * g.hx);

    TridiagonalSystem sys;
    sys.lower.assign(static_cast<std::size_t>(interior) - 1, -inv_h2);
    sys.upper.assign(static_cast<std::size_t>(interior) - 1, -inv_h2);
    sys.diag.assign(static_cast<std::size_t>(interior), weights.omega0() + 2.0 * inv_h2);
    sys.rhs.resize(static_cast<std::size_t>(interior));

    for (int n = 1; n <= g.nt; ++n) {
        for (int m = 1; m <= interior; ++m) {
            const std::span<const double> prefix(&u.values(m, 0), static_cast<std::size_t>(n));
            sys.rhs[static_cast<std::size_t>(m - 1)] =
                problem.source(m, n) - weights.history_term(prefix);
        }
        const std::vector<double> level = thomas_solve(sys);
        for (int m = 1; m <= interior; ++m)
            u(m, n) = level[static_cast<std::size_t>(m - 1)];
    }

    if (!u.all_finite()) throw std::runtime_error("forward_solve: non-finite solution");
    return u;
}

}  // namespace subdiff
