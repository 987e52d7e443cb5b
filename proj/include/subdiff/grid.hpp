#pragma once

#include <Eigen/Core>
#include <functional>

namespace subdiff {

// Row-major so that the time history u(m, 0..n) of one spatial node is
// contiguous, and so matrices map onto numpy arrays without copies.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Uniform space-time mesh over [0, length] x [0, horizon].
///
/// `nx` and `nt` count intervals; node m runs 0..nx, level n runs 0..nt.
struct Grid {
    Grid(int nx, int nt, double length = 1.0, double horizon = 1.0);

    int nx;
    int nt;
    double length;
    double horizon;
    double hx;   // length / nx
    double tau;  // horizon / nt

    double x(int m) const { return static_cast<double>(m) * hx; }
    double t(int n) const { return static_cast<double>(n) * tau; }

    // The discovery mask: interior nodes 1 <= m <= nx-1, levels 1 <= n <= nt
    // (the stencil needs both neighbours and the Caputo sum needs a history).
    int masked_count() const { return (nx - 1) * nt; }

    bool operator==(const Grid& other) const {
        return nx == other.nx && nt == other.nt &&
               length == other.length && horizon == other.horizon;
    }
};

/// Scalar samples on every node of a grid, shape (nx+1) x (nt+1).
struct Field {
    explicit Field(const Grid& g) : grid(g), values(Matrix::Zero(g.nx + 1, g.nt + 1)) {}
    Field(const Grid& g, Matrix v);

    Grid grid;
    Matrix values;

    double& operator()(int m, int n) { return values(m, n); }
    double operator()(int m, int n) const { return values(m, n); }

    bool all_finite() const { return values.allFinite(); }

    /// Sample f(x, t) at every node.
    static Field sample(const Grid& g, const std::function<double(double, double)>& f);
};

/// Visit the masked nodes in m-major order (the canonical artifact order).
template <typename Fn>
void for_each_masked(const Grid& g, Fn&& fn) {
    for (int m = 1; m <= g.nx - 1; ++m)
        for (int n = 1; n <= g.nt; ++n)
            fn(m, n);
}

}  // namespace subdiff
