#include "subdiff/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace subdiff {

Grid::Grid(int nx_, int nt_, double length_, double horizon_)
    : nx(nx_), nt(nt_), length(length_), horizon(horizon_),
      hx(length_ / nx_), tau(horizon_ / nt_) {
    if (nx < 2) throw std::invalid_argument("Grid: nx must be >= 2");
    if (nt < 1) throw std::invalid_argument("Grid: nt must be >= 1");
    if (!(length > 0.0) || !(horizon > 0.0))
        throw std::invalid_argument("Grid: length and horizon must be positive");
}

Field::Field(const Grid& g, Matrix v) : grid(g), values(std::move(v)) {
    if (values.rows() != g.nx + 1 || values.cols() != g.nt + 1)
        throw std::invalid_argument("Field: values shape must be (nx+1) x (nt+1)");
}

Field Field::sample(const Grid& g, const std::function<double(double, double)>& f) {
    Field out(g);
    for (int m = 0; m <= g.nx; ++m)
        for (int n = 0; n <= g.nt; ++n)
            out(m, n) = f(g.x(m), g.t(n));
    if (!out.all_finite()) throw std::runtime_error("Field::sample: non-finite sample");
    return out;
}

}  // namespace subdiff
