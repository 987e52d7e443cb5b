#include "subdiff/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>

namespace subdiff {

std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
    const std::size_t n = sys.diag.size();
    if (n == 0) throw std::invalid_argument("thomas_solve: empty system");
    if (sys.lower.size() != n - 1 || sys.upper.size() != n - 1 || sys.rhs.size() != n)
        throw std::invalid_argument("thomas_solve: inconsistent band sizes");

    std::vector<double> c(n - 1);   // modified upper band
    std::vector<double> x(sys.rhs);

    double pivot = sys.diag[0];
    if (pivot == 0.0) throw std::runtime_error("thomas_solve: zero pivot at row 0");
    if (n > 1) c[0] = sys.upper[0] / pivot;
    x[0] /= pivot;

    for (std::size_t i = 1; i < n; ++i) {
        pivot = sys.diag[i] - sys.lower[i - 1] * c[i - 1];
        if (pivot == 0.0)
            throw std::runtime_error("thomas_solve: zero pivot at row " + std::to_string(i));
        if (i < n - 1) c[i] = sys.upper[i] / pivot;
        x[i] = (x[i] - sys.lower[i - 1] * x[i - 1]) / pivot;
    }

    for (std::size_t i = n - 1; i-- > 0;)
        x[i] -= c[i] * x[i + 1];

    return x;
}

}  // namespace subdiff
