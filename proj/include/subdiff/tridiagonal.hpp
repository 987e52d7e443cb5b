#pragma once

#include <vector>

namespace subdiff {

/// Tridiagonal linear system. `lower[i]` couples row i+1 to row i and
/// `upper[i]` couples row i to row i+1, so both off-diagonals have size n-1.
struct TridiagonalSystem {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> rhs;
};

/// Thomas elimination. The systems assembled by the solver are strictly
/// diagonally dominant; a vanishing pivot is still reported rather than
/// propagated as NaN.
std::vector<double> thomas_solve(const TridiagonalSystem& sys);

}  // namespace subdiff
