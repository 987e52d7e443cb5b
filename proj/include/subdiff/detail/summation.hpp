#pragma once

#include <cstddef>
#include <span>

namespace subdiff::detail {

// Pairwise (cascade) summation: O(eps * log n) roundoff growth instead of
// O(eps * n) for a left-to-right loop. History sums run over hundreds of
// time levels, so this keeps the convolution error well below the scheme
// tolerance.
inline double pairwise_sum(std::span<const double> terms) {
    const std::size_t n = terms.size();
    if (n <= 8) {
        double s = 0.0;
        for (double v : terms) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

// Pairwise dot product of two equally sized ranges.
inline double pairwise_dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_dot(a.first(half), b.first(half)) +
           pairwise_dot(a.subspan(half), b.subspan(half));
}

}  // namespace subdiff::detail
