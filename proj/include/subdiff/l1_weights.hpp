#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace subdiff {

/// Convolution weights of the L1 discretization of the Caputo derivative on
/// a uniform time grid. The discrete operator at level n is
///
///   D_tau u^n = omega0 * u^n + sum_{j=1}^{n-1} weight(j) * u^{n-j}
///               + initial_coefficient(n) * u^0,
///
/// where the coefficient on u^0 is level-dependent (it closes the telescoping
/// sum, so a constant history always maps to zero). `alpha = 1` degenerates to
/// the first-order backward difference.
class L1Weights {
public:
    /// L1 weights for fractional order alpha in (0,1).
    static L1Weights fractional(double alpha, double tau, int n_max);

    /// Backward-difference weights, the alpha -> 1 limit of the L1 formula.
    static L1Weights backward_difference(double tau, int n_max);

    /// Dispatch on alpha in (0,1].
    static L1Weights for_order(double alpha, double tau, int n_max);

    double alpha() const { return alpha_; }
    double tau() const { return tau_; }
    int max_level() const { return n_max_; }

    double omega0() const { return conv_[0]; }

    /// Convolution weight at lag j (applied to u^{n-j} for j < n), 0 <= j < n_max.
    double weight(int j) const { return conv_.at(static_cast<std::size_t>(j)); }

    /// Coefficient applied to u^0 at level n, 1 <= n <= n_max.
    double initial_coefficient(int n) const {
        if (n < 1) throw std::out_of_range("L1Weights: level must be >= 1");
        return head_.at(static_cast<std::size_t>(n));
    }

    /// Coefficient on u^{n-j} at level n (lag j), covering both branches.
    double level_coefficient(int n, int j) const {
        return j == n ? initial_coefficient(n) : weight(j);
    }

    /// The lagged part of the operator at level n = prefix.size():
    /// sum_{j=1}^{n-1} weight(j) * u^{n-j} + initial_coefficient(n) * u^0.
    /// `prefix` holds u^0..u^{n-1}. Pairwise-summed.
    double history_term(std::span<const double> prefix) const;

    /// Full operator value at level n = history.size() - 1; history is u^0..u^n.
    double apply(std::span<const double> history) const;

private:
    L1Weights(double alpha, double tau, int n_max,
              std::vector<double> conv, std::vector<double> head)
        : alpha_(alpha), tau_(tau), n_max_(n_max),
          conv_(std::move(conv)), head_(std::move(head)) {}

    double alpha_;
    double tau_;
    int n_max_;
    std::vector<double> conv_;  // conv_[j], j = 0..n_max-1
    std::vector<double> head_;  // head_[n], n = 1..n_max (index 0 unused)
};

/// Free-function forms mirroring the library surface.
L1Weights l1_weights(double alpha, double tau, int n_max);
L1Weights backward_difference_weights(double tau, int n_max = 1);

/// Discrete Caputo derivative at level n = history.size() - 1.
double caputo_apply(const L1Weights& weights, std::span<const double> history);

}  // namespace subdiff
