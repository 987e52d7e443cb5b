#include "subdiff/l1_weights.hpp"

#include <cmath>
#include <stdexcept>

#include "subdiff/detail/summation.hpp"
#include "subdiff/gamma.hpp"

namespace subdiff {

L1Weights L1Weights::fractional(double alpha, double tau, int n_max) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("l1_weights: alpha must lie in (0,1)");
    if (!(tau > 0.0)) throw std::domain_error("l1_weights: tau must be positive");
    if (n_max < 1) throw std::invalid_argument("l1_weights: n_max must be >= 1");

    const double scale = 1.0 / (gamma_fn(2.0 - alpha) * std::pow(tau, alpha));
    const double ex = 1.0 - alpha;

    // b_j = (j+1)^{1-alpha} - j^{1-alpha}
    std::vector<double> b(static_cast<std::size_t>(n_max));
    for (int j = 0; j < n_max; ++j)
        b[static_cast<std::size_t>(j)] =
            std::pow(static_cast<double>(j + 1), ex) - std::pow(static_cast<double>(j), ex);

    std::vector<double> conv(static_cast<std::size_t>(n_max));
    conv[0] = b[0] * scale;
    for (int j = 1; j < n_max; ++j)
        conv[static_cast<std::size_t>(j)] =
            (b[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j - 1)]) * scale;

    std::vector<double> head(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int n = 1; n <= n_max; ++n)
        head[static_cast<std::size_t>(n)] = -b[static_cast<std::size_t>(n - 1)] * scale;

    return L1Weights(alpha, tau, n_max, std::move(conv), std::move(head));
}

L1Weights L1Weights::backward_difference(double tau, int n_max) {
    if (!(tau > 0.0))
        throw std::domain_error("backward_difference_weights: tau must be positive");
    if (n_max < 1)
        throw std::invalid_argument("backward_difference_weights: n_max must be >= 1");

    std::vector<double> conv(static_cast<std::size_t>(n_max), 0.0);
    conv[0] = 1.0 / tau;
    if (n_max >= 2) conv[1] = -1.0 / tau;

    std::vector<double> head(static_cast<std::size_t>(n_max) + 1, 0.0);
    head[1] = -1.0 / tau;

    return L1Weights(1.0, tau, n_max, std::move(conv), std::move(head));
}

L1Weights L1Weights::for_order(double alpha, double tau, int n_max) {
    if (alpha == 1.0) return backward_difference(tau, n_max);
    return fractional(alpha, tau, n_max);
}

double L1Weights::history_term(std::span<const double> prefix) const {
    const int n = static_cast<int>(prefix.size());
    if (n < 1 || n > n_max_)
        throw std::invalid_argument("L1Weights: history length out of range");

    thread_local std::vector<double> terms;
    terms.clear();
    terms.reserve(static_cast<std::size_t>(n));
    for (int j = 1; j <= n - 1; ++j)
        terms.push_back(conv_[static_cast<std::size_t>(j)] *
                        prefix[static_cast<std::size_t>(n - j)]);
    terms.push_back(head_[static_cast<std::size_t>(n)] * prefix[0]);
    return detail::pairwise_sum(terms);
}

double L1Weights::apply(std::span<const double> history) const {
    if (history.size() < 2)
        throw std::invalid_argument("L1Weights: history must cover levels 0..n with n >= 1");
    const std::span<const double> prefix = history.first(history.size() - 1);
    return conv_[0] * history.back() + history_term(prefix);
}

L1Weights l1_weights(double alpha, double tau, int n_max) {
    return L1Weights::fractional(alpha, tau, n_max);
}

L1Weights backward_difference_weights(double tau, int n_max) {
    return L1Weights::backward_difference(tau, n_max);
}

double caputo_apply(const L1Weights& weights, std::span<const double> history) {
    return weights.apply(history);
}

}  // namespace subdiff
