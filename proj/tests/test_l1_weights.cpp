#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "subdiff/gamma.hpp"
#include "subdiff/l1_weights.hpp"

using subdiff::backward_difference_weights;
using subdiff::caputo_apply;
using subdiff::l1_weights;
using subdiff::L1Weights;

namespace {

// Level coefficients assembled from the defining quadrature
//   integral_{t_k}^{t_{k+1}} (t_n - s)^{-alpha} ds
// evaluated numerically (tanh-sinh), with std::tgamma for the kernel scale.
// Only the lag distance matters on a uniform grid.
struct QuadratureOracle {
    QuadratureOracle(double alpha, double tau, int n_max) {
        const double scale = 1.0 / (std::tgamma(1.0 - alpha) * tau);
        std::vector<double> j_int(static_cast<std::size_t>(n_max) + 2);
        for (int d = 1; d <= n_max + 1; ++d)
            j_int[static_cast<std::size_t>(d)] = oracles::tanh_sinh(
                [alpha](double y) { return std::pow(y, -alpha); }, (d - 1) * tau, d * tau);

        omega0 = scale * j_int[1];
        lag.assign(static_cast<std::size_t>(n_max), 0.0);
        for (int j = 1; j < n_max; ++j)
            lag[static_cast<std::size_t>(j)] =
                scale * (j_int[static_cast<std::size_t>(j + 1)] -
                         j_int[static_cast<std::size_t>(j)]);
        head.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
        for (int n = 1; n <= n_max; ++n)
            head[static_cast<std::size_t>(n)] = -scale * j_int[static_cast<std::size_t>(n)];
    }

    double omega0;
    std::vector<double> lag;   // coefficient at lag j for 1 <= j <= n_max-1
    std::vector<double> head;  // coefficient on u^0 at level n
};

}  // namespace

TEST_CASE("closed form at n_max = 1") {
    const L1Weights w = l1_weights(0.5, 1.0, 1);
    const double two_over_sqrt_pi = 1.1283791670955125739;
    CHECK(w.omega0() == doctest::Approx(two_over_sqrt_pi).epsilon(1e-13));
    CHECK(w.initial_coefficient(1) == doctest::Approx(-two_over_sqrt_pi).epsilon(1e-13));
}

TEST_CASE("telescoping: level coefficients sum to zero") {
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const L1Weights w = l1_weights(alpha, 0.01, 100);
        for (int n = 1; n <= 100; ++n) {
            double sum = w.omega0() + w.initial_coefficient(n);
            for (int j = 1; j <= n - 1; ++j) sum += w.weight(j);
            CHECK_MESSAGE(std::abs(sum) <= 1e-12 * w.omega0(), "alpha=", alpha, " n=", n);
        }
    }
}

TEST_CASE("sign pattern and magnitude monotonicity") {
    for (double alpha : {0.1, 0.5, 0.9}) {
        const L1Weights w = l1_weights(alpha, 0.02, 60);
        CHECK(w.omega0() > 0.0);
        for (int j = 1; j < 60; ++j) {
            CHECK(w.weight(j) < 0.0);
            if (j >= 2) CHECK(std::abs(w.weight(j)) <= std::abs(w.weight(j - 1)));
        }
        for (int n = 1; n <= 60; ++n) CHECK(w.initial_coefficient(n) <= 0.0);
    }
}

TEST_CASE("quadrature oracle match, tau = 1/100, n_max = 100") {
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const int n_max = 100;
        const L1Weights w = l1_weights(alpha, 0.01, n_max);
        const QuadratureOracle oracle(alpha, 0.01, n_max);
        const double scale = w.omega0();

        CHECK(std::abs(w.omega0() - oracle.omega0) <= 1e-10 * scale);
        for (int j = 1; j < n_max; ++j)
            CHECK_MESSAGE(std::abs(w.weight(j) - oracle.lag[static_cast<std::size_t>(j)]) <=
                              1e-10 * scale,
                          "alpha=", alpha, " j=", j);
        for (int n = 1; n <= n_max; ++n)
            CHECK_MESSAGE(
                std::abs(w.initial_coefficient(n) -
                         oracle.head[static_cast<std::size_t>(n)]) <= 1e-10 * scale,
                "alpha=", alpha, " n=", n);
    }
}

TEST_CASE("backward difference weights") {
    const L1Weights w = backward_difference_weights(0.01, 5);
    CHECK(w.alpha() == 1.0);
    CHECK(w.omega0() == doctest::Approx(100.0));
    CHECK(w.weight(1) == doctest::Approx(-100.0));
    CHECK(w.weight(2) == 0.0);
    CHECK(w.initial_coefficient(1) == doctest::Approx(-100.0));
    CHECK(w.initial_coefficient(4) == 0.0);

    // Constant history: discrete derivative zero at every level.
    const std::vector<double> constant(6, 3.7);
    for (int n = 1; n <= 5; ++n)
        CHECK(std::abs(caputo_apply(
                  w, std::span<const double>(constant.data(),
                                             static_cast<std::size_t>(n) + 1))) <= 1e-12);

    // Linear history u^k = t_k: exactly 1 at every level.
    std::vector<double> linear(6);
    for (int k = 0; k <= 5; ++k) linear[static_cast<std::size_t>(k)] = k * 0.01;
    for (int n = 1; n <= 5; ++n)
        CHECK(caputo_apply(w, std::span<const double>(
                                  linear.data(), static_cast<std::size_t>(n) + 1)) ==
              doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("caputo_apply on constant history") {
    const L1Weights w = l1_weights(0.3, 0.01, 100);
    const std::vector<double> history(101, 7.3);
    const double value = caputo_apply(w, history);
    CHECK(std::abs(value) <= 1e-12 * std::abs(w.omega0() * 7.3));
}

TEST_CASE("caputo_apply exact on linear input at every grid time") {
    const double alpha = 0.5;
    const double tau = 0.01;
    const L1Weights w = l1_weights(alpha, tau, 100);
    std::vector<double> history(101);
    for (int k = 0; k <= 100; ++k) history[static_cast<std::size_t>(k)] = k * tau;

    for (int n = 1; n <= 100; ++n) {
        const double got = caputo_apply(
            w, std::span<const double>(history.data(), static_cast<std::size_t>(n) + 1));
        const double t = n * tau;
        const double expected = std::pow(t, 1.0 - alpha) / subdiff::gamma_fn(2.0 - alpha);
        CHECK_MESSAGE(std::abs(got - expected) <= 1e-10 * expected, "n=", n);
    }
    // Spot value: t = 1 gives 2/sqrt(pi).
    CHECK(caputo_apply(w, history) == doctest::Approx(1.1283791670955126).epsilon(1e-12));
}

TEST_CASE("quadratic input converges at rate tau^{2-alpha}") {
    const double alpha = 0.5;
    const auto error_at_final_time = [&](int n_levels) {
        const double tau = 1.0 / n_levels;
        const L1Weights w = l1_weights(alpha, tau, n_levels);
        std::vector<double> history(static_cast<std::size_t>(n_levels) + 1);
        for (int k = 0; k <= n_levels; ++k) {
            const double t = k * tau;
            history[static_cast<std::size_t>(k)] = t * t;
        }
        const double got = caputo_apply(w, history);
        const double expected = 2.0 / subdiff::gamma_fn(3.0 - alpha);  // t = 1
        return std::abs(got - expected);
    };

    double prev = error_at_final_time(50);
    for (int n : {100, 200, 400}) {
        const double cur = error_at_final_time(n);
        const double rate = std::log2(prev / cur);
        CHECK_MESSAGE(std::abs(rate - 1.5) <= 0.2, "n=", n, " rate=", rate);
        prev = cur;
    }
}

TEST_CASE("domain and length errors") {
    CHECK_THROWS_AS(l1_weights(0.0, 0.01, 10), std::domain_error);
    CHECK_THROWS_AS(l1_weights(1.0, 0.01, 10), std::domain_error);
    CHECK_THROWS_AS(l1_weights(-0.2, 0.01, 10), std::domain_error);
    CHECK_THROWS_AS(l1_weights(0.5, 0.0, 10), std::domain_error);
    CHECK_THROWS_AS(backward_difference_weights(-1.0, 3), std::domain_error);

    const L1Weights w = l1_weights(0.5, 0.01, 10);
    const std::vector<double> too_short(1, 1.0);
    CHECK_THROWS_AS(caputo_apply(w, too_short), std::invalid_argument);
    const std::vector<double> too_long(12, 1.0);
    CHECK_THROWS_AS(caputo_apply(w, too_long), std::invalid_argument);
}
