#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "subdiff/gamma.hpp"

using subdiff::gamma_fn;

namespace {

// 20-digit references computed with arbitrary-precision arithmetic.
constexpr struct {
    double x;
    double value;
} kReference[] = {
    {0.5, 1.7724538509055160273},
    {0.7, 1.2980553326475577857},
    {0.9, 1.0686287021193193549},
    {1.1, 0.95135076986687318363},
    {1.3, 0.89747069630627718849},
    {1.5, 0.88622692545275801365},
    {1.7, 0.90863873285329044998},
    {1.9, 0.96176583190738741941},
    {2.3, 1.166711905198160345},
    {2.7, 1.544685845850593765},
    {3.5, 3.3233509704478425512},
    {4.2, 7.7566895357931776387},
    {5.0, 24.0},
    {6.3, 201.81327518474750366},
    {7.7, 2769.8303623273136603},
    {8.9, 32569.404925854989526},
    {10.0, 362880.0},
};

}  // namespace

TEST_CASE("integer identities") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(3.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(gamma_fn(1.5) == doctest::Approx(0.8862269254527580).epsilon(1e-14));
}

TEST_CASE("reference values on [0.5, 10] to 1e-12 relative") {
    for (const auto& ref : kReference) {
        const double got = gamma_fn(ref.x);
        CHECK_MESSAGE(std::abs(got - ref.value) <= 1e-12 * ref.value,
                      "x=", ref.x, " got=", got, " want=", ref.value);
    }
}

TEST_CASE("reflection branch below 0.5") {
    CHECK(gamma_fn(0.1) == doctest::Approx(9.5135076986687318363).epsilon(1e-12));
    CHECK(gamma_fn(0.3) == doctest::Approx(2.9915689876875906283).epsilon(1e-12));
}

TEST_CASE("recurrence property gamma(x+1) = x gamma(x)") {
    for (double x = 0.5; x <= 9.0; x += 0.173) {
        CHECK(gamma_fn(x + 1.0) ==
              doctest::Approx(x * gamma_fn(x)).epsilon(1e-12));
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-1.3), std::domain_error);
}
