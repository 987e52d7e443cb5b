#pragma once

#include <string>
#include <string_view>

namespace subdiff {

/// The three benchmark problems. ex2 and ex3 share the same clean source and
/// differ only in the noise model paired with them.
enum class ExampleId { ex1, ex2, ex3 };

std::string to_string(ExampleId id);
ExampleId parse_example(std::string_view name);

/// Clean source value f(x, t) on [0,1]^2. Throws std::domain_error outside.
double benchmark_source(ExampleId id, double x, double t);

/// Shared initial profile g(x) = sqrt(x(1-x)).
double benchmark_initial(double x);

}  // namespace subdiff
