#include "subdiff/sources.hpp"

#include <cmath>
#include <stdexcept>

namespace subdiff {

namespace {

// Indicator of [0, 1/2]; the closed interval is the displayed case split.
double chi_left(double x) { return x <= 0.5 ? 1.0 : 0.0; }

}  // namespace

std::string to_string(ExampleId id) {
    switch (id) {
        case ExampleId::ex1: return "ex1";
        case ExampleId::ex2: return "ex2";
        case ExampleId::ex3: return "ex3";
    }
    throw std::logic_error("to_string(ExampleId): bad value");
}

ExampleId parse_example(std::string_view name) {
    if (name == "ex1") return ExampleId::ex1;
    if (name == "ex2") return ExampleId::ex2;
    if (name == "ex3") return ExampleId::ex3;
    throw std::invalid_argument("unknown example '" + std::string(name) + "'");
}

double benchmark_source(ExampleId id, double x, double t) {
    if (!(x >= 0.0 && x <= 1.0 && t >= 0.0 && t <= 1.0))
        throw std::domain_error("benchmark_source: (x,t) must lie in [0,1]^2");
    const double c = chi_left(x);
    switch (id) {
        case ExampleId::ex1:
            return (t + 1.0) * (t + 1.0) * (1.0 + c);
        case ExampleId::ex2:
        case ExampleId::ex3:
            if (x <= 0.5) return std::pow(t + 1.0, 0.25) * (1.0 + c);
            return (t + 1.0) * (t + 1.0) * (1.0 + c);
    }
    throw std::logic_error("benchmark_source: bad example id");
}

double benchmark_initial(double x) { return std::sqrt(x * (1.0 - x)); }

}  // namespace subdiff
