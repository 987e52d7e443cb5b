#pragma once

namespace subdiff {

/// Gamma function for positive real arguments (Lanczos approximation,
/// relative error below 1e-13 on [0.5, 10]). Throws std::domain_error
/// for x <= 0.
double gamma_fn(double x);

}  // namespace subdiff
