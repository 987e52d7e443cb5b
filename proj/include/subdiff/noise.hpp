#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "subdiff/grid.hpp"

namespace subdiff {

enum class NoiseKind { none, uniform, gaussian };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view name);

/// Perturbation model: per-node i.i.d. level*U(0,1) or level*N(0,1),
/// reproducible from the seed alone.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::none;
    double level = 0.0;
    std::uint64_t seed = 0;

    bool active() const { return kind != NoiseKind::none && level > 0.0; }
};

/// Sample `base` on the grid and add one independent draw per node
/// (m-major order). level = 0 or kind = none returns the clean samples.
Field inject_noise(const Grid& grid, const std::function<double(double, double)>& base,
                   const NoiseSpec& spec);

}  // namespace subdiff
