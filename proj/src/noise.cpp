#include "subdiff/noise.hpp"

#include <stdexcept>

#include "subdiff/detail/random.hpp"

namespace subdiff {

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::none: return "none";
        case NoiseKind::uniform: return "uniform";
        case NoiseKind::gaussian: return "gaussian";
    }
    throw std::logic_error("to_string(NoiseKind): bad value");
}

NoiseKind parse_noise_kind(std::string_view name) {
    if (name == "none") return NoiseKind::none;
    if (name == "uniform") return NoiseKind::uniform;
    if (name == "gaussian") return NoiseKind::gaussian;
    throw std::invalid_argument("unknown noise kind '" + std::string(name) + "'");
}

Field inject_noise(const Grid& grid, const std::function<double(double, double)>& base,
                   const NoiseSpec& spec) {
    if (spec.level < 0.0) throw std::invalid_argument("inject_noise: negative level");

    Field out = Field::sample(grid, base);
    if (!spec.active()) return out;

    detail::Rng rng(spec.seed);
    for (int m = 0; m <= grid.nx; ++m) {
        for (int n = 0; n <= grid.nt; ++n) {
            const double draw = spec.kind == NoiseKind::uniform ? rng.uniform01()
                                                                : rng.gaussian();
            out(m, n) += spec.level * draw;
        }
    }
    return out;
}

}  // namespace subdiff
