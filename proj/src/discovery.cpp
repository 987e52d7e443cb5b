#include "subdiff/discovery.hpp"

#include <stdexcept>
#include <vector>

#include "subdiff/detail/random.hpp"
#include "subdiff/l1_weights.hpp"

namespace subdiff {

std::string to_string(NetworkType type) {
    return type == NetworkType::type1 ? "type1" : "type2";
}

NetworkType parse_network_type(std::string_view name) {
    if (name == "type1") return NetworkType::type1;
    if (name == "type2") return NetworkType::type2;
    throw std::invalid_argument("unknown network type '" + std::string(name) + "'");
}

DiscoveryTarget discover_source(const Field& u, double alpha, const Grid& grid) {
    if (!(u.grid == grid))
        throw std::invalid_argument("discover_source: field and grid disagree");

    const L1Weights weights = L1Weights::for_order(alpha, grid.tau, grid.nt);
    const double inv_h2 = 1.0 / (grid.hx * grid.hx);

    Field target(grid);
    for (int m = 1; m <= grid.nx - 1; ++m) {
        const double* history = &u.values(m, 0);
        for (int n = 1; n <= grid.nt; ++n) {
            const double caputo =
                weights.apply(std::span<const double>(history, static_cast<std::size_t>(n) + 1));
            const double stencil =
                (u(m + 1, n) - 2.0 * u(m, n) + u(m - 1, n)) * inv_h2;
            target(m, n) = caputo - stencil;
        }
    }

    if (!target.all_finite())
        throw std::runtime_error("discover_source: non-finite target");
    return DiscoveryTarget{grid, alpha, std::move(target)};
}

TrainingSet assemble_training_set(std::span<const DiscoveryTarget> targets,
                                  NetworkType type,
                                  std::optional<std::uint64_t> shuffle_seed) {
    if (targets.empty())
        throw std::invalid_argument("assemble_training_set: no targets");
    if (type == NetworkType::type1 && targets.size() != 1)
        throw std::invalid_argument("assemble_training_set: type1 takes exactly one target");
    for (const DiscoveryTarget& t : targets)
        if (!(t.grid == targets.front().grid))
            throw std::invalid_argument("assemble_training_set: mixed grids");

    const Grid& grid = targets.front().grid;
    const int dim = type == NetworkType::type1 ? 2 : 3;
    const Eigen::Index rows =
        static_cast<Eigen::Index>(targets.size()) * grid.masked_count();

    TrainingSet set;
    set.input_dim = dim;
    set.inputs.resize(rows, dim);
    set.labels.resize(rows);

    Eigen::Index r = 0;
    for (const DiscoveryTarget& t : targets) {
        for_each_masked(grid, [&](int m, int n) {
            set.inputs(r, 0) = grid.x(m);
            set.inputs(r, 1) = grid.t(n);
            if (dim == 3) set.inputs(r, 2) = t.alpha;
            set.labels(r) = t.target(m, n);
            ++r;
        });
    }

    if (shuffle_seed) {
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(rows));
        for (Eigen::Index i = 0; i < rows; ++i) perm[static_cast<std::size_t>(i)] = i;
        detail::Rng rng(*shuffle_seed);
        detail::fisher_yates(std::span<Eigen::Index>(perm), rng);

        Matrix inputs(rows, dim);
        Eigen::VectorXd labels(rows);
        for (Eigen::Index i = 0; i < rows; ++i) {
            inputs.row(i) = set.inputs.row(perm[static_cast<std::size_t>(i)]);
            labels(i) = set.labels(perm[static_cast<std::size_t>(i)]);
        }
        set.inputs = std::move(inputs);
        set.labels = std::move(labels);
    }

    return set;
}

}  // namespace subdiff
