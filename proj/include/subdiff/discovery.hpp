#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "subdiff/grid.hpp"

namespace subdiff {

/// Surrogate input layout: (x, t) with the fractional order fixed, or
/// (x, t, alpha) with the order as a third coordinate.
enum class NetworkType { type1, type2 };

std::string to_string(NetworkType type);
NetworkType parse_network_type(std::string_view name);

/// The discrete source recovered from solution data. Values are defined on
/// the mask (interior m, n >= 1); the unmasked entries of `target` are zero.
struct DiscoveryTarget {
    Grid grid;
    double alpha;
    Field target;
};

/// Apply the discrete operator to solution samples: at every masked node,
/// the Caputo convolution over the node's history minus the second-difference
/// stencil. This is the exact algebraic inverse of the forward scheme on the
/// same grid.
DiscoveryTarget discover_source(const Field& u, double alpha, const Grid& grid);

/// Flattened regression data: one row per masked node (times one copy per
/// alpha for type 2), labels equal to the recovered source values.
struct TrainingSet {
    int input_dim = 0;          // 2 or 3
    Matrix inputs;              // rows x input_dim
    Eigen::VectorXd labels;

    Eigen::Index size() const { return labels.size(); }
};

/// Assemble the training set in m-major node order (alpha-major for type 2),
/// optionally applying one seeded shuffle.
TrainingSet assemble_training_set(std::span<const DiscoveryTarget> targets,
                                  NetworkType type,
                                  std::optional<std::uint64_t> shuffle_seed = {});

}  // namespace subdiff
