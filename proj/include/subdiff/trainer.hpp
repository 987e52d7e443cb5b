#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subdiff/adam.hpp"
#include "subdiff/discovery.hpp"
#include "subdiff/grid.hpp"
#include "subdiff/mlp.hpp"

namespace subdiff {

struct TrainConfig {
    int epochs = 1;
    int batch_size = 256;
    double learning_rate = 1e-2;
    std::uint64_t seed = 0;
    NetworkType network_type = NetworkType::type1;
};

struct TrainReport {
    std::vector<double> epoch_loss;      // per-sample mean squared error per epoch
    double final_relative_error = 0.0;   // filled in by the experiment layer
    double final_residual_loss = 0.0;    // grid-global functional, likewise
    double wall_seconds = 0.0;           // console-only, never serialized
    int skipped_steps = 0;
    TrainConfig config;
};

/// The grid-global squared-error functional: sum of squared residuals divided
/// by N_t*N_x - 1, independent of how the nodes are batched.
double residual_loss(std::span<const double> predictions, std::span<const double> labels,
                     long normalizer);

/// Frobenius-norm ratio over the masked nodes.
double relative_error(const Field& predicted, const Field& truth);

/// Mini-batch training: per epoch, one seeded reshuffle, consecutive batches
/// (last one partial), forward/backward/Adam per batch. Deterministic in the
/// seed. Throws on a non-finite epoch loss.
std::pair<Mlp, TrainReport> train(const TrainConfig& config, const TrainingSet& set,
                                  Mlp mlp);

/// Sample the surrogate at every masked node; unmasked entries stay zero.
/// Type 2 appends `alpha` as the third input coordinate.
Field evaluate_surrogate(const Mlp& mlp, const Grid& grid, NetworkType type, double alpha);

}  // namespace subdiff
