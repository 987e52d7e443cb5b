#include "subdiff/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "subdiff/detail/random.hpp"
#include "subdiff/detail/summation.hpp"

namespace subdiff {

double residual_loss(std::span<const double> predictions, std::span<const double> labels,
                     long normalizer) {
    if (predictions.empty()) throw std::invalid_argument("residual_loss: empty batch");
    if (predictions.size() != labels.size())
        throw std::invalid_argument("residual_loss: length mismatch");
    if (normalizer <= 0) throw std::invalid_argument("residual_loss: normalizer must be > 0");

    thread_local std::vector<double> terms;
    terms.clear();
    terms.reserve(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double r = predictions[i] - labels[i];
        terms.push_back(r * r);
    }
    return detail::pairwise_sum(terms) / static_cast<double>(normalizer);
}

double relative_error(const Field& predicted, const Field& truth) {
    if (!(predicted.grid == truth.grid))
        throw std::invalid_argument("relative_error: grids disagree");

    double num = 0.0;
    double den = 0.0;
    for_each_masked(truth.grid, [&](int m, int n) {
        const double d = predicted(m, n) - truth(m, n);
        num += d * d;
        den += truth(m, n) * truth(m, n);
    });
    if (den == 0.0)
        throw std::invalid_argument("relative_error: truth vanishes on the mask");
    return std::sqrt(num) / std::sqrt(den);
}

std::pair<Mlp, TrainReport> train(const TrainConfig& config, const TrainingSet& set,
                                  Mlp mlp) {
    if (config.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (config.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
    if (!(config.learning_rate >= 0.0))
        throw std::invalid_argument("train: learning rate must be non-negative");
    if (set.size() == 0) throw std::invalid_argument("train: empty training set");
    const int expected_dim = config.network_type == NetworkType::type1 ? 2 : 3;
    if (set.input_dim != expected_dim || mlp.input_dim() != expected_dim)
        throw std::invalid_argument("train: input width disagrees with network type");
    if (mlp.output_dim() != 1) throw std::invalid_argument("train: output width must be 1");

    const auto start = std::chrono::steady_clock::now();

    TrainReport report;
    report.config = config;
    report.epoch_loss.reserve(static_cast<std::size_t>(config.epochs));

    AdamHyper hyper;
    hyper.learning_rate = config.learning_rate;
    AdamState state(mlp, hyper);

    const Eigen::Index count = set.size();
    const Eigen::Index batch = std::min<Eigen::Index>(config.batch_size, count);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    detail::Rng shuffle_rng(config.seed);

    Matrix inputs(batch, set.input_dim);
    Matrix labels(batch, 1);
    std::vector<double> squares(static_cast<std::size_t>(count));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        detail::fisher_yates(std::span<Eigen::Index>(order), shuffle_rng);

        for (Eigen::Index begin = 0; begin < count; begin += batch) {
            const Eigen::Index size = std::min(batch, count - begin);
            for (Eigen::Index i = 0; i < size; ++i) {
                const Eigen::Index row = order[static_cast<std::size_t>(begin + i)];
                inputs.row(i) = set.inputs.row(row);
                labels(i, 0) = set.labels(row);
            }
            const auto in_block = inputs.topRows(size);
            const auto label_block = labels.topRows(size);

            ForwardCache cache = forward_cached(mlp, in_block);
            const Matrix residual = cache.layers.back() - label_block;
            for (Eigen::Index i = 0; i < size; ++i) {
                const Eigen::Index row = order[static_cast<std::size_t>(begin + i)];
                squares[static_cast<std::size_t>(row)] = residual(i, 0) * residual(i, 0);
            }

            const Matrix output_grad = (2.0 / static_cast<double>(size)) * residual;
            const Gradients grads = backward(mlp, cache, output_grad);
            if (!adam_step(state, mlp, grads)) report.skipped_steps += 1;
        }

        // Per-sample mean in dataset order: invariant to how the shuffle
        // partitioned the batches.
        const double epoch_loss =
            detail::pairwise_sum(squares) / static_cast<double>(count);
        if (!std::isfinite(epoch_loss))
            throw std::runtime_error("train: non-finite loss at epoch " +
                                     std::to_string(epoch + 1) + " of " +
                                     std::to_string(config.epochs));
        report.epoch_loss.push_back(epoch_loss);
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::move(mlp), std::move(report)};
}

Field evaluate_surrogate(const Mlp& mlp, const Grid& grid, NetworkType type, double alpha) {
    const int dim = type == NetworkType::type1 ? 2 : 3;
    if (mlp.input_dim() != dim)
        throw std::invalid_argument("evaluate_surrogate: network width disagrees with type");

    Matrix inputs(grid.masked_count(), dim);
    Eigen::Index r = 0;
    for_each_masked(grid, [&](int m, int n) {
        inputs(r, 0) = grid.x(m);
        inputs(r, 1) = grid.t(n);
        if (dim == 3) inputs(r, 2) = alpha;
        ++r;
    });

    const Matrix out = forward(mlp, inputs);

    Field field(grid);
    r = 0;
    for_each_masked(grid, [&](int m, int n) { field(m, n) = out(r++, 0); });
    if (!field.all_finite())
        throw std::runtime_error("evaluate_surrogate: non-finite prediction");
    return field;
}

}  // namespace subdiff
