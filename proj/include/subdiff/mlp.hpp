#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "subdiff/grid.hpp"

namespace subdiff {

/// Fully connected network: M affine layers with ReLU between them and a
/// linear output layer. weights[k] has shape p_{k+1} x p_k.
struct Mlp {
    std::vector<Matrix> weights;
    std::vector<Eigen::VectorXd> biases;

    int layer_count() const { return static_cast<int>(weights.size()); }
    int input_dim() const { return static_cast<int>(weights.front().cols()); }
    int output_dim() const { return static_cast<int>(weights.back().rows()); }
    std::vector<int> widths() const;
    bool all_finite() const;
};

/// Benchmark architecture: 10 affine layers, hidden width 100.
std::vector<int> default_widths(int input_dim);

enum class InitKind { uniform, normal };

std::string to_string(InitKind kind);
InitKind parse_init_kind(std::string_view name);

/// Fan-in scaled initialization: uniform on +-1/sqrt(p_{k}) (default), or a
/// normal law with the matching variance 1/(3 p_k). Deterministic in the seed.
Mlp init_params(std::span<const int> widths, std::uint64_t seed,
                InitKind kind = InitKind::uniform);

/// Activations recorded during a forward pass; layers[k] holds the output of
/// affine layer k+1 after its ReLU (the last entry is the linear output).
struct ForwardCache {
    Matrix input;
    std::vector<Matrix> layers;
};

/// Batch forward pass; rows are samples.
Matrix forward(const Mlp& mlp, const Matrix& batch);
ForwardCache forward_cached(const Mlp& mlp, const Matrix& batch);

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Eigen::VectorXd> biases;

    bool all_finite() const;
};

/// Reverse-mode gradients of sum(loss) given d(loss)/d(output). The ReLU
/// subgradient at zero is taken as zero.
Gradients backward(const Mlp& mlp, const ForwardCache& cache, const Matrix& output_grad);

/// Binary checkpoint (versioned magic, widths, then row-major weight and bias
/// arrays per layer; little-endian doubles). Round-trips bit-exactly.
void save_checkpoint(const Mlp& mlp, const std::filesystem::path& path);
Mlp load_checkpoint(const std::filesystem::path& path);

}  // namespace subdiff
