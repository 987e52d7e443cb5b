#include "subdiff/mlp.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "subdiff/detail/random.hpp"

namespace subdiff {

namespace {

constexpr char kCheckpointMagic[8] = {'S', 'D', 'M', 'L', 'P', '0', '0', '1'};

void check_shapes(const Mlp& mlp) {
    if (mlp.weights.empty() || mlp.weights.size() != mlp.biases.size())
        throw std::invalid_argument("Mlp: empty or mismatched layer lists");
    for (std::size_t k = 0; k < mlp.weights.size(); ++k) {
        if (mlp.biases[k].size() != mlp.weights[k].rows())
            throw std::invalid_argument("Mlp: bias size disagrees with weight rows");
        if (k > 0 && mlp.weights[k].cols() != mlp.weights[k - 1].rows())
            throw std::invalid_argument("Mlp: broken width chain");
    }
}

}  // namespace

std::vector<int> Mlp::widths() const {
    std::vector<int> w;
    w.push_back(input_dim());
    for (const Matrix& m : weights) w.push_back(static_cast<int>(m.rows()));
    return w;
}

bool Mlp::all_finite() const {
    for (const Matrix& w : weights)
        if (!w.allFinite()) return false;
    for (const Eigen::VectorXd& b : biases)
        if (!b.allFinite()) return false;
    return true;
}

std::vector<int> default_widths(int input_dim) {
    std::vector<int> w{input_dim};
    for (int k = 0; k < 9; ++k) w.push_back(100);
    w.push_back(1);
    return w;
}

std::string to_string(InitKind kind) {
    return kind == InitKind::uniform ? "uniform" : "normal";
}

InitKind parse_init_kind(std::string_view name) {
    if (name == "uniform") return InitKind::uniform;
    if (name == "normal") return InitKind::normal;
    throw std::invalid_argument("unknown init kind '" + std::string(name) + "'");
}

Mlp init_params(std::span<const int> widths, std::uint64_t seed, InitKind kind) {
    if (widths.size() < 2)
        throw std::invalid_argument("init_params: need at least input and output widths");
    for (int w : widths)
        if (w < 1) throw std::invalid_argument("init_params: widths must be positive");

    detail::Rng rng(seed);
    Mlp mlp;
    for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
        const int fan_in = widths[k];
        const int fan_out = widths[k + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        const double sigma = bound / std::sqrt(3.0);  // same variance as the uniform law

        Matrix w(fan_out, fan_in);
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j)
                w(i, j) = kind == InitKind::uniform
                              ? bound * (2.0 * rng.uniform01() - 1.0)
                              : sigma * rng.gaussian();

        Eigen::VectorXd b(fan_out);
        for (Eigen::Index i = 0; i < b.size(); ++i)
            b(i) = kind == InitKind::uniform ? bound * (2.0 * rng.uniform01() - 1.0)
                                             : sigma * rng.gaussian();

        mlp.weights.push_back(std::move(w));
        mlp.biases.push_back(std::move(b));
    }
    return mlp;
}

Matrix forward(const Mlp& mlp, const Matrix& batch) {
    return forward_cached(mlp, batch).layers.back();
}

ForwardCache forward_cached(const Mlp& mlp, const Matrix& batch) {
    check_shapes(mlp);
    if (batch.cols() != mlp.input_dim())
        throw std::invalid_argument("forward: batch width disagrees with input dim");

    ForwardCache cache;
    cache.input = batch;
    cache.layers.reserve(mlp.weights.size());

    const Matrix* prev = &cache.input;
    const int last = mlp.layer_count() - 1;
    for (int k = 0; k <= last; ++k) {
        Matrix z = (*prev) * mlp.weights[static_cast<std::size_t>(k)].transpose();
        z.rowwise() += mlp.biases[static_cast<std::size_t>(k)].transpose();
        if (k < last) z = z.cwiseMax(0.0);
        cache.layers.push_back(std::move(z));
        prev = &cache.layers.back();
    }
    return cache;
}

bool Gradients::all_finite() const {
    for (const Matrix& w : weights)
        if (!w.allFinite()) return false;
    for (const Eigen::VectorXd& b : biases)
        if (!b.allFinite()) return false;
    return true;
}

Gradients backward(const Mlp& mlp, const ForwardCache& cache, const Matrix& output_grad) {
    check_shapes(mlp);
    const std::size_t layers = mlp.weights.size();
    if (cache.layers.size() != layers)
        throw std::invalid_argument("backward: cache does not match this network");
    if (output_grad.rows() != cache.input.rows() ||
        output_grad.cols() != mlp.output_dim())
        throw std::invalid_argument("backward: output gradient shape mismatch");
    for (std::size_t k = 0; k < layers; ++k)
        if (cache.layers[k].cols() != mlp.weights[k].rows() ||
            cache.layers[k].rows() != cache.input.rows())
            throw std::invalid_argument("backward: stale cache");

    Gradients grads;
    grads.weights.resize(layers);
    grads.biases.resize(layers);

    Matrix delta = output_grad;  // d(loss)/d(z_k), starting at the linear output
    for (std::size_t k = layers; k-- > 0;) {
        if (k + 1 < layers) {
            // ReLU mask from the stored activation: a > 0 iff z > 0.
            delta = delta.cwiseProduct(
                (cache.layers[k].array() > 0.0).cast<double>().matrix());
        }
        const Matrix& below = k == 0 ? cache.input : cache.layers[k - 1];
        grads.weights[k].noalias() = delta.transpose() * below;
        grads.biases[k] = delta.colwise().sum().transpose();
        if (k > 0) {
            Matrix next = delta * mlp.weights[k];
            delta = std::move(next);
        }
    }
    return grads;
}

void save_checkpoint(const Mlp& mlp, const std::filesystem::path& path) {
    check_shapes(mlp);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path.string());

    out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    const std::vector<int> widths = mlp.widths();
    const std::uint32_t layers = static_cast<std::uint32_t>(mlp.layer_count());
    out.write(reinterpret_cast<const char*>(&layers), sizeof(layers));
    for (int w : widths) {
        const std::uint32_t v = static_cast<std::uint32_t>(w);
        out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
    for (std::size_t k = 0; k < mlp.weights.size(); ++k) {
        const Matrix& w = mlp.weights[k];  // row-major storage
        out.write(reinterpret_cast<const char*>(w.data()),
                  static_cast<std::streamsize>(sizeof(double)) * w.size());
        const Eigen::VectorXd& b = mlp.biases[k];
        out.write(reinterpret_cast<const char*>(b.data()),
                  static_cast<std::streamsize>(sizeof(double)) * b.size());
    }
    if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path.string());
}

Mlp load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path.string());

    char magic[sizeof(kCheckpointMagic)];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
        throw std::runtime_error("load_checkpoint: bad magic in " + path.string());

    std::uint32_t layers = 0;
    in.read(reinterpret_cast<char*>(&layers), sizeof(layers));
    if (!in || layers == 0 || layers > 1024)
        throw std::runtime_error("load_checkpoint: bad layer count");

    std::vector<std::uint32_t> widths(layers + 1);
    in.read(reinterpret_cast<char*>(widths.data()),
            static_cast<std::streamsize>(sizeof(std::uint32_t)) * widths.size());
    if (!in) throw std::runtime_error("load_checkpoint: truncated widths");

    Mlp mlp;
    for (std::uint32_t k = 0; k < layers; ++k) {
        Matrix w(widths[k + 1], widths[k]);
        in.read(reinterpret_cast<char*>(w.data()),
                static_cast<std::streamsize>(sizeof(double)) * w.size());
        Eigen::VectorXd b(widths[k + 1]);
        in.read(reinterpret_cast<char*>(b.data()),
                static_cast<std::streamsize>(sizeof(double)) * b.size());
        if (!in) throw std::runtime_error("load_checkpoint: truncated parameters");
        mlp.weights.push_back(std::move(w));
        mlp.biases.push_back(std::move(b));
    }
    check_shapes(mlp);
    return mlp;
}

}  // namespace subdiff
