#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "subdiff/adam.hpp"
#include "subdiff/mlp.hpp"

using namespace subdiff;

namespace {

Matrix random_batch(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
    Matrix batch(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            batch(i, j) = 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
    return batch;
}

}  // namespace

TEST_CASE("init: determinism, support, and mean") {
    const std::vector<int> widths{3, 100, 100, 1};
    const Mlp a = init_params(widths, 42);
    const Mlp b = init_params(widths, 42);
    for (std::size_t k = 0; k < a.weights.size(); ++k) {
        CHECK(a.weights[k] == b.weights[k]);
        CHECK(a.biases[k] == b.biases[k]);
    }
    CHECK(init_params(widths, 43).weights[1] != a.weights[1]);

    for (std::size_t k = 0; k < a.weights.size(); ++k) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(a.weights[k].cols()));
        CHECK(a.weights[k].cwiseAbs().maxCoeff() <= bound);
        CHECK(a.biases[k].cwiseAbs().maxCoeff() <= bound);
        const double count = static_cast<double>(a.weights[k].size());
        CHECK(std::abs(a.weights[k].mean()) <= 5.0 / std::sqrt(count) * bound);
    }
}

TEST_CASE("init: normal variant exceeds the uniform bound somewhere") {
    const std::vector<int> widths{2, 100, 100, 1};
    const Mlp normal = init_params(widths, 7, InitKind::normal);
    const double bound = 1.0 / std::sqrt(100.0);
    CHECK(normal.weights[1].cwiseAbs().maxCoeff() > bound);
    const Mlp again = init_params(widths, 7, InitKind::normal);
    CHECK(normal.weights[1] == again.weights[1]);
}

TEST_CASE("forward: zero weights broadcast the output bias") {
    std::vector<int> widths{2, 4, 1};
    Mlp mlp = init_params(widths, 1);
    for (Matrix& w : mlp.weights) w.setZero();
    mlp.biases[0].setZero();
    mlp.biases[1](0) = 3.25;

    std::mt19937_64 gen(5);
    const Matrix out = forward(mlp, random_batch(gen, 6, 2));
    for (Eigen::Index i = 0; i < out.rows(); ++i) CHECK(out(i, 0) == 3.25);
}

TEST_CASE("forward: single layer is the exact affine map") {
    const std::vector<int> widths{3, 2};
    const Mlp mlp = init_params(widths, 9);
    std::mt19937_64 gen(11);
    const Matrix batch = random_batch(gen, 5, 3);
    const Matrix out = forward(mlp, batch);
    const Matrix expected =
        (batch * mlp.weights[0].transpose()).rowwise() + mlp.biases[0].transpose();
    CHECK(out == expected);
}

TEST_CASE("forward: positive homogeneity without biases") {
    std::vector<int> widths{2, 8, 8, 1};
    Mlp mlp = init_params(widths, 3);
    for (Eigen::VectorXd& b : mlp.biases) b.setZero();

    std::mt19937_64 gen(17);
    const Matrix batch = random_batch(gen, 4, 2);
    const Matrix base = forward(mlp, batch);
    const Matrix scaled = forward(mlp, Matrix(2.5 * batch));
    CHECK((scaled - 2.5 * base).cwiseAbs().maxCoeff() <= 1e-13 * base.cwiseAbs().maxCoeff());
}

TEST_CASE("forward: piecewise linearity along a direction") {
    const std::vector<int> widths{2, 10, 10, 1};
    const Mlp mlp = init_params(widths, 23);
    Matrix x(1, 2);
    x << 0.31, 0.62;
    Matrix d(1, 2);
    d << 0.4, -0.3;

    const double eps = 1e-7;
    const double f0 = forward(mlp, x)(0, 0);
    const double f1 = forward(mlp, Matrix(x + eps * d))(0, 0);
    const double f2 = forward(mlp, Matrix(x + 2.0 * eps * d))(0, 0);
    // Three collinear samples inside one linear region.
    CHECK(std::abs(f2 - 2.0 * f1 + f0) <= 1e-12 * std::max(1.0, std::abs(f0)));
}

TEST_CASE("forward: width mismatch throws") {
    const Mlp mlp = init_params(std::vector<int>{2, 4, 1}, 1);
    CHECK_THROWS_AS(forward(mlp, Matrix::Zero(3, 3)), std::invalid_argument);
}

TEST_CASE("backward: zero output gradient zeroes every parameter gradient") {
    const Mlp mlp = init_params(std::vector<int>{2, 6, 6, 1}, 29);
    std::mt19937_64 gen(31);
    const Matrix batch = random_batch(gen, 7, 2);
    const ForwardCache cache = forward_cached(mlp, batch);
    const Gradients grads = backward(mlp, cache, Matrix::Zero(7, 1));
    for (const Matrix& g : grads.weights) CHECK(g.cwiseAbs().maxCoeff() == 0.0);
    for (const Eigen::VectorXd& g : grads.biases) CHECK(g.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("backward: matches central finite differences on small networks") {
    std::mt19937_64 gen(2718);
    for (int trial = 0; trial < 5; ++trial) {
        const std::vector<int> widths{2, 3, 1};
        const Mlp mlp = init_params(widths, 100 + static_cast<std::uint64_t>(trial));
        const Matrix batch = random_batch(gen, 4, 2);
        const Matrix labels = random_batch(gen, 4, 1);

        const ForwardCache cache = forward_cached(mlp, batch);
        const Matrix residual = cache.layers.back() - labels;
        const Matrix out_grad = (2.0 / 4.0) * residual;
        const Gradients analytic = backward(mlp, cache, out_grad);
        const Gradients fd = oracles::fd_gradients(mlp, batch, labels);

        double worst = 0.0;
        for (std::size_t k = 0; k < analytic.weights.size(); ++k) {
            worst = std::max(worst, (analytic.weights[k] - fd.weights[k]).cwiseAbs().maxCoeff() /
                                        std::max(1e-6, fd.weights[k].cwiseAbs().maxCoeff()));
            worst = std::max(worst, (analytic.biases[k] - fd.biases[k]).cwiseAbs().maxCoeff() /
                                        std::max(1e-6, fd.biases[k].cwiseAbs().maxCoeff()));
        }
        CHECK_MESSAGE(worst <= 1e-5, "trial=", trial, " worst=", worst);
    }
}

TEST_CASE("backward: single linear layer matches the least-squares gradient") {
    const std::vector<int> widths{3, 1};
    const Mlp mlp = init_params(widths, 77);
    std::mt19937_64 gen(78);
    const Matrix batch = random_batch(gen, 10, 3);
    const Matrix labels = random_batch(gen, 10, 1);

    const ForwardCache cache = forward_cached(mlp, batch);
    const Matrix residual = cache.layers.back() - labels;
    const Matrix out_grad = (2.0 / 10.0) * residual;
    const Gradients grads = backward(mlp, cache, out_grad);

    const Matrix closed_form = (2.0 / 10.0) * residual.transpose() * batch;
    CHECK((grads.weights[0] - closed_form).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(std::abs(grads.biases[0](0) - (2.0 / 10.0) * residual.sum()) <= 1e-14);
}

TEST_CASE("backward: stale or mismatched cache is rejected") {
    const Mlp mlp = init_params(std::vector<int>{2, 4, 1}, 5);
    const Mlp other = init_params(std::vector<int>{2, 5, 1}, 5);
    std::mt19937_64 gen(6);
    const Matrix batch = random_batch(gen, 3, 2);
    const ForwardCache cache = forward_cached(mlp, batch);

    CHECK_THROWS_AS(backward(other, cache, Matrix::Zero(3, 1)), std::invalid_argument);
    CHECK_THROWS_AS(backward(mlp, cache, Matrix::Zero(2, 1)), std::invalid_argument);
}

TEST_CASE("adam: bias-corrected first step") {
    std::vector<int> widths{1, 1};
    Mlp mlp = init_params(widths, 0);
    const double w0 = mlp.weights[0](0, 0);

    AdamHyper hyper;  // r = 1e-2, eps = 1e-8
    AdamState state(mlp, hyper);
    Gradients grads;
    grads.weights.push_back(Matrix::Ones(1, 1));
    grads.biases.push_back(Eigen::VectorXd::Zero(1));

    CHECK(adam_step(state, mlp, grads));
    const double expected = -hyper.learning_rate * 1.0 / (1.0 + hyper.epsilon);
    CHECK(mlp.weights[0](0, 0) - w0 == doctest::Approx(expected).epsilon(1e-12));
    CHECK(state.step == 1);
}

TEST_CASE("adam: zero gradients leave parameters unchanged") {
    Mlp mlp = init_params(std::vector<int>{2, 3, 1}, 13);
    const Mlp before = mlp;
    AdamState state(mlp, {});
    Gradients zeros;
    for (const Matrix& w : mlp.weights) zeros.weights.push_back(Matrix::Zero(w.rows(), w.cols()));
    for (const Eigen::VectorXd& b : mlp.biases)
        zeros.biases.push_back(Eigen::VectorXd::Zero(b.size()));

    for (int i = 0; i < 50; ++i) CHECK(adam_step(state, mlp, zeros));
    for (std::size_t k = 0; k < mlp.weights.size(); ++k)
        CHECK(mlp.weights[k] == before.weights[k]);
}

TEST_CASE("adam: constant gradient drives the step size to the learning rate") {
    std::vector<int> widths{1, 1};
    Mlp mlp = init_params(widths, 0);
    AdamState state(mlp, {});
    Gradients grads;
    grads.weights.push_back(Matrix::Constant(1, 1, 0.37));
    grads.biases.push_back(Eigen::VectorXd::Zero(1));

    double prev = mlp.weights[0](0, 0);
    double delta = 0.0;
    for (int i = 0; i < 500; ++i) {
        adam_step(state, mlp, grads);
        delta = mlp.weights[0](0, 0) - prev;
        prev = mlp.weights[0](0, 0);
    }
    CHECK(std::abs(delta) == doctest::Approx(state.hyper.learning_rate).epsilon(1e-3));
}

TEST_CASE("adam: non-finite gradient skips the step") {
    Mlp mlp = init_params(std::vector<int>{2, 2, 1}, 3);
    const Mlp before = mlp;
    AdamState state(mlp, {});
    Gradients grads;
    for (const Matrix& w : mlp.weights) grads.weights.push_back(Matrix::Zero(w.rows(), w.cols()));
    for (const Eigen::VectorXd& b : mlp.biases)
        grads.biases.push_back(Eigen::VectorXd::Zero(b.size()));
    grads.weights[0](0, 0) = std::numeric_limits<double>::quiet_NaN();

    CHECK_FALSE(adam_step(state, mlp, grads));
    CHECK(state.step == 0);
    for (std::size_t k = 0; k < mlp.weights.size(); ++k)
        CHECK(mlp.weights[k] == before.weights[k]);
}

TEST_CASE("checkpoint round-trips bit-exactly") {
    const Mlp mlp = init_params(std::vector<int>{3, 7, 5, 1}, 321);
    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / "subdiff_ckpt_test.bin";
    save_checkpoint(mlp, path);
    const Mlp loaded = load_checkpoint(path);

    CHECK(loaded.widths() == mlp.widths());
    for (std::size_t k = 0; k < mlp.weights.size(); ++k) {
        CHECK(loaded.weights[k] == mlp.weights[k]);
        CHECK(loaded.biases[k] == mlp.biases[k]);
    }

    // Re-saving produces identical bytes.
    const std::filesystem::path again =
        std::filesystem::temp_directory_path() / "subdiff_ckpt_test2.bin";
    save_checkpoint(loaded, again);
    std::ifstream f1(path, std::ios::binary), f2(again, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)),
                         std::istreambuf_iterator<char>());
    const std::string b2((std::istreambuf_iterator<char>(f2)),
                         std::istreambuf_iterator<char>());
    CHECK(b1 == b2);

    std::filesystem::remove(path);
    std::filesystem::remove(again);
}

TEST_CASE("checkpoint: corrupt file is rejected") {
    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / "subdiff_ckpt_bad.bin";
    {
        std::ofstream out(path, std::ios::binary);
        out << "not a checkpoint";
    }
    CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);
    std::filesystem::remove(path);
}

TEST_CASE("init validation") {
    CHECK_THROWS_AS(init_params(std::vector<int>{3}, 0), std::invalid_argument);
    CHECK_THROWS_AS(init_params(std::vector<int>{3, 0, 1}, 0), std::invalid_argument);
}
