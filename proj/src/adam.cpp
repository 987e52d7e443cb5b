#include "subdiff/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace subdiff {

AdamState::AdamState(const Mlp& shape, AdamHyper hyper_) : hyper(hyper_) {
    for (const Matrix& w : shape.weights) {
        m_weights.push_back(Matrix::Zero(w.rows(), w.cols()));
        v_weights.push_back(Matrix::Zero(w.rows(), w.cols()));
    }
    for (const Eigen::VectorXd& b : shape.biases) {
        m_biases.push_back(Eigen::VectorXd::Zero(b.size()));
        v_biases.push_back(Eigen::VectorXd::Zero(b.size()));
    }
}

bool adam_step(AdamState& state, Mlp& params, const Gradients& grads) {
    const std::size_t layers = params.weights.size();
    if (grads.weights.size() != layers || grads.biases.size() != layers ||
        state.m_weights.size() != layers)
        throw std::invalid_argument("adam_step: layer count mismatch");
    for (std::size_t k = 0; k < layers; ++k) {
        if (grads.weights[k].rows() != params.weights[k].rows() ||
            grads.weights[k].cols() != params.weights[k].cols() ||
            grads.biases[k].size() != params.biases[k].size())
            throw std::invalid_argument("adam_step: gradient shape mismatch");
    }

    if (!grads.all_finite()) return false;

    const AdamHyper& h = state.hyper;
    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(h.beta1, t);
    const double correction2 = 1.0 - std::pow(h.beta2, t);

    const auto update = [&](auto& m, auto& v, auto& p, const auto& g) {
        m = h.beta1 * m + (1.0 - h.beta1) * g;
        v = h.beta2 * v + (1.0 - h.beta2) * g.cwiseProduct(g);
        const auto m_hat = m.array() / correction1;
        const auto v_hat = v.array() / correction2;
        p.array() -= h.learning_rate * m_hat / (v_hat.sqrt() + h.epsilon);
    };

    for (std::size_t k = 0; k < layers; ++k) {
        update(state.m_weights[k], state.v_weights[k], params.weights[k], grads.weights[k]);
        update(state.m_biases[k], state.v_biases[k], params.biases[k], grads.biases[k]);
    }
    return true;
}

}  // namespace subdiff
