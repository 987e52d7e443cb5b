#pragma once

#include <vector>

#include <Eigen/Core>

#include "subdiff/mlp.hpp"

namespace subdiff {

struct AdamHyper {
    double learning_rate = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Moment accumulators shaped like the parameters, zero at construction.
struct AdamState {
    AdamState(const Mlp& shape, AdamHyper hyper);

    AdamHyper hyper;
    long step = 0;
    std::vector<Matrix> m_weights, v_weights;
    std::vector<Eigen::VectorXd> m_biases, v_biases;
};

/// One bias-corrected Adam update in place. A non-finite gradient skips the
/// step (parameters and step counter untouched) and returns false.
bool adam_step(AdamState& state, Mlp& params, const Gradients& grads);

}  // namespace subdiff
