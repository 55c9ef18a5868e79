#pragma once

#include "pumpout/tensor_nn.hpp"

namespace pumpout {

enum class OptimizerKind { Sgd, Adam };

/// Owned by a single training run. For Adam, first/second moments are
/// shape-isomorphic to the network being trained.
struct OptimizerState {
    OptimizerKind kind = OptimizerKind::Adam;
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    GradientSet first_moment;
    GradientSet second_moment;
    long step_count = 0;
};

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate, const Network& net);

/// w <- w - lr * g, elementwise.
void sgd_step(Network& net, const GradientSet& grad, double learning_rate);

/// Standard Adam with bias correction; increments the step counter.
void adam_step(Network& net, const GradientSet& grad, OptimizerState& state);

/// Dispatch on state.kind.
void optimizer_step(Network& net, const GradientSet& grad, OptimizerState& state);

}  // namespace pumpout
