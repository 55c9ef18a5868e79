#include "pumpout/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace pumpout {

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate, const Network& net) {
    OptimizerState s;
    s.kind = kind;
    s.learning_rate = learning_rate;
    if (kind == OptimizerKind::Adam) {
        s.first_moment = make_gradient_set(net);
        s.second_moment = make_gradient_set(net);
    }
    return s;
}

void sgd_step(Network& net, const GradientSet& grad, double learning_rate) {
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        auto& layer = net.layers[l];
        const auto& g = grad.layers[l];
        for (std::size_t i = 0; i < layer.weights.data.size(); ++i) {
            layer.weights.data[i] -= learning_rate * g.weights.data[i];
        }
        for (std::size_t i = 0; i < layer.bias.size(); ++i) {
            layer.bias[i] -= learning_rate * g.bias[i];
        }
    }
}

namespace {

inline void adam_update(double& w, double g, double& m, double& v, double lr, double b1,
                        double b2, double eps, double bc1, double bc2) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g * g;
    double m_hat = m / bc1;
    double v_hat = v / bc2;
    w -= lr * m_hat / (std::sqrt(v_hat) + eps);
}

}  // namespace

void adam_step(Network& net, const GradientSet& grad, OptimizerState& state) {
    if (state.first_moment.layers.size() != net.layers.size()) {
        throw std::invalid_argument("adam_step: state was built for a different network");
    }
    state.step_count += 1;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        auto& layer = net.layers[l];
        const auto& g = grad.layers[l];
        auto& m = state.first_moment.layers[l];
        auto& v = state.second_moment.layers[l];
        for (std::size_t i = 0; i < layer.weights.data.size(); ++i) {
            adam_update(layer.weights.data[i], g.weights.data[i], m.weights.data[i],
                        v.weights.data[i], state.learning_rate, state.beta1, state.beta2,
                        state.epsilon, bc1, bc2);
        }
        for (std::size_t i = 0; i < layer.bias.size(); ++i) {
            adam_update(layer.bias[i], g.bias[i], m.bias[i], v.bias[i], state.learning_rate,
                        state.beta1, state.beta2, state.epsilon, bc1, bc2);
        }
    }
}

void optimizer_step(Network& net, const GradientSet& grad, OptimizerState& state) {
    if (state.kind == OptimizerKind::Sgd) {
        sgd_step(net, grad, state.learning_rate);
        state.step_count += 1;
    } else {
        adam_step(net, grad, state);
    }
}

}  // namespace pumpout
