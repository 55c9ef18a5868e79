#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace pumpout {

enum class Activation { Softsign, LeakyRelu, Identity };

double apply_activation(Activation a, double x);
double activation_derivative(Activation a, double x);  // at pre-activation x

/// Row-major dense matrix of doubles.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
    double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
};

struct DenseLayer {
    Mat weights;               // out x in
    std::vector<double> bias;  // out
    Activation activation = Activation::Identity;
};

/// Feedforward net. The final layer has output size class_count and Identity
/// activation, so forward() yields raw logits.
struct Network {
    std::vector<DenseLayer> layers;
    int class_count = 0;

    int input_size() const { return layers.empty() ? 0 : layers.front().weights.cols; }
    int parameter_count() const;
};

/// input -> hidden[0] -> ... -> class_count. Hidden layers use hidden_act,
/// the output layer Identity. Weights drawn uniformly from
/// [-1/sqrt(fan_in), +1/sqrt(fan_in)] in layer order, row-major within a
/// layer; biases start at zero.
Network make_mlp(int input_size, const std::vector<int>& hidden, int class_count,
                 std::uint64_t seed, Activation hidden_act = Activation::Softsign);

/// Per-parameter values shaped exactly like a Network (gradients, Adam
/// moments).
struct GradientSet {
    struct LayerSlot {
        Mat weights;
        std::vector<double> bias;
    };
    std::vector<LayerSlot> layers;

    void fill(double v);
    void scale(double s);
    double max_abs() const;
};

GradientSet make_gradient_set(const Network& net);  // zero-filled

/// entries[j] = -log softmax_j(logits); every entry >= 0 and
/// exp(-entries) sums to one.
struct LossVector {
    std::vector<double> entries;
};

std::vector<double> forward(const Network& net, const std::vector<double>& x);

/// Computed with a max shift, so arbitrarily large logits stay finite.
LossVector loss_vector(const std::vector<double>& logits);

/// Softmax probabilities, bit-identical to exp(-loss_vector(logits)).
std::vector<double> softmax(const std::vector<double>& logits);

/// Cross-entropy of the observed label: loss_vector(forward(net, x))[label].
double sample_loss(const Network& net, const std::vector<double>& x, int label);

/// Per-layer activations kept around for the backward pass.
struct ForwardCache {
    std::vector<std::vector<double>> pre;   // z_l = W_l a_{l-1} + b_l
    std::vector<std::vector<double>> post;  // a_l = act(z_l); post.back() = logits
};

std::vector<double> forward_cached(const Network& net, const std::vector<double>& x,
                                   ForwardCache& cache);

/// Gradient of -log softmax_label at the logits: probs - onehot(label).
std::vector<double> ce_logit_gradient(const std::vector<double>& probs, int label);

/// Gradient at the logits of dot(coeff_row, loss_vector(logits)):
/// coeff_sum * probs - coeff_row. With coeff_row = onehot(label) this
/// reproduces ce_logit_gradient bit for bit.
std::vector<double> weighted_loss_logit_gradient(const std::vector<double>& probs,
                                                 const double* coeff_row, int k,
                                                 double coeff_sum);

/// Scales dlogits by weight, then back-propagates, adding weight * dL/dparam
/// into grads. cache must come from forward_cached on the same net and x.
void accumulate_backward(const Network& net, const std::vector<double>& x,
                         const ForwardCache& cache, const std::vector<double>& dlogits,
                         double weight, GradientSet& grads);

struct WeightedExample {
    std::vector<double> x;
    int label = 0;
    double weight = 1.0;
};

/// (1/B) * sum_i weight_i * d(sample_loss(net, x_i, y_i))/dparam, exact
/// reverse mode, B = batch size.
GradientSet backprop_weighted(const Network& net, const std::vector<WeightedExample>& batch);

/// Same averaging, with the per-sample scalar replaced by the backward-
/// corrected loss dot(row y of t_inverse, loss_vector(logits)).
GradientSet backprop_weighted_corrected(const Network& net,
                                        const std::vector<WeightedExample>& batch,
                                        const Mat& t_inverse);

/// Central differences per parameter; test oracle for the reverse-mode path.
GradientSet finite_diff_gradient(const Network& net,
                                 const std::function<double(const Network&)>& loss,
                                 double step);

}  // namespace pumpout
