#include "pumpout/tensor_nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pumpout/common.hpp"
#include "pumpout/rng.hpp"

namespace pumpout {

double apply_activation(Activation a, double x) {
    switch (a) {
        case Activation::Softsign: return x / (1.0 + std::fabs(x));
        case Activation::LeakyRelu: return x > 0.0 ? x : 0.01 * x;
        case Activation::Identity: return x;
    }
    return x;
}

double activation_derivative(Activation a, double x) {
    switch (a) {
        case Activation::Softsign: {
            double d = 1.0 + std::fabs(x);
            return 1.0 / (d * d);
        }
        case Activation::LeakyRelu: return x > 0.0 ? 1.0 : 0.01;
        case Activation::Identity: return 1.0;
    }
    return 1.0;
}

int Network::parameter_count() const {
    int n = 0;
    for (const auto& l : layers) {
        n += l.weights.rows * l.weights.cols + static_cast<int>(l.bias.size());
    }
    return n;
}

Network make_mlp(int input_size, const std::vector<int>& hidden, int class_count,
                 std::uint64_t seed, Activation hidden_act) {
    if (input_size < 1 || class_count < 1) {
        throw std::invalid_argument("make_mlp: input_size and class_count must be positive");
    }
    Network net;
    net.class_count = class_count;
    Rng rng(seed, "weight-init");

    std::vector<int> sizes;
    sizes.push_back(input_size);
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(class_count);

    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        DenseLayer layer;
        int fan_in = sizes[l];
        int fan_out = sizes[l + 1];
        layer.weights = Mat(fan_out, fan_in);
        layer.bias.assign(fan_out, 0.0);
        double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& w : layer.weights.data) {
            w = rng.uniform(-bound, bound);
        }
        bool last = (l + 2 == sizes.size());
        layer.activation = last ? Activation::Identity : hidden_act;
        net.layers.push_back(std::move(layer));
    }
    return net;
}

void GradientSet::fill(double v) {
    for (auto& l : layers) {
        std::fill(l.weights.data.begin(), l.weights.data.end(), v);
        std::fill(l.bias.begin(), l.bias.end(), v);
    }
}

void GradientSet::scale(double s) {
    for (auto& l : layers) {
        for (double& w : l.weights.data) w *= s;
        for (double& b : l.bias) b *= s;
    }
}

double GradientSet::max_abs() const {
    double m = 0.0;
    for (const auto& l : layers) {
        for (double w : l.weights.data) m = std::max(m, std::fabs(w));
        for (double b : l.bias) m = std::max(m, std::fabs(b));
    }
    return m;
}

GradientSet make_gradient_set(const Network& net) {
    GradientSet g;
    g.layers.resize(net.layers.size());
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        g.layers[l].weights = Mat(net.layers[l].weights.rows, net.layers[l].weights.cols);
        g.layers[l].bias.assign(net.layers[l].bias.size(), 0.0);
    }
    return g;
}

namespace {

void affine_forward(const DenseLayer& layer, const std::vector<double>& in,
                    std::vector<double>& pre, std::vector<double>& post) {
    int out_n = layer.weights.rows;
    int in_n = layer.weights.cols;
    pre.resize(out_n);
    post.resize(out_n);
    for (int o = 0; o < out_n; ++o) {
        const double* w = layer.weights.row(o);
        double s = layer.bias[o];
        for (int i = 0; i < in_n; ++i) s += w[i] * in[i];
        pre[o] = s;
        post[o] = apply_activation(layer.activation, s);
    }
}

}  // namespace

std::vector<double> forward_cached(const Network& net, const std::vector<double>& x,
                                   ForwardCache& cache) {
    if (net.layers.empty()) throw std::invalid_argument("forward: empty network");
    if (static_cast<int>(x.size()) != net.input_size()) {
        throw std::invalid_argument("forward: input size " + std::to_string(x.size()) +
                                    " does not match first layer input " +
                                    std::to_string(net.input_size()));
    }
    cache.pre.resize(net.layers.size());
    cache.post.resize(net.layers.size());
    const std::vector<double>* in = &x;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        affine_forward(net.layers[l], *in, cache.pre[l], cache.post[l]);
        in = &cache.post[l];
    }
    return cache.post.back();
}

std::vector<double> forward(const Network& net, const std::vector<double>& x) {
    ForwardCache cache;
    return forward_cached(net, x, cache);
}

LossVector loss_vector(const std::vector<double>& logits) {
    if (logits.empty()) throw std::invalid_argument("loss_vector: empty logits");
    double mx = logits[0];
    for (double v : logits) {
        if (!std::isfinite(v)) throw NumericError("loss_vector: non-finite logit");
        mx = std::max(mx, v);
    }
    double sum = 0.0;
    for (double v : logits) sum += std::exp(v - mx);
    double lse = mx + std::log(sum);
    LossVector lv;
    lv.entries.resize(logits.size());
    for (std::size_t j = 0; j < logits.size(); ++j) {
        lv.entries[j] = lse - logits[j];
    }
    return lv;
}

std::vector<double> softmax(const std::vector<double>& logits) {
    LossVector lv = loss_vector(logits);
    std::vector<double> p(lv.entries.size());
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::exp(-lv.entries[j]);
    return p;
}

double sample_loss(const Network& net, const std::vector<double>& x, int label) {
    if (label < 0 || label >= net.class_count) {
        throw std::invalid_argument("sample_loss: label " + std::to_string(label) +
                                    " outside [0, " + std::to_string(net.class_count) + ")");
    }
    return loss_vector(forward(net, x)).entries[label];
}

std::vector<double> ce_logit_gradient(const std::vector<double>& probs, int label) {
    std::vector<double> g(probs.size());
    for (std::size_t m = 0; m < probs.size(); ++m) {
        g[m] = probs[m] - (static_cast<int>(m) == label ? 1.0 : 0.0);
    }
    return g;
}

std::vector<double> weighted_loss_logit_gradient(const std::vector<double>& probs,
                                                 const double* coeff_row, int k,
                                                 double coeff_sum) {
    std::vector<double> g(static_cast<std::size_t>(k));
    for (int m = 0; m < k; ++m) {
        g[m] = coeff_sum * probs[m] - coeff_row[m];
    }
    return g;
}

void accumulate_backward(const Network& net, const std::vector<double>& x,
                         const ForwardCache& cache, const std::vector<double>& dlogits,
                         double weight, GradientSet& grads) {
    int n_layers = static_cast<int>(net.layers.size());
    // The weight is folded in at the logits, so a -1 weight yields the exact
    // bitwise negation of the +1 gradient.
    std::vector<double> dz(dlogits.size());
    for (std::size_t m = 0; m < dlogits.size(); ++m) dz[m] = dlogits[m] * weight;

    std::vector<double> da;
    for (int l = n_layers - 1; l >= 0; --l) {
        const DenseLayer& layer = net.layers[l];
        const std::vector<double>& a_prev = (l == 0) ? x : cache.post[l - 1];
        int out_n = layer.weights.rows;
        int in_n = layer.weights.cols;

        auto& gw = grads.layers[l].weights;
        auto& gb = grads.layers[l].bias;
        for (int o = 0; o < out_n; ++o) {
            double d = dz[o];
            gb[o] += d;
            double* grow = gw.row(o);
            for (int i = 0; i < in_n; ++i) grow[i] += d * a_prev[i];
        }

        if (l == 0) break;  // input gradient is not needed

        da.assign(in_n, 0.0);
        for (int o = 0; o < out_n; ++o) {
            double d = dz[o];
            const double* w = layer.weights.row(o);
            for (int i = 0; i < in_n; ++i) da[i] += w[i] * d;
        }
        const std::vector<double>& z_prev = cache.pre[l - 1];
        dz.resize(in_n);
        Activation act = net.layers[l - 1].activation;
        for (int i = 0; i < in_n; ++i) {
            dz[i] = da[i] * activation_derivative(act, z_prev[i]);
        }
    }
}

namespace {

GradientSet backprop_batch(const Network& net, const std::vector<WeightedExample>& batch,
                           const Mat* t_inverse) {
    if (batch.empty()) throw std::invalid_argument("backprop: empty batch");
    int k = net.class_count;
    std::vector<double> inv_row_sums;
    if (t_inverse) {
        if (t_inverse->rows != k || t_inverse->cols != k) {
            throw std::invalid_argument("backprop: inverse matrix shape does not match class count");
        }
        inv_row_sums.resize(k);
        for (int r = 0; r < k; ++r) {
            double s = 0.0;
            for (int c = 0; c < k; ++c) s += (*t_inverse)(r, c);
            inv_row_sums[r] = s;
        }
    }

    GradientSet grads = make_gradient_set(net);
    ForwardCache cache;
    for (const auto& ex : batch) {
        if (!std::isfinite(ex.weight)) throw std::invalid_argument("backprop: non-finite weight");
        if (ex.label < 0 || ex.label >= k) {
            throw std::invalid_argument("backprop: label out of range");
        }
        std::vector<double> logits = forward_cached(net, ex.x, cache);
        std::vector<double> probs = softmax(logits);
        std::vector<double> dlogits =
            t_inverse ? weighted_loss_logit_gradient(probs, t_inverse->row(ex.label), k,
                                                     inv_row_sums[ex.label])
                      : ce_logit_gradient(probs, ex.label);
        accumulate_backward(net, ex.x, cache, dlogits, ex.weight, grads);
    }
    grads.scale(1.0 / static_cast<double>(batch.size()));
    return grads;
}

}  // namespace

GradientSet backprop_weighted(const Network& net, const std::vector<WeightedExample>& batch) {
    return backprop_batch(net, batch, nullptr);
}

GradientSet backprop_weighted_corrected(const Network& net,
                                        const std::vector<WeightedExample>& batch,
                                        const Mat& t_inverse) {
    return backprop_batch(net, batch, &t_inverse);
}

GradientSet finite_diff_gradient(const Network& net,
                                 const std::function<double(const Network&)>& loss,
                                 double step) {
    Network probe = net;
    GradientSet grads = make_gradient_set(net);
    for (std::size_t l = 0; l < probe.layers.size(); ++l) {
        auto& layer = probe.layers[l];
        for (std::size_t i = 0; i < layer.weights.data.size(); ++i) {
            double saved = layer.weights.data[i];
            layer.weights.data[i] = saved + step;
            double up = loss(probe);
            layer.weights.data[i] = saved - step;
            double down = loss(probe);
            layer.weights.data[i] = saved;
            grads.layers[l].weights.data[i] = (up - down) / (2.0 * step);
        }
        for (std::size_t i = 0; i < layer.bias.size(); ++i) {
            double saved = layer.bias[i];
            layer.bias[i] = saved + step;
            double up = loss(probe);
            layer.bias[i] = saved - step;
            double down = loss(probe);
            layer.bias[i] = saved;
            grads.layers[l].bias[i] = (up - down) / (2.0 * step);
        }
    }
    return grads;
}

}  // namespace pumpout
