#include "pumpout/trainers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pumpout/common.hpp"
#include "pumpout/correction.hpp"
#include "pumpout/rng.hpp"

namespace pumpout {

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Standard: return "standard";
        case Algorithm::MentorNetLite: return "mentornet";
        case Algorithm::PumpoutSL: return "pumpout_sl";
        case Algorithm::BC: return "bc";
        case Algorithm::NnBC: return "nnbc";
        case Algorithm::PumpoutBC: return "pumpout_bc";
    }
    return "standard";
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "standard") return Algorithm::Standard;
    if (name == "mentornet") return Algorithm::MentorNetLite;
    if (name == "pumpout_sl") return Algorithm::PumpoutSL;
    if (name == "bc") return Algorithm::BC;
    if (name == "nnbc") return Algorithm::NnBC;
    if (name == "pumpout_bc") return Algorithm::PumpoutBC;
    throw ConfigError("train.algorithm: unknown algorithm '" + name +
                      "' (expected standard|mentornet|pumpout_sl|bc|nnbc|pumpout_bc)");
}

namespace {

enum class LossMode { Plain, Corrected };
enum class FitRule { Always, SmallLoss, NonNegativeCorrected };

struct EngineSetup {
    LossMode mode = LossMode::Plain;
    FitRule rule = FitRule::Always;
    const Mat* t_inverse = nullptr;       // required for Corrected mode
    std::vector<double> inv_row_sums;     // row sums of t_inverse
    KeepSchedule schedule;
    double gamma = 0.0;
    int batch_size = 1;
    bool want_label_precision = false;
    bool report_clipped = false;          // report max(0, raw) instead of raw
    const FittingPredicate* custom_predicate = nullptr;
};

bool is_bc_family(Algorithm a) {
    return a == Algorithm::BC || a == Algorithm::NnBC || a == Algorithm::PumpoutBC;
}

EpochOutcome run_epoch_engine(Network& net, OptimizerState& opt,
                              const std::vector<std::vector<double>>& features,
                              const std::vector<int>& labels,
                              const std::vector<bool>* clean_mask,
                              const std::vector<int>& order, const EngineSetup& s, int epoch) {
    const int b_size = s.batch_size;
    if (b_size < 1) throw std::invalid_argument("epoch: batch size must be >= 1");
    const int n_batches = static_cast<int>(order.size()) / b_size;
    if (n_batches == 0) {
        throw std::invalid_argument("epoch: training split (" + std::to_string(order.size()) +
                                    " samples) is smaller than one mini-batch of " +
                                    std::to_string(b_size));
    }
    const int k = net.class_count;

    EpochOutcome out;
    out.min_train_loss = std::numeric_limits<double>::infinity();
    double loss_sum = 0.0;
    long loss_count = 0;
    long fit_count = 0;
    double precision_sum = 0.0;
    int precision_batches = 0;

    GradientSet grads = make_gradient_set(net);
    std::vector<ForwardCache> caches(b_size);
    std::vector<LossVector> loss_vecs(b_size);
    std::vector<std::vector<double>> probs(b_size);
    std::vector<int> batch_labels(b_size);
    std::vector<double> plain_losses(b_size);
    std::vector<double> corrected_raw(b_size);
    std::vector<double> report_losses(b_size);
    std::vector<bool> fitting(b_size);
    std::vector<bool> batch_clean(b_size);

    // Selection serves two purposes: the fitting condition of the small-loss
    // rule, and label-precision instrumentation for every selection-free
    // plain-loss run.
    const bool need_selection =
        s.custom_predicate == nullptr &&
        (s.rule == FitRule::SmallLoss || s.want_label_precision);
    const double rate = need_selection ? keep_rate(epoch, s.schedule) : 1.0;

    for (int b = 0; b < n_batches; ++b) {
        const int* idx = order.data() + static_cast<std::size_t>(b) * b_size;

        // Losses are taken under the network state at the start of the
        // mini-batch; the update happens after the whole batch is assessed.
        for (int i = 0; i < b_size; ++i) {
            int sample = idx[i];
            int y = labels[sample];
            batch_labels[i] = y;
            std::vector<double> logits = forward_cached(net, features[sample], caches[i]);
            loss_vecs[i] = loss_vector(logits);
            probs[i].resize(k);
            for (int j = 0; j < k; ++j) probs[i][j] = std::exp(-loss_vecs[i].entries[j]);
            plain_losses[i] = loss_vecs[i].entries[y];
            if (s.mode == LossMode::Corrected) {
                corrected_raw[i] = backward_loss(loss_vecs[i], y, *s.t_inverse);
                report_losses[i] =
                    s.report_clipped ? std::max(0.0, corrected_raw[i]) : corrected_raw[i];
            } else {
                report_losses[i] = plain_losses[i];
            }
        }

        SelectionSet selection;
        if (need_selection) selection = select_small_loss(plain_losses, rate);

        if (s.custom_predicate != nullptr) {
            std::vector<bool> flags;
            try {
                flags = (*s.custom_predicate)(loss_vecs, batch_labels, epoch);
            } catch (const std::exception& e) {
                throw std::runtime_error("fitting predicate failed on mini-batch " +
                                         std::to_string(b) + ": " + e.what());
            }
            if (flags.size() != static_cast<std::size_t>(b_size)) {
                throw std::runtime_error("fitting predicate returned " +
                                         std::to_string(flags.size()) + " flags for a batch of " +
                                         std::to_string(b_size));
            }
            fitting = flags;
        } else {
            switch (s.rule) {
                case FitRule::Always:
                    std::fill(fitting.begin(), fitting.end(), true);
                    break;
                case FitRule::SmallLoss: {
                    std::fill(fitting.begin(), fitting.end(), false);
                    for (int i : selection.indices) fitting[i] = true;
                    break;
                }
                case FitRule::NonNegativeCorrected:
                    for (int i = 0; i < b_size; ++i) fitting[i] = corrected_raw[i] >= 0.0;
                    break;
            }
        }

        if (s.want_label_precision && clean_mask != nullptr) {
            for (int i = 0; i < b_size; ++i) batch_clean[i] = (*clean_mask)[idx[i]];
            precision_sum += label_precision(selection, batch_clean);
            ++precision_batches;
        }

        grads.fill(0.0);
        std::vector<FitDecision> decisions(b_size);
        for (int i = 0; i < b_size; ++i) {
            int y = batch_labels[i];
            bool fit = fitting[i];
            if (fit) ++fit_count;
            double weight = fit ? 1.0 : -s.gamma;
            decisions[i] = FitDecision{fit, weight};
            std::vector<double> dlogits =
                s.mode == LossMode::Corrected
                    ? weighted_loss_logit_gradient(probs[i], s.t_inverse->row(y), k,
                                                   s.inv_row_sums[y])
                    : ce_logit_gradient(probs[i], y);
            accumulate_backward(net, features[idx[i]], caches[i], dlogits, weight, grads);
            loss_sum += report_losses[i];
            ++loss_count;
            out.min_train_loss = std::min(out.min_train_loss, report_losses[i]);
        }
        grads.scale(1.0 / static_cast<double>(b_size));
        optimizer_step(net, grads, opt);
        out.batch_decisions.push_back(std::move(decisions));
    }

    out.mean_train_loss = loss_sum / static_cast<double>(loss_count);
    out.samples_processed = static_cast<int>(loss_count);
    out.fit_fraction = static_cast<double>(fit_count) / static_cast<double>(loss_count);
    if (precision_batches > 0) {
        out.label_precision = precision_sum / static_cast<double>(precision_batches);
    }
    return out;
}

EngineSetup setup_for(const TrainConfig& cfg, const TransitionMatrix* t) {
    EngineSetup s;
    s.batch_size = cfg.batch_size;
    s.schedule = KeepSchedule{cfg.tau, cfg.warmup_epochs};
    s.gamma = cfg.gamma;
    switch (cfg.algorithm) {
        case Algorithm::Standard:
            s.rule = FitRule::Always;
            s.want_label_precision = true;
            break;
        case Algorithm::MentorNetLite:
            s.rule = FitRule::SmallLoss;
            s.gamma = 0.0;
            s.want_label_precision = true;
            break;
        case Algorithm::PumpoutSL:
            s.rule = FitRule::SmallLoss;
            s.want_label_precision = true;
            break;
        case Algorithm::BC:
            s.mode = LossMode::Corrected;
            s.rule = FitRule::Always;
            break;
        case Algorithm::NnBC:
            s.mode = LossMode::Corrected;
            s.rule = FitRule::NonNegativeCorrected;
            s.gamma = 0.0;
            s.report_clipped = true;
            break;
        case Algorithm::PumpoutBC:
            s.mode = LossMode::Corrected;
            s.rule = FitRule::NonNegativeCorrected;
            s.report_clipped = true;
            break;
    }
    if (s.mode == LossMode::Corrected) {
        s.t_inverse = &t->inverse();
        int k = t->class_count();
        s.inv_row_sums.resize(k);
        for (int r = 0; r < k; ++r) {
            double sum = 0.0;
            for (int c = 0; c < k; ++c) sum += t->inverse()(r, c);
            s.inv_row_sums[r] = sum;
        }
    }
    return s;
}

TrainResult run_training(const TrainConfig& cfg, const NoisyDataset& train,
                         const NoisyDataset& test, const TransitionMatrix* t,
                         const NoisyDataset* validation, const EpochObserver& on_epoch) {
    if (cfg.gamma < 0.0 || cfg.gamma > 1.0) {
        throw std::invalid_argument("train: gamma must lie in [0, 1]");
    }
    if (cfg.batch_size < 1 || cfg.max_epochs < 1 || cfg.eval_interval < 1) {
        throw std::invalid_argument("train: batch_size, max_epochs, eval_interval must be >= 1");
    }
    if (train.size() == 0) throw std::invalid_argument("train: empty training split");
    if (is_bc_family(cfg.algorithm)) {
        if (t == nullptr) {
            throw std::invalid_argument("train: " + algorithm_name(cfg.algorithm) +
                                        " needs the injected transition matrix");
        }
        if (t->class_count() != train.class_count) {
            throw std::invalid_argument("train: transition matrix order does not match class count");
        }
    }

    EngineSetup setup = setup_for(cfg, t);

    Network net = make_mlp(train.feature_dim(), cfg.hidden, train.class_count, cfg.seed);
    OptimizerState opt = make_optimizer(cfg.optimizer, cfg.learning_rate, net);

    Rng shuffle_rng(cfg.seed, "epoch-shuffle");
    std::vector<int> order(train.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<bool> clean_mask(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        clean_mask[i] = train.noisy_labels[i] == train.clean_labels[i];
    }

    TrainResult result;
    result.epochs.reserve(cfg.max_epochs);

    auto start = std::chrono::steady_clock::now();
    double last_test_acc = 0.0;
    double last_val_acc = 0.0;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        EpochOutcome outcome = run_epoch_engine(net, opt, train.features, train.noisy_labels,
                                                &clean_mask, order, setup, epoch);

        bool evaluate = epoch == 1 || epoch == cfg.max_epochs || epoch % cfg.eval_interval == 0;
        if (evaluate) {
            last_test_acc = test_accuracy(net, test);
            if (validation != nullptr) {
                last_val_acc = accuracy_against(net, *validation, validation->noisy_labels);
            }
        }

        EpochMetrics m;
        m.epoch = epoch;
        m.test_accuracy = last_test_acc;
        m.label_precision = outcome.label_precision;
        m.mean_train_loss = outcome.mean_train_loss;
        m.min_train_loss = outcome.min_train_loss;
        m.fit_fraction = outcome.fit_fraction;
        if (validation != nullptr) m.validation_accuracy = last_val_acc;
        m.wall_clock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.epochs.push_back(m);
        if (on_epoch) on_epoch(m);
    }
    result.final_net = std::move(net);
    result.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace

EpochOutcome pumpout_epoch(Network& net, OptimizerState& opt,
                           const std::vector<std::vector<double>>& features,
                           const std::vector<int>& labels, const std::vector<int>& order,
                           const FittingPredicate& fitting_predicate, double gamma,
                           int batch_size, int epoch) {
    if (gamma < 0.0 || gamma > 1.0) {
        throw std::invalid_argument("pumpout_epoch: gamma must lie in [0, 1]");
    }
    EngineSetup s;
    s.mode = LossMode::Plain;
    s.gamma = gamma;
    s.batch_size = batch_size;
    s.custom_predicate = &fitting_predicate;
    return run_epoch_engine(net, opt, features, labels, nullptr, order, s, epoch);
}

TrainResult train_standard(const TrainConfig& cfg, const NoisyDataset& train,
                           const NoisyDataset& test, const NoisyDataset* validation,
                           const EpochObserver& on_epoch) {
    TrainConfig c = cfg;
    c.algorithm = Algorithm::Standard;
    return run_training(c, train, test, nullptr, validation, on_epoch);
}

TrainResult train_mentornet_lite(const TrainConfig& cfg, const NoisyDataset& train,
                                 const NoisyDataset& test, const NoisyDataset* validation,
                                 const EpochObserver& on_epoch) {
    TrainConfig c = cfg;
    c.algorithm = Algorithm::MentorNetLite;
    return run_training(c, train, test, nullptr, validation, on_epoch);
}

TrainResult train_pumpout_sl(const TrainConfig& cfg, const NoisyDataset& train,
                             const NoisyDataset& test, const NoisyDataset* validation,
                             const EpochObserver& on_epoch) {
    TrainConfig c = cfg;
    c.algorithm = Algorithm::PumpoutSL;
    return run_training(c, train, test, nullptr, validation, on_epoch);
}

TrainResult train_bc(const TrainConfig& cfg, const NoisyDataset& train, const NoisyDataset& test,
                     const TransitionMatrix& t, const NoisyDataset* validation,
                     const EpochObserver& on_epoch) {
    TrainConfig c = cfg;
    c.algorithm = Algorithm::BC;
    return run_training(c, train, test, &t, validation, on_epoch);
}

TrainResult train_nnbc(const TrainConfig& cfg, const NoisyDataset& train,
                       const NoisyDataset& test, const TransitionMatrix& t,
                       const NoisyDataset* validation, const EpochObserver& on_epoch) {
    TrainConfig c = cfg;
    c.algorithm = Algorithm::NnBC;
    return run_training(c, train, test, &t, validation, on_epoch);
}

TrainResult train_pumpout_bc(const TrainConfig& cfg, const NoisyDataset& train,
                             const NoisyDataset& test, const TransitionMatrix& t,
                             const NoisyDataset* validation, const EpochObserver& on_epoch) {
    TrainConfig c = cfg;
    c.algorithm = Algorithm::PumpoutBC;
    return run_training(c, train, test, &t, validation, on_epoch);
}

TrainResult train(const TrainConfig& cfg, const NoisyDataset& train, const NoisyDataset& test,
                  const TransitionMatrix* t, const NoisyDataset* validation,
                  const EpochObserver& on_epoch) {
    switch (cfg.algorithm) {
        case Algorithm::Standard:
            return train_standard(cfg, train, test, validation, on_epoch);
        case Algorithm::MentorNetLite:
            return train_mentornet_lite(cfg, train, test, validation, on_epoch);
        case Algorithm::PumpoutSL:
            return train_pumpout_sl(cfg, train, test, validation, on_epoch);
        case Algorithm::BC:
        case Algorithm::NnBC:
        case Algorithm::PumpoutBC:
            if (t == nullptr) {
                throw std::invalid_argument("train: " + algorithm_name(cfg.algorithm) +
                                            " needs the injected transition matrix");
            }
            if (cfg.algorithm == Algorithm::BC) return train_bc(cfg, train, test, *t, validation, on_epoch);
            if (cfg.algorithm == Algorithm::NnBC) return train_nnbc(cfg, train, test, *t, validation, on_epoch);
            return train_pumpout_bc(cfg, train, test, *t, validation, on_epoch);
    }
    throw std::invalid_argument("train: unknown algorithm");
}

}  // namespace pumpout
