#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pumpout/dataset.hpp"
#include "pumpout/noise.hpp"
#include "pumpout/optimizer.hpp"
#include "pumpout/schedule_select.hpp"
#include "pumpout/tensor_nn.hpp"

namespace pumpout {

/// The six training variants. All of them run the same epoch loop; they
/// differ only in the per-sample loss (plain vs backward-corrected), the
/// fitting condition, and the ascent scale gamma:
///   Standard       descend on every sample
///   MentorNetLite  descend on small-loss samples, drop the rest (gamma 0)
///   PumpoutSL      descend on small-loss samples, scaled ascent on the rest
///   BC             descend on the backward-corrected loss of every sample
///   NnBC           descend where the corrected loss is nonnegative, drop the rest
///   PumpoutBC      descend where nonnegative, scaled ascent where negative
enum class Algorithm { Standard, MentorNetLite, PumpoutSL, BC, NnBC, PumpoutBC };

std::string algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);  // throws ConfigError

struct TrainConfig {
    Algorithm algorithm = Algorithm::Standard;
    double gamma = 0.05;        // ascent scale on non-fitting samples, in [0, 1]
    int batch_size = 128;
    double learning_rate = 0.001;
    int max_epochs = 200;
    double tau = 0.0;           // injected noise rate; drives the keep-rate schedule
    int warmup_epochs = 10;     // keep-rate warm-up window T_k
    OptimizerKind optimizer = OptimizerKind::Adam;
    std::uint64_t seed = 1;
    int eval_interval = 1;      // test accuracy is recomputed every this many epochs
    std::vector<int> hidden = {64, 64};
};

/// Per-sample outcome of the fitting condition. weight is +1 for fitting
/// samples and -gamma otherwise.
struct FitDecision {
    bool fitting = true;
    double weight = 1.0;
};

struct EpochMetrics {
    int epoch = 0;
    double test_accuracy = 0.0;
    std::optional<double> label_precision;        // absent for the BC family
    double mean_train_loss = 0.0;
    double min_train_loss = 0.0;
    double fit_fraction = 1.0;                    // share of samples weighted +1
    std::optional<double> validation_accuracy;    // present when a validation split is given
    double wall_clock_s = 0.0;                    // cumulative since run start
};

struct TrainResult {
    std::vector<EpochMetrics> epochs;
    Network final_net;
    double total_seconds = 0.0;
};

using EpochObserver = std::function<void(const EpochMetrics&)>;

/// Batch-level fitting predicate for the generic epoch loop: receives the
/// per-sample loss vectors (under the network state at the start of the
/// mini-batch) and the observed labels, returns one flag per sample.
using FittingPredicate = std::function<std::vector<bool>(
    const std::vector<LossVector>& batch_loss_vectors,
    const std::vector<int>& batch_labels, int epoch)>;

struct EpochOutcome {
    std::vector<std::vector<FitDecision>> batch_decisions;
    double mean_train_loss = 0.0;
    double min_train_loss = 0.0;
    double fit_fraction = 1.0;
    std::optional<double> label_precision;  // mean over the epoch's mini-batches
    int samples_processed = 0;
};

/// One pass of the meta loop: walks `order` in mini-batches of batch_size
/// (a trailing partial batch is dropped; the next epoch reshuffles), weights
/// each sample +1 if the predicate marks it fitting and -gamma otherwise,
/// divides the accumulated gradient by batch_size, and takes one optimizer
/// step per mini-batch. The caller shuffles `order` once per epoch.
EpochOutcome pumpout_epoch(Network& net, OptimizerState& opt,
                           const std::vector<std::vector<double>>& features,
                           const std::vector<int>& labels, const std::vector<int>& order,
                           const FittingPredicate& fitting_predicate, double gamma,
                           int batch_size, int epoch);

/// Full training runs. `test` supplies the clean-label accuracy metric;
/// `validation`, when given, adds a noisy-label accuracy track used for
/// gamma selection. The BC-family entry points additionally need the
/// injected transition matrix.
TrainResult train_standard(const TrainConfig& cfg, const NoisyDataset& train,
                           const NoisyDataset& test, const NoisyDataset* validation = nullptr,
                           const EpochObserver& on_epoch = {});
TrainResult train_mentornet_lite(const TrainConfig& cfg, const NoisyDataset& train,
                                 const NoisyDataset& test,
                                 const NoisyDataset* validation = nullptr,
                                 const EpochObserver& on_epoch = {});
TrainResult train_pumpout_sl(const TrainConfig& cfg, const NoisyDataset& train,
                             const NoisyDataset& test, const NoisyDataset* validation = nullptr,
                             const EpochObserver& on_epoch = {});
TrainResult train_bc(const TrainConfig& cfg, const NoisyDataset& train, const NoisyDataset& test,
                     const TransitionMatrix& t, const NoisyDataset* validation = nullptr,
                     const EpochObserver& on_epoch = {});
TrainResult train_nnbc(const TrainConfig& cfg, const NoisyDataset& train,
                       const NoisyDataset& test, const TransitionMatrix& t,
                       const NoisyDataset* validation = nullptr,
                       const EpochObserver& on_epoch = {});
TrainResult train_pumpout_bc(const TrainConfig& cfg, const NoisyDataset& train,
                             const NoisyDataset& test, const TransitionMatrix& t,
                             const NoisyDataset* validation = nullptr,
                             const EpochObserver& on_epoch = {});

/// Dispatch on cfg.algorithm; t may be null for the selection-based variants.
TrainResult train(const TrainConfig& cfg, const NoisyDataset& train, const NoisyDataset& test,
                  const TransitionMatrix* t = nullptr, const NoisyDataset* validation = nullptr,
                  const EpochObserver& on_epoch = {});

}  // namespace pumpout
