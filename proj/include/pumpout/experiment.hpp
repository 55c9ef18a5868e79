#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pumpout/config.hpp"
#include "pumpout/dataset.hpp"
#include "pumpout/noise.hpp"
#include "pumpout/trainers.hpp"

namespace pumpout {

/// Datasets with noise injected as configured: train and validation carry
/// noisy labels, test is never corrupted. t is present whenever noise.type
/// is not "none".
struct ExperimentData {
    NoisyDataset train;
    NoisyDataset validation;
    NoisyDataset test;
    std::optional<TransitionMatrix> t;
};

ExperimentData build_experiment_data(const RunConfig& cfg);

struct ExperimentResult {
    RunConfig config;
    std::vector<EpochMetrics> epochs;
    double wall_seconds = 0.0;
    double final_test_accuracy = 0.0;
    std::optional<double> final_validation_accuracy;
};

/// Fixed CSV schema: epoch,test_accuracy,label_precision,mean_train_loss,wall_clock_s.
/// label_precision is left empty for the BC family.
extern const char* kMetricsCsvHeader;
std::string metrics_csv_row(const EpochMetrics& m);

/// Builds the datasets, trains as configured, and (when csv_path is not
/// empty) streams one CSV row per epoch, flushing as it goes so an
/// interrupted run still leaves a valid prefix on disk.
ExperimentResult run_experiment(const RunConfig& cfg, const std::string& csv_path = "");

/// The gamma grid used when a sweep does not name its own.
extern const std::vector<double> kDefaultGammaGrid;

struct GammaSweepRun {
    double gamma = 0.0;
    ExperimentResult result;
};

struct SweepOutcome {
    double chosen_gamma = 0.0;
    std::vector<GammaSweepRun> runs;  // in grid order
};

/// Runs the base config once per grid value (concurrently, one isolated run
/// per worker), picks the gamma with the best final-epoch validation
/// accuracy, breaking ties toward the smaller gamma. When out_prefix is not
/// empty, writes <prefix>_gamma<g>.csv per run plus <prefix>_summary.csv.
/// workers <= 0 picks a sensible default.
SweepOutcome sweep_gamma(const RunConfig& base, const std::vector<double>& grid,
                         const std::string& out_prefix = "", int workers = 0);

}  // namespace pumpout
