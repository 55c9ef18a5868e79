#include "pumpout/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include "pumpout/common.hpp"
#include "pumpout/rng.hpp"

namespace pumpout {

const char* kMetricsCsvHeader = "epoch,test_accuracy,label_precision,mean_train_loss,wall_clock_s";

const std::vector<double> kDefaultGammaGrid = {0.0, 0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0};

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

TransitionMatrix build_matrix(const RunConfig& cfg, int k) {
    if (cfg.noise_type == "pair") {
        return TransitionMatrix::pair_flip(k, cfg.noise_rate, cfg.noise_allow_extreme);
    }
    if (cfg.noise_type == "symmetry") {
        return TransitionMatrix::symmetry_flip(k, cfg.noise_rate);
    }
    TransitionMatrix t = TransitionMatrix::load(cfg.noise_file);
    if (t.class_count() != k) {
        throw ConfigError("noise.file: matrix order " + std::to_string(t.class_count()) +
                          " does not match the dataset's " + std::to_string(k) + " classes");
    }
    return t;
}

void stamp_provenance(NoisyDataset& ds, const RunConfig& cfg) {
    ds.provenance.source = cfg.source;
    ds.provenance.noise_kind = cfg.noise_type;
    ds.provenance.tau = cfg.noise_rate;
    ds.provenance.seed = cfg.data_seed;
}

}  // namespace

ExperimentData build_experiment_data(const RunConfig& cfg) {
    ExperimentData data;
    if (cfg.source == "blobs") {
        BlobSplits splits =
            synth_blobs(cfg.classes, cfg.per_class, cfg.dim, cfg.spread, cfg.data_seed);
        data.train = std::move(splits.train);
        data.validation = std::move(splits.validation);
        data.test = std::move(splits.test);
    } else {
        NoisyDataset pool = load_idx_mnist(cfg.images, cfg.labels, cfg.limit);
        if (pool.size() < 2) {
            throw ConfigError("data.limit: needs at least 2 training records, got " +
                              std::to_string(pool.size()));
        }
        // Last tenth (after a seeded shuffle) becomes the validation split.
        std::vector<int> order(pool.size());
        std::iota(order.begin(), order.end(), 0);
        Rng(cfg.data_seed, "mnist-split").shuffle(order);
        std::size_t n_val = pool.size() / 10;
        std::size_t n_train = pool.size() - n_val;

        auto take = [&](std::size_t begin, std::size_t end, Split split) {
            NoisyDataset ds;
            ds.split = split;
            ds.class_count = pool.class_count;
            for (std::size_t i = begin; i < end; ++i) {
                ds.features.push_back(pool.features[order[i]]);
                ds.clean_labels.push_back(pool.clean_labels[order[i]]);
            }
            ds.noisy_labels = ds.clean_labels;
            return ds;
        };
        data.train = take(0, n_train, Split::Train);
        data.validation = take(n_train, pool.size(), Split::Validation);
        data.test = load_idx_mnist(cfg.test_images, cfg.test_labels, cfg.test_limit);
        data.test.split = Split::Test;
    }

    stamp_provenance(data.train, cfg);
    stamp_provenance(data.validation, cfg);
    stamp_provenance(data.test, cfg);
    data.test.provenance.noise_kind = "none";  // the test split is never corrupted

    if (cfg.noise_type != "none") {
        data.t = build_matrix(cfg, data.train.class_count);
        data.train.noisy_labels =
            corrupt(data.train.clean_labels, *data.t, derive_seed(cfg.data_seed, "corrupt-train"));
        data.validation.noisy_labels = corrupt(data.validation.clean_labels, *data.t,
                                               derive_seed(cfg.data_seed, "corrupt-validation"));
    }
    return data;
}

std::string metrics_csv_row(const EpochMetrics& m) {
    std::string row = std::to_string(m.epoch);
    row += ',';
    row += fmt(m.test_accuracy);
    row += ',';
    if (m.label_precision) row += fmt(*m.label_precision);
    row += ',';
    row += fmt(m.mean_train_loss);
    row += ',';
    row += fmt(m.wall_clock_s);
    return row;
}

ExperimentResult run_experiment(const RunConfig& cfg, const std::string& csv_path) {
    ExperimentData data = build_experiment_data(cfg);

    std::ofstream csv;
    if (!csv_path.empty()) {
        csv.open(csv_path);
        if (!csv) throw std::runtime_error("cannot open CSV output: " + csv_path);
        csv << kMetricsCsvHeader << '\n';
        csv.flush();
    }
    EpochObserver observer;
    if (csv.is_open()) {
        observer = [&csv](const EpochMetrics& m) {
            csv << metrics_csv_row(m) << '\n';
            csv.flush();
        };
    }

    const TransitionMatrix* t = data.t ? &*data.t : nullptr;
    TrainResult tr = train(cfg.train, data.train, data.test, t, &data.validation, observer);

    ExperimentResult result;
    result.config = cfg;
    result.epochs = std::move(tr.epochs);
    result.wall_seconds = tr.total_seconds;
    result.final_test_accuracy = result.epochs.back().test_accuracy;
    result.final_validation_accuracy = result.epochs.back().validation_accuracy;
    return result;
}

SweepOutcome sweep_gamma(const RunConfig& base, const std::vector<double>& grid,
                         const std::string& out_prefix, int workers) {
    if (grid.empty()) throw ConfigError("sweep: empty gamma grid");
    for (double g : grid) {
        if (g < 0.0 || g > 1.0) throw ConfigError("sweep: gamma " + fmt(g) + " outside [0, 1]");
    }

    std::vector<GammaSweepRun> runs(grid.size());
    int n_workers = workers > 0 ? workers
                                : static_cast<int>(std::min<std::size_t>(
                                      grid.size(),
                                      std::max(1u, std::thread::hardware_concurrency())));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    auto work = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= grid.size() || failed.load()) return;
            try {
                RunConfig cfg = base;
                cfg.train.gamma = grid[i];
                std::string path;
                if (!out_prefix.empty()) {
                    path = out_prefix + "_gamma" + fmt(grid[i]) + ".csv";
                }
                runs[i].gamma = grid[i];
                runs[i].result = run_experiment(cfg, path);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (failed.load()) throw std::runtime_error("sweep: run failed: " + first_error);

    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double acc = runs[i].result.final_validation_accuracy.value_or(0.0);
        double best_acc = runs[best].result.final_validation_accuracy.value_or(0.0);
        if (acc > best_acc || (acc == best_acc && grid[i] < grid[best])) best = i;
    }

    SweepOutcome outcome;
    outcome.chosen_gamma = grid[best];
    outcome.runs = std::move(runs);

    if (!out_prefix.empty()) {
        std::ofstream summary(out_prefix + "_summary.csv");
        summary << "gamma,final_validation_accuracy,final_test_accuracy,chosen\n";
        for (const auto& run : outcome.runs) {
            summary << fmt(run.gamma) << ','
                    << fmt(run.result.final_validation_accuracy.value_or(0.0)) << ','
                    << fmt(run.result.final_test_accuracy) << ','
                    << (run.gamma == outcome.chosen_gamma ? 1 : 0) << '\n';
        }
    }
    return outcome;
}

}  // namespace pumpout
