// Command-line face of the lab: run one experiment, sweep gamma, or plot
// metric curves from previously written CSV files.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pumpout/chart.hpp"
#include "pumpout/common.hpp"
#include "pumpout/config.hpp"
#include "pumpout/experiment.hpp"

namespace {

std::string file_stem(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

pumpout::RunConfig load_config(const std::string& path, bool seed_set, std::uint64_t seed,
                               bool limit_set, std::uint64_t limit) {
    pumpout::RunConfig cfg = pumpout::parse_config_file(path);
    if (seed_set) {
        cfg.train.seed = seed;
        cfg.data_seed = seed;
    }
    if (limit_set) {
        if (cfg.source != "mnist") {
            throw pumpout::ConfigError("--limit only applies to data.source=mnist");
        }
        cfg.limit = static_cast<std::size_t>(limit);
    }
    return cfg;
}

void print_summary(const pumpout::ExperimentResult& r) {
    const auto& last = r.epochs.back();
    std::printf("algorithm            %s\n", algorithm_name(r.config.train.algorithm).c_str());
    std::printf("epochs               %zu\n", r.epochs.size());
    std::printf("final test accuracy  %.4f\n", r.final_test_accuracy);
    if (last.label_precision) {
        std::printf("final label precision %.4f\n", *last.label_precision);
    }
    if (r.final_validation_accuracy) {
        std::printf("final val accuracy   %.4f\n", *r.final_validation_accuracy);
    }
    std::printf("mean train loss      %.6f\n", last.mean_train_loss);
    std::printf("wall clock           %.1f s\n", r.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pumpout-lab: noisy-label training laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    std::uint64_t limit = 0;
    bool seed_set = false;
    bool limit_set = false;

    auto* run_cmd = app.add_subcommand("run", "run one experiment from a config file");
    run_cmd->add_option("config", config_path, "config file")->required();
    run_cmd->add_option("-o,--out", out_path, "metrics CSV path (default: <config stem>.csv)");
    run_cmd->add_option("--seed", seed, "override data.seed and train.seed")
        ->each([&](const std::string&) { seed_set = true; });
    run_cmd->add_option("--limit", limit, "override data.limit (mnist only)")
        ->each([&](const std::string&) { limit_set = true; });

    std::string grid_spec;
    int jobs = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "run the config once per gamma and pick the best");
    sweep_cmd->add_option("config", config_path, "config file")->required();
    sweep_cmd->add_option("--grid", grid_spec, "comma-separated gamma values (default: the 8-point grid)");
    sweep_cmd->add_option("-o,--out", out_path, "output prefix (default: <config stem>_sweep)");
    sweep_cmd->add_option("--jobs", jobs, "concurrent runs (default: auto)");
    sweep_cmd->add_option("--seed", seed, "override data.seed and train.seed")
        ->each([&](const std::string&) { seed_set = true; });
    sweep_cmd->add_option("--limit", limit, "override data.limit (mnist only)")
        ->each([&](const std::string&) { limit_set = true; });

    std::vector<std::string> csv_paths;
    std::string metric_name = "accuracy";
    auto* plot_cmd = app.add_subcommand("plot", "render metric curves from CSV files to SVG");
    plot_cmd->add_option("csv", csv_paths, "input CSV files")->required()->expected(-1);
    plot_cmd->add_option("-o,--out", out_path, "output SVG path")->required();
    plot_cmd->add_option("--metric", metric_name, "accuracy | precision | loss");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            pumpout::RunConfig cfg = load_config(config_path, seed_set, seed, limit_set, limit);
            std::string csv = out_path.empty() ? file_stem(config_path) + ".csv" : out_path;
            pumpout::ExperimentResult result = pumpout::run_experiment(cfg, csv);
            print_summary(result);
            std::printf("metrics              %s\n", csv.c_str());
        } else if (sweep_cmd->parsed()) {
            pumpout::RunConfig cfg = load_config(config_path, seed_set, seed, limit_set, limit);
            std::vector<double> grid = pumpout::kDefaultGammaGrid;
            if (!grid_spec.empty()) {
                grid.clear();
                std::size_t start = 0;
                while (start <= grid_spec.size()) {
                    std::size_t comma = grid_spec.find(',', start);
                    std::string item = grid_spec.substr(
                        start, comma == std::string::npos ? std::string::npos : comma - start);
                    if (!item.empty()) grid.push_back(std::stod(item));
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
            }
            std::string prefix = out_path.empty() ? file_stem(config_path) + "_sweep" : out_path;
            pumpout::SweepOutcome outcome = pumpout::sweep_gamma(cfg, grid, prefix, jobs);
            std::printf("gamma    val_acc   test_acc\n");
            for (const auto& run : outcome.runs) {
                std::printf("%-8g %.4f    %.4f%s\n", run.gamma,
                            run.result.final_validation_accuracy.value_or(0.0),
                            run.result.final_test_accuracy,
                            run.gamma == outcome.chosen_gamma ? "  <- chosen" : "");
            }
            std::printf("chosen gamma: %g\n", outcome.chosen_gamma);
        } else if (plot_cmd->parsed()) {
            pumpout::ChartMetric metric;
            if (metric_name == "accuracy") metric = pumpout::ChartMetric::TestAccuracy;
            else if (metric_name == "precision") metric = pumpout::ChartMetric::LabelPrecision;
            else if (metric_name == "loss") metric = pumpout::ChartMetric::MeanTrainLoss;
            else {
                std::fprintf(stderr, "unknown metric '%s' (accuracy|precision|loss)\n",
                             metric_name.c_str());
                return 2;
            }
            pumpout::emit_chart(csv_paths, out_path, metric);
            std::printf("wrote %s\n", out_path.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
