#pragma once

#include <cstdint>
#include <string>

#include "pumpout/trainers.hpp"

namespace pumpout {

/// One experiment, as described by a flat key=value config file with dotted
/// sections (data.*, noise.*, train.*). Unknown keys are rejected so typos
/// cannot silently fall back to defaults.
struct RunConfig {
    // data.*
    std::string source = "blobs";  // blobs | mnist
    std::uint64_t data_seed = 1;
    int classes = 5;               // blobs
    int per_class = 1000;          // blobs
    int dim = 2;                   // blobs
    double spread = 0.3;           // blobs: per-coordinate stddev
    std::string images;            // mnist: IDX paths
    std::string labels;
    std::string test_images;
    std::string test_labels;
    std::size_t limit = 10000;     // mnist: training records to keep
    std::size_t test_limit = 2000;

    // noise.*
    std::string noise_type = "none";  // none | pair | symmetry | custom
    double noise_rate = 0.0;
    std::string noise_file;           // custom matrix path
    bool noise_allow_extreme = false;

    // train.*
    TrainConfig train;

    /// Name used for CSV/legend labelling; defaults to the config file stem.
    std::string name = "run";
};

RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig parse_config_file(const std::string& path);

}  // namespace pumpout
