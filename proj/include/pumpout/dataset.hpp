#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pumpout/tensor_nn.hpp"

namespace pumpout {

enum class Split { Train, Validation, Test };

struct DatasetProvenance {
    std::string source;      // "blobs" | "mnist"
    std::string noise_kind;  // "none" | "pair" | "symmetry" | "custom"
    double tau = 0.0;
    std::uint64_t seed = 0;
};

/// Features plus both label tracks. Clean labels stay around even after
/// corruption; label precision needs them. Test splits are never corrupted,
/// so there noisy == clean.
struct NoisyDataset {
    std::vector<std::vector<double>> features;
    std::vector<int> clean_labels;
    std::vector<int> noisy_labels;
    Split split = Split::Train;
    int class_count = 0;
    DatasetProvenance provenance;

    std::size_t size() const { return features.size(); }
    int feature_dim() const { return features.empty() ? 0 : static_cast<int>(features[0].size()); }
};

/// IDX-format reader (big-endian dimensions, magic 0x803 for images and
/// 0x801 for labels). Pixels are scaled to [0,1] and flattened; the first
/// `limit` records are kept (0 keeps none). Throws FormatError naming the
/// offending file and offset on bad magic, truncation or count mismatch.
NoisyDataset load_idx_mnist(const std::string& images_path, const std::string& labels_path,
                            std::size_t limit);

struct BlobSplits {
    NoisyDataset train;
    NoisyDataset validation;
    NoisyDataset test;
};

/// k Gaussian clusters, per_class points each, cluster means equally spaced
/// on a circle of radius 2 in the first two dimensions (adjacent class
/// indices sit next to each other spatially, which is what pair flipping
/// assumes). spread is the per-coordinate standard deviation. Deterministic
/// 70/10/20 train/validation/test split after a seeded shuffle.
BlobSplits synth_blobs(int k, int per_class, int dim, double spread, std::uint64_t seed);

/// Classification rate of argmax(logits) against the given labels; logit
/// ties resolve to the smallest class index.
double accuracy_against(const Network& net, const NoisyDataset& ds,
                        const std::vector<int>& labels);

/// accuracy_against the clean labels — the headline metric on a test split.
double test_accuracy(const Network& net, const NoisyDataset& test_split);

}  // namespace pumpout
