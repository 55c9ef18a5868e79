#include "pumpout/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "pumpout/common.hpp"
#include "pumpout/rng.hpp"

namespace pumpout {

namespace {

std::uint32_t read_be_u32(std::ifstream& in, const std::string& path, std::size_t offset) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
        throw FormatError(path + ": truncated at offset " + std::to_string(offset) +
                          " (expected 4 more bytes)");
    }
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

NoisyDataset load_idx_mnist(const std::string& images_path, const std::string& labels_path,
                            std::size_t limit) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw FormatError("cannot open image file: " + images_path);
    std::uint32_t magic = read_be_u32(img, images_path, 0);
    if (magic != 0x00000803u) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "0x%08X", magic);
        throw FormatError(images_path + ": bad image magic " + buf + " at offset 0");
    }
    std::uint32_t n_images = read_be_u32(img, images_path, 4);
    std::uint32_t rows = read_be_u32(img, images_path, 8);
    std::uint32_t cols = read_be_u32(img, images_path, 12);

    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw FormatError("cannot open label file: " + labels_path);
    std::uint32_t lab_magic = read_be_u32(lab, labels_path, 0);
    if (lab_magic != 0x00000801u) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "0x%08X", lab_magic);
        throw FormatError(labels_path + ": bad label magic " + buf + " at offset 0");
    }
    std::uint32_t n_labels = read_be_u32(lab, labels_path, 4);
    if (n_labels != n_images) {
        throw FormatError(labels_path + ": label count " + std::to_string(n_labels) +
                          " does not match image count " + std::to_string(n_images) + " in " +
                          images_path);
    }

    std::size_t keep = std::min<std::size_t>(limit, n_images);
    std::size_t dim = std::size_t(rows) * cols;

    NoisyDataset ds;
    ds.class_count = 10;
    ds.provenance.source = "mnist";
    ds.provenance.noise_kind = "none";
    ds.features.reserve(keep);
    ds.clean_labels.reserve(keep);

    std::vector<unsigned char> pixel_buf(dim);
    for (std::size_t i = 0; i < keep; ++i) {
        if (!img.read(reinterpret_cast<char*>(pixel_buf.data()), std::streamsize(dim))) {
            throw FormatError(images_path + ": truncated at offset " +
                              std::to_string(16 + i * dim) + " (record " + std::to_string(i) + ")");
        }
        std::vector<double> x(dim);
        for (std::size_t p = 0; p < dim; ++p) x[p] = pixel_buf[p] / 255.0;
        ds.features.push_back(std::move(x));

        char c;
        if (!lab.get(c)) {
            throw FormatError(labels_path + ": truncated at offset " + std::to_string(8 + i));
        }
        int y = static_cast<unsigned char>(c);
        if (y > 9) {
            throw FormatError(labels_path + ": label " + std::to_string(y) + " at record " +
                              std::to_string(i) + " outside [0, 9]");
        }
        ds.clean_labels.push_back(y);
    }
    ds.noisy_labels = ds.clean_labels;
    return ds;
}

BlobSplits synth_blobs(int k, int per_class, int dim, double spread, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("synth_blobs: k must be >= 2");
    if (per_class < 1) throw std::invalid_argument("synth_blobs: per_class must be >= 1");
    if (dim < 2) throw std::invalid_argument("synth_blobs: dim must be >= 2");
    if (spread < 0.0) throw std::invalid_argument("synth_blobs: spread must be >= 0");

    constexpr double kRadius = 2.0;
    std::vector<std::vector<double>> means(k, std::vector<double>(dim, 0.0));
    for (int c = 0; c < k; ++c) {
        double angle = 2.0 * 3.14159265358979323846 * c / k;
        means[c][0] = kRadius * std::cos(angle);
        means[c][1] = kRadius * std::sin(angle);
    }

    Rng point_rng(seed, "blob-points");
    std::size_t total = std::size_t(k) * per_class;
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    features.reserve(total);
    labels.reserve(total);
    for (int c = 0; c < k; ++c) {
        for (int i = 0; i < per_class; ++i) {
            std::vector<double> x(dim);
            for (int d = 0; d < dim; ++d) x[d] = means[c][d] + spread * point_rng.gaussian();
            features.push_back(std::move(x));
            labels.push_back(c);
        }
    }

    std::vector<int> order(total);
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng(seed, "blob-split");
    split_rng.shuffle(order);

    std::size_t n_train = total * 7 / 10;
    std::size_t n_val = total / 10;

    auto section = [&](std::size_t begin, std::size_t end, Split split) {
        NoisyDataset ds;
        ds.split = split;
        ds.class_count = k;
        ds.provenance.source = "blobs";
        ds.provenance.noise_kind = "none";
        ds.provenance.seed = seed;
        ds.features.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) {
            ds.features.push_back(features[order[i]]);
            ds.clean_labels.push_back(labels[order[i]]);
        }
        ds.noisy_labels = ds.clean_labels;
        return ds;
    };

    BlobSplits out;
    out.train = section(0, n_train, Split::Train);
    out.validation = section(n_train, n_train + n_val, Split::Validation);
    out.test = section(n_train + n_val, total, Split::Test);
    return out;
}

double accuracy_against(const Network& net, const NoisyDataset& ds,
                        const std::vector<int>& labels) {
    if (ds.size() == 0) throw std::invalid_argument("accuracy: empty dataset");
    if (labels.size() != ds.size()) {
        throw std::invalid_argument("accuracy: label count does not match dataset");
    }
    std::size_t correct = 0;
    ForwardCache cache;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        std::vector<double> logits = forward_cached(net, ds.features[i], cache);
        int best = 0;
        for (int c = 1; c < static_cast<int>(logits.size()); ++c) {
            if (logits[c] > logits[best]) best = c;
        }
        if (best == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(ds.size());
}

double test_accuracy(const Network& net, const NoisyDataset& test_split) {
    return accuracy_against(net, test_split, test_split.clean_labels);
}

}  // namespace pumpout
