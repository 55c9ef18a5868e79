#pragma once

#include <vector>

namespace pumpout {

/// Keep-rate schedule R(t) = 1 - min(tau * t / warmup_epochs, tau): starts
/// near 1, decays linearly over the warm-up window, then stays at 1 - tau.
struct KeepSchedule {
    double tau = 0.0;
    int warmup_epochs = 10;
};

/// epoch is 1-indexed. Non-increasing in epoch; floor 1 - tau.
double keep_rate(int epoch, const KeepSchedule& schedule);

/// Indices of the smallest-loss members of a mini-batch, kept sorted
/// ascending; keep_count = ceil(rate * batch_size).
struct SelectionSet {
    std::vector<int> indices;
    int keep_count = 0;
};

/// Ties broken toward the lower index, so equal losses select stably.
SelectionSet select_small_loss(const std::vector<double>& losses, double rate);

/// Fraction of selected samples whose noisy label matches the clean one.
/// clean_mask[i] says whether batch position i is uncorrupted.
double label_precision(const SelectionSet& selected, const std::vector<bool>& clean_mask);

}  // namespace pumpout
