#include "pumpout/schedule_select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pumpout {

double keep_rate(int epoch, const KeepSchedule& schedule) {
    if (epoch < 1) throw std::invalid_argument("keep_rate: epochs are 1-indexed");
    if (schedule.tau < 0.0 || schedule.tau >= 1.0 || schedule.warmup_epochs < 1) {
        throw std::invalid_argument("keep_rate: need 0 <= tau < 1 and warmup_epochs >= 1");
    }
    double ramp = schedule.tau * static_cast<double>(epoch) /
                  static_cast<double>(schedule.warmup_epochs);
    return 1.0 - std::min(ramp, schedule.tau);
}

SelectionSet select_small_loss(const std::vector<double>& losses, double rate) {
    if (losses.empty()) throw std::invalid_argument("select_small_loss: empty batch");
    if (!(rate > 0.0) || rate > 1.0) {
        throw std::invalid_argument("select_small_loss: rate must be in (0, 1]");
    }
    int b = static_cast<int>(losses.size());
    int keep = static_cast<int>(std::ceil(rate * static_cast<double>(b)));
    keep = std::min(keep, b);

    std::vector<int> order(losses.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int c) {
        if (losses[a] != losses[c]) return losses[a] < losses[c];
        return a < c;
    });

    SelectionSet sel;
    sel.keep_count = keep;
    sel.indices.assign(order.begin(), order.begin() + keep);
    std::sort(sel.indices.begin(), sel.indices.end());
    return sel;
}

double label_precision(const SelectionSet& selected, const std::vector<bool>& clean_mask) {
    if (selected.indices.empty()) {
        throw std::invalid_argument("label_precision: empty selection");
    }
    int clean = 0;
    for (int i : selected.indices) {
        if (i < 0 || static_cast<std::size_t>(i) >= clean_mask.size()) {
            throw std::invalid_argument("label_precision: selection index outside mask");
        }
        if (clean_mask[i]) ++clean;
    }
    return static_cast<double>(clean) / static_cast<double>(selected.indices.size());
}

}  // namespace pumpout
