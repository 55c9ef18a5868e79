#include "pumpout/correction.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pumpout {

double backward_loss(const LossVector& loss_vec, int label, const Mat& t_inverse) {
    int k = t_inverse.rows;
    if (t_inverse.cols != k || static_cast<int>(loss_vec.entries.size()) != k) {
        throw std::invalid_argument("backward_loss: loss vector length and matrix shape disagree");
    }
    if (label < 0 || label >= k) {
        throw std::invalid_argument("backward_loss: label " + std::to_string(label) +
                                    " outside [0, " + std::to_string(k) + ")");
    }
    const double* row = t_inverse.row(label);
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += row[j] * loss_vec.entries[j];
    return s;
}

double nn_backward_loss(const LossVector& loss_vec, int label, const Mat& t_inverse) {
    return std::max(0.0, backward_loss(loss_vec, label, t_inverse));
}

CorrectedLoss corrected_loss(const LossVector& loss_vec, int label, const Mat& t_inverse) {
    CorrectedLoss c;
    c.raw = backward_loss(loss_vec, label, t_inverse);
    c.clipped = std::max(0.0, c.raw);
    c.fitting = c.raw >= 0.0;
    return c;
}

std::vector<double> unbiasedness_residual(const LossVector& loss_vec, const TransitionMatrix& t) {
    int k = t.class_count();
    std::vector<double> corrected(k);
    for (int j = 0; j < k; ++j) corrected[j] = backward_loss(loss_vec, j, t.inverse());
    std::vector<double> residual(k);
    for (int i = 0; i < k; ++i) {
        double expectation = 0.0;
        for (int j = 0; j < k; ++j) expectation += t.entry(i, j) * corrected[j];
        residual[i] = expectation - loss_vec.entries[i];
    }
    return residual;
}

}  // namespace pumpout
