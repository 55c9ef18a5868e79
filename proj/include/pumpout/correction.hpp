#pragma once

#include <vector>

#include "pumpout/noise.hpp"
#include "pumpout/tensor_nn.hpp"

namespace pumpout {

/// Backward-corrected per-sample loss. raw may be negative; clipped is
/// max(0, raw); fitting holds exactly when raw >= 0.
struct CorrectedLoss {
    double raw = 0.0;
    double clipped = 0.0;
    bool fitting = true;
};

/// Row `label` of t_inverse dotted with the per-class loss vector: the
/// observed-label entry of T^-1 * loss. Can go negative.
double backward_loss(const LossVector& loss_vec, int label, const Mat& t_inverse);

/// max(0, backward_loss(...)); never negative.
double nn_backward_loss(const LossVector& loss_vec, int label, const Mat& t_inverse);

CorrectedLoss corrected_loss(const LossVector& loss_vec, int label, const Mat& t_inverse);

/// For each clean class i: sum_j T[i][j] * backward_loss(loss_vec, j, T^-1)
/// minus loss_vec[i]. Zero up to float error for any loss vector, since the
/// corrected loss is unbiased under the corruption channel.
std::vector<double> unbiasedness_residual(const LossVector& loss_vec, const TransitionMatrix& t);

}  // namespace pumpout
