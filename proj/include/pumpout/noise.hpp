#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pumpout/tensor_nn.hpp"

namespace pumpout {

enum class NoiseKind { Pair, Symmetry, Custom };

/// Exact inverse via Gauss-Jordan elimination with partial pivoting.
/// Throws NumericError when |det| <= 1e-9.
Mat invert(const Mat& m);

/// Row-stochastic label corruption channel T, T[i][j] = Pr(noisy = j | clean = i),
/// with its inverse cached for backward loss correction. Immutable after
/// construction; every constructor validates row sums, nonnegativity and
/// non-singularity.
class TransitionMatrix {
public:
    /// Diagonal 1-tau, entry (i, (i+1) mod k) = tau; the last class wraps to
    /// the first. Requires tau < 0.5 (above that the adjacent class holds the
    /// majority) unless allow_extreme is set.
    static TransitionMatrix pair_flip(int k, double tau, bool allow_extreme = false);

    /// Diagonal 1-tau, all off-diagonals tau/(k-1). Singular at tau = (k-1)/k.
    static TransitionMatrix symmetry_flip(int k, double tau);

    static TransitionMatrix identity(int k);

    /// Arbitrary entries, validated against the same invariants.
    static TransitionMatrix custom(Mat entries, double tau = 0.0);

    /// Plain-text file: first line k, then k rows of k decimals.
    static TransitionMatrix load(const std::string& path);

    int class_count() const { return entries_.rows; }
    double entry(int i, int j) const { return entries_(i, j); }
    const Mat& entries() const { return entries_; }
    const Mat& inverse() const { return inverse_; }
    NoiseKind kind() const { return kind_; }
    double tau() const { return tau_; }

private:
    TransitionMatrix(Mat entries, NoiseKind kind, double tau);

    Mat entries_;
    Mat inverse_;
    NoiseKind kind_;
    double tau_;
};

/// Independently resample each label from its row of T by inverse-CDF over a
/// dedicated stream seeded with `seed`; the same (labels, T, seed) always
/// yields the same output.
std::vector<int> corrupt(const std::vector<int>& labels, const TransitionMatrix& t,
                         std::uint64_t seed);

}  // namespace pumpout
