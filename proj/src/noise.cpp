#include "pumpout/noise.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pumpout/common.hpp"
#include "pumpout/rng.hpp"

namespace pumpout {

Mat invert(const Mat& m) {
    if (m.rows != m.cols || m.rows < 1) {
        throw std::invalid_argument("invert: matrix must be square");
    }
    int n = m.rows;
    Mat a = m;
    Mat inv(n, n);
    for (int i = 0; i < n; ++i) inv(i, i) = 1.0;

    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
        }
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(a(col, c), a(pivot, c));
                std::swap(inv(col, c), inv(pivot, c));
            }
            det = -det;
        }
        double p = a(col, col);
        det *= p;
        if (std::fabs(p) < 1e-300) throw NumericError("invert: singular matrix (zero pivot)");
        double ip = 1.0 / p;
        for (int c = 0; c < n; ++c) {
            a(col, c) *= ip;
            inv(col, c) *= ip;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a(r, col);
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    if (std::fabs(det) <= 1e-9) {
        throw NumericError("invert: matrix is singular or ill-conditioned (|det| <= 1e-9)");
    }
    return inv;
}

TransitionMatrix::TransitionMatrix(Mat entries, NoiseKind kind, double tau)
    : entries_(std::move(entries)), kind_(kind), tau_(tau) {
    int k = entries_.rows;
    if (k < 2 || entries_.cols != k) {
        throw std::invalid_argument("transition matrix must be square with k >= 2");
    }
    for (int i = 0; i < k; ++i) {
        double sum = 0.0;
        for (int j = 0; j < k; ++j) {
            double v = entries_(i, j);
            if (!(v >= 0.0)) {
                throw std::domain_error("transition matrix entry (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") is negative or NaN");
            }
            sum += v;
        }
        if (std::fabs(sum - 1.0) > 1e-12) {
            throw std::domain_error("transition matrix row " + std::to_string(i) +
                                    " sums to " + std::to_string(sum) + ", not 1");
        }
    }
    inverse_ = invert(entries_);
}

TransitionMatrix TransitionMatrix::pair_flip(int k, double tau, bool allow_extreme) {
    if (k < 2) throw std::invalid_argument("pair_flip: k must be >= 2");
    if (tau < 0.0 || tau >= 1.0) throw std::domain_error("pair_flip: tau must be in [0, 1)");
    if (tau >= 0.5 && !allow_extreme) {
        throw std::domain_error("pair_flip: tau >= 0.5 flips the majority of every class; "
                                "pass allow_extreme to experiment anyway");
    }
    Mat m(k, k);
    for (int i = 0; i < k; ++i) {
        m(i, i) = 1.0 - tau;
        m(i, (i + 1) % k) = tau;
    }
    return TransitionMatrix(std::move(m), NoiseKind::Pair, tau);
}

TransitionMatrix TransitionMatrix::symmetry_flip(int k, double tau) {
    if (k < 2) throw std::invalid_argument("symmetry_flip: k must be >= 2");
    if (tau < 0.0 || tau >= 1.0) throw std::domain_error("symmetry_flip: tau must be in [0, 1)");
    // The channel is singular exactly at tau = (k-1)/k (every row uniform).
    double singular_at = static_cast<double>(k - 1) / static_cast<double>(k);
    if (tau >= singular_at) {
        throw std::domain_error("symmetry_flip: tau must stay below (k-1)/k = " +
                                std::to_string(singular_at));
    }
    Mat m(k, k);
    double off = tau / static_cast<double>(k - 1);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) m(i, j) = (i == j) ? 1.0 - tau : off;
    }
    return TransitionMatrix(std::move(m), NoiseKind::Symmetry, tau);
}

TransitionMatrix TransitionMatrix::identity(int k) {
    if (k < 2) throw std::invalid_argument("identity: k must be >= 2");
    Mat m(k, k);
    for (int i = 0; i < k; ++i) m(i, i) = 1.0;
    return TransitionMatrix(std::move(m), NoiseKind::Custom, 0.0);
}

TransitionMatrix TransitionMatrix::custom(Mat entries, double tau) {
    return TransitionMatrix(std::move(entries), NoiseKind::Custom, tau);
}

TransitionMatrix TransitionMatrix::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("transition matrix file not found: " + path);
    int k = 0;
    if (!(in >> k) || k < 2) {
        throw FormatError(path + ": first line must hold the class count k >= 2");
    }
    Mat m(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            if (!(in >> m(i, j))) {
                throw FormatError(path + ": expected " + std::to_string(k * k) +
                                  " entries, failed at row " + std::to_string(i) +
                                  " column " + std::to_string(j));
            }
        }
    }
    return TransitionMatrix::custom(std::move(m));
}

std::vector<int> corrupt(const std::vector<int>& labels, const TransitionMatrix& t,
                         std::uint64_t seed) {
    int k = t.class_count();
    Rng rng(seed, "label-corrupt");
    std::vector<int> noisy(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        int y = labels[i];
        if (y < 0 || y >= k) throw std::invalid_argument("corrupt: label out of range");
        double u = rng.uniform();
        double cum = 0.0;
        int drawn = k - 1;  // absorb fp slack in the last class
        for (int j = 0; j < k; ++j) {
            cum += t.entry(y, j);
            if (u < cum) {
                drawn = j;
                break;
            }
        }
        noisy[i] = drawn;
    }
    return noisy;
}

}  // namespace pumpout
