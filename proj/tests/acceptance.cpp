// Acceptance suite: one criterion per entry, one pass/fail line each.
// Exit status: 0 all passed (or skipped), 1 any failure, 77 when the only
// requested criteria were skipped for missing data.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/stat.h>
#include <vector>

#include "pumpout/correction.hpp"
#include "pumpout/dataset.hpp"
#include "pumpout/experiment.hpp"
#include "pumpout/noise.hpp"
#include "pumpout/rng.hpp"
#include "pumpout/schedule_select.hpp"
#include "pumpout/trainers.hpp"

using namespace pumpout;

namespace {

struct Failure {
    std::string message;
};

struct Skip {
    std::string reason;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw Failure{message};
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

bool file_exists(const std::string& path) {
    struct stat st;
    return ::stat(path.c_str(), &st) == 0;
}

double max_param_diff(const Network& a, const Network& b) {
    double m = 0.0;
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        for (std::size_t i = 0; i < a.layers[l].weights.data.size(); ++i) {
            m = std::max(m, std::fabs(a.layers[l].weights.data[i] - b.layers[l].weights.data[i]));
        }
        for (std::size_t i = 0; i < a.layers[l].bias.size(); ++i) {
            m = std::max(m, std::fabs(a.layers[l].bias[i] - b.layers[l].bias[i]));
        }
    }
    return m;
}

LossVector random_loss_vector(Rng& rng, int k) {
    std::vector<double> logits(k);
    for (double& v : logits) v = rng.uniform(-5.0, 5.0);
    return loss_vector(logits);
}

// ---- desk-scale experiment plumbing -------------------------------------

// Pinned setup shared by criteria 8-10: 5 classes, 5000 blob points split
// 3500/500/1000, MLP 64-64, Adam lr 0.001, B=128, 100 epochs. 16-dim blobs
// with spread 0.7 leave the clusters learnable while giving the net enough
// room to memorize individual noisy labels, which is the effect under test.
RunConfig desk_config(Algorithm alg, const char* noise_type, double rate, std::uint64_t seed) {
    RunConfig cfg;
    cfg.source = "blobs";
    cfg.classes = 5;
    cfg.per_class = 1000;
    cfg.dim = 16;
    cfg.spread = 0.7;
    cfg.data_seed = seed;
    cfg.noise_type = noise_type;
    cfg.noise_rate = rate;
    cfg.train.algorithm = alg;
    cfg.train.gamma = 0.05;
    cfg.train.batch_size = 128;
    cfg.train.learning_rate = 0.001;
    cfg.train.max_epochs = 100;
    cfg.train.tau = rate;
    cfg.train.optimizer = OptimizerKind::Adam;
    cfg.train.seed = seed;
    cfg.train.hidden = {64, 64};
    cfg.name = algorithm_name(alg);
    return cfg;
}

// ---- criteria ------------------------------------------------------------

void criterion_unbiasedness(std::vector<std::string>& notes) {
    std::vector<TransitionMatrix> channels;
    channels.push_back(TransitionMatrix::pair_flip(5, 0.45));
    channels.push_back(TransitionMatrix::symmetry_flip(5, 0.5));
    channels.push_back(TransitionMatrix::symmetry_flip(5, 0.2));

    double worst = 0.0;
    Rng rng(1001);
    for (const auto& t : channels) {
        for (int trial = 0; trial < 100; ++trial) {
            LossVector lv = random_loss_vector(rng, 5);
            for (double r : unbiasedness_residual(lv, t)) worst = std::max(worst, std::fabs(r));
        }
    }
    require(worst < 1e-10, "max |residual| = " + fmt("%.3e", worst) + " >= 1e-10");
    notes.push_back("max |residual| " + fmt("%.3e", worst) + " over 300 loss vectors x 3 channels");
}

void criterion_nonnegativity(std::vector<std::string>& notes) {
    Rng rng(2002);
    int violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        int k = 2 + static_cast<int>(rng.below(7));
        double cap = 0.9 * (k - 1) / static_cast<double>(k);  // stay clear of the singular point
        TransitionMatrix t = trial % 2 == 0
                                 ? TransitionMatrix::pair_flip(k, rng.uniform(0.0, 0.49))
                                 : TransitionMatrix::symmetry_flip(k, rng.uniform(0.0, cap));
        LossVector lv = random_loss_vector(rng, k);
        int y = static_cast<int>(rng.below(k));
        if (!(nn_backward_loss(lv, y, t.inverse()) >= 0.0)) ++violations;
    }
    require(violations == 0, std::to_string(violations) + " negative corrected losses out of 10000");
    notes.push_back("0 violations over 10000 random (loss, label, channel) draws");
}

void criterion_gradient_oracle(std::vector<std::string>& notes) {
    Rng rng(3003);
    auto rel = [](double a, double b) {
        return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
    };
    auto max_rel = [&](const GradientSet& a, const GradientSet& b) {
        double m = 0.0;
        for (std::size_t l = 0; l < a.layers.size(); ++l) {
            for (std::size_t i = 0; i < a.layers[l].weights.data.size(); ++i) {
                m = std::max(m, rel(a.layers[l].weights.data[i], b.layers[l].weights.data[i]));
            }
            for (std::size_t i = 0; i < a.layers[l].bias.size(); ++i) {
                m = std::max(m, rel(a.layers[l].bias[i], b.layers[l].bias[i]));
            }
        }
        return m;
    };

    Mat t_inv = TransitionMatrix::pair_flip(4, 0.45).inverse();
    double worst_plain = 0.0, worst_corrected = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Activation act = trial % 2 == 0 ? Activation::Softsign : Activation::LeakyRelu;
        Network net = make_mlp(3, {6, 5}, 4, 4000 + trial, act);
        std::vector<WeightedExample> batch(5);
        for (auto& ex : batch) {
            ex.x = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
            ex.label = static_cast<int>(rng.below(4));
            ex.weight = rng.uniform() < 0.5 ? 1.0 : -0.05;
        }

        GradientSet plain = backprop_weighted(net, batch);
        GradientSet plain_fd = finite_diff_gradient(
            net,
            [&](const Network& n) {
                double s = 0.0;
                for (const auto& ex : batch) s += ex.weight * sample_loss(n, ex.x, ex.label);
                return s / static_cast<double>(batch.size());
            },
            1e-5);
        worst_plain = std::max(worst_plain, max_rel(plain, plain_fd));

        GradientSet corrected = backprop_weighted_corrected(net, batch, t_inv);
        GradientSet corrected_fd = finite_diff_gradient(
            net,
            [&](const Network& n) {
                double s = 0.0;
                for (const auto& ex : batch) {
                    auto lv = loss_vector(forward(n, ex.x));
                    double c = 0.0;
                    for (int j = 0; j < 4; ++j) c += t_inv(ex.label, j) * lv.entries[j];
                    s += ex.weight * c;
                }
                return s / static_cast<double>(batch.size());
            },
            1e-5);
        worst_corrected = std::max(worst_corrected, max_rel(corrected, corrected_fd));
    }
    require(worst_plain < 1e-4, "plain gradient rel err " + fmt("%.3e", worst_plain));
    require(worst_corrected < 1e-4, "corrected gradient rel err " + fmt("%.3e", worst_corrected));
    notes.push_back("20 nets: plain " + fmt("%.2e", worst_plain) + ", corrected " +
                    fmt("%.2e", worst_corrected) + " (tolerance 1e-4)");
}

void criterion_reduction_laws(std::vector<std::string>& notes) {
    BlobSplits splits = synth_blobs(5, 100, 2, 0.4, 77);
    NoisyDataset train = splits.train;
    TransitionMatrix sym = TransitionMatrix::symmetry_flip(5, 0.5);
    train.noisy_labels = corrupt(train.clean_labels, sym, derive_seed(77, "noise"));

    TrainConfig cfg;
    cfg.batch_size = 32;
    cfg.learning_rate = 0.01;
    cfg.max_epochs = 5;
    cfg.tau = 0.5;
    cfg.hidden = {16};
    cfg.seed = 4242;

    // PumpoutSL(gamma=0) == MentorNetLite
    TrainConfig sl = cfg;
    sl.gamma = 0.0;
    double d1 = max_param_diff(train_pumpout_sl(sl, train, splits.test).final_net,
                               train_mentornet_lite(cfg, train, splits.test).final_net);
    require(d1 <= 1e-12, "pumpout_sl(0) vs mentornet diff " + fmt("%.3e", d1));

    // PumpoutBC(gamma=0) == NnBC
    TransitionMatrix pair = TransitionMatrix::pair_flip(5, 0.45);
    NoisyDataset pair_train = splits.train;
    pair_train.noisy_labels = corrupt(pair_train.clean_labels, pair, derive_seed(77, "pnoise"));
    TrainConfig pbc = cfg;
    pbc.gamma = 0.0;
    pbc.tau = 0.45;
    TrainConfig nn = cfg;
    nn.tau = 0.45;
    double d2 = max_param_diff(train_pumpout_bc(pbc, pair_train, splits.test, pair).final_net,
                               train_nnbc(nn, pair_train, splits.test, pair).final_net);
    require(d2 <= 1e-12, "pumpout_bc(0) vs nnbc diff " + fmt("%.3e", d2));

    // PumpoutBC(T=I) == Standard on the uncorrupted set
    TrainConfig clean = cfg;
    clean.tau = 0.0;
    clean.gamma = 0.05;
    double d3 = max_param_diff(
        train_pumpout_bc(clean, splits.train, splits.test, TransitionMatrix::identity(5)).final_net,
        train_standard(clean, splits.train, splits.test).final_net);
    require(d3 <= 1e-12, "pumpout_bc(T=I) vs standard diff " + fmt("%.3e", d3));

    // pumpout_epoch with an all-fitting predicate == Standard
    TrainConfig std_cfg = cfg;
    std_cfg.tau = 0.5;
    TrainResult standard = train_standard(std_cfg, train, splits.test);
    Network net = make_mlp(train.feature_dim(), cfg.hidden, 5, cfg.seed);
    OptimizerState opt = make_optimizer(cfg.optimizer, cfg.learning_rate, net);
    Rng shuffle_rng(cfg.seed, "epoch-shuffle");
    std::vector<int> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    FittingPredicate always = [](const std::vector<LossVector>& lvs, const std::vector<int>&,
                                 int) { return std::vector<bool>(lvs.size(), true); };
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        pumpout_epoch(net, opt, train.features, train.noisy_labels, order, always, cfg.gamma,
                      cfg.batch_size, epoch);
    }
    double d4 = max_param_diff(net, standard.final_net);
    require(d4 <= 1e-12, "all-fitting epoch vs standard diff " + fmt("%.3e", d4));

    notes.push_back("max parameter diffs: " + fmt("%.1e", d1) + ", " + fmt("%.1e", d2) + ", " +
                    fmt("%.1e", d3) + ", " + fmt("%.1e", d4) + " (all <= 1e-12 over 5 epochs)");
}

void criterion_per_sample_loop(std::vector<std::string>& notes) {
    Rng rng(5005);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Network net = make_mlp(4, {6}, 3, 5100 + trial);
        std::vector<WeightedExample> batch(8);
        for (auto& ex : batch) {
            ex.x = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                    rng.uniform(-2.0, 2.0)};
            ex.label = static_cast<int>(rng.below(3));
            ex.weight = rng.uniform() < 0.5 ? 1.0 : -0.05;
        }
        GradientSet batched = backprop_weighted(net, batch);

        GradientSet loop = make_gradient_set(net);
        for (const auto& ex : batch) {
            GradientSet g = backprop_weighted(net, {{ex.x, ex.label, 1.0}});
            for (std::size_t l = 0; l < loop.layers.size(); ++l) {
                for (std::size_t i = 0; i < loop.layers[l].weights.data.size(); ++i) {
                    loop.layers[l].weights.data[i] += ex.weight * g.layers[l].weights.data[i];
                }
                for (std::size_t i = 0; i < loop.layers[l].bias.size(); ++i) {
                    loop.layers[l].bias[i] += ex.weight * g.layers[l].bias[i];
                }
            }
        }
        loop.scale(1.0 / static_cast<double>(batch.size()));

        for (std::size_t l = 0; l < loop.layers.size(); ++l) {
            for (std::size_t i = 0; i < loop.layers[l].weights.data.size(); ++i) {
                worst = std::max(worst, std::fabs(loop.layers[l].weights.data[i] -
                                                  batched.layers[l].weights.data[i]));
            }
            for (std::size_t i = 0; i < loop.layers[l].bias.size(); ++i) {
                worst = std::max(worst,
                                 std::fabs(loop.layers[l].bias[i] - batched.layers[l].bias[i]));
            }
        }
    }
    require(worst <= 1e-12, "max diff " + fmt("%.3e", worst));
    notes.push_back("max elementwise diff " + fmt("%.2e", worst) + " over 50 batches");
}

void criterion_schedule(std::vector<std::string>& notes) {
    require(keep_rate(1, {0.5, 10}) == 0.95, "keep_rate(1, tau=0.5) != 0.95");
    require(keep_rate(10, {0.5, 10}) == 0.5, "keep_rate(10, tau=0.5) != 0.5");
    require(keep_rate(150, {0.5, 10}) == 0.5, "keep_rate(150, tau=0.5) != 0.5");
    for (double tau : {0.2, 0.45, 0.5}) {
        KeepSchedule s{tau, 10};
        for (int t = 1; t <= 200; ++t) {
            double expect = 1.0 - std::min(tau * static_cast<double>(t) / 10.0, tau);
            require(keep_rate(t, s) == expect,
                    "keep_rate mismatch at t=" + std::to_string(t) + ", tau=" + fmt("%g", tau));
        }
    }
    notes.push_back("exact match for t in [1,200], tau in {0.2, 0.45, 0.5}, T_k = 10");
}

void criterion_noise_marginals(std::vector<std::string>& notes) {
    const int k = 5, per_class = 20000;
    std::vector<int> labels(static_cast<std::size_t>(k) * per_class);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % k);

    double worst = 0.0;
    for (const auto& t :
         {TransitionMatrix::pair_flip(k, 0.45), TransitionMatrix::symmetry_flip(k, 0.5)}) {
        auto noisy = corrupt(labels, t, 7007);
        std::vector<std::vector<int>> counts(k, std::vector<int>(k, 0));
        for (std::size_t i = 0; i < labels.size(); ++i) ++counts[labels[i]][noisy[i]];
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                double observed = static_cast<double>(counts[i][j]) / per_class;
                worst = std::max(worst, std::fabs(observed - t.entry(i, j)));
            }
        }
    }
    require(worst < 0.01, "worst marginal deviation " + fmt("%.4f", worst) + " >= 0.01");
    notes.push_back("worst per-entry deviation " + fmt("%.4f", worst) +
                    " on 100k labels per channel");
}

void criterion_selection_behavior(std::vector<std::string>& notes) {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        RunConfig cfg = desk_config(Algorithm::PumpoutSL, "symmetry", 0.5, seed);
        ExperimentResult r = run_experiment(cfg);
        double lp = r.epochs.back().label_precision.value_or(0.0);
        require(lp > 0.85, "seed " + std::to_string(seed) + ": final label precision " +
                               fmt("%.3f", lp) + " <= 0.85");
        require(lp > 0.55, "seed " + std::to_string(seed) + ": final label precision " +
                               fmt("%.3f", lp) + " does not clear the 0.5 background");
        notes.push_back("seed " + std::to_string(seed) + ": label precision " + fmt("%.3f", lp));
    }
}

void criterion_robustness_ordering(std::vector<std::string>& notes) {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        ExperimentResult sl =
            run_experiment(desk_config(Algorithm::PumpoutSL, "symmetry", 0.5, seed));
        ExperimentResult standard =
            run_experiment(desk_config(Algorithm::Standard, "symmetry", 0.5, seed));

        double sl_final = sl.final_test_accuracy;
        double std_final = standard.final_test_accuracy;
        double std_peak = 0.0;
        for (const auto& m : standard.epochs) std_peak = std::max(std_peak, m.test_accuracy);

        require(sl_final >= std_final + 0.05,
                "seed " + std::to_string(seed) + ": pumpout_sl " + fmt("%.3f", sl_final) +
                    " < standard " + fmt("%.3f", std_final) + " + 0.05");
        require(std_final <= std_peak - 0.03,
                "seed " + std::to_string(seed) + ": standard final " + fmt("%.3f", std_final) +
                    " has not fallen 3 points from its peak " + fmt("%.3f", std_peak));
        notes.push_back("seed " + std::to_string(seed) + ": pumpout_sl " + fmt("%.3f", sl_final) +
                        " vs standard " + fmt("%.3f", std_final) + " (peak " +
                        fmt("%.3f", std_peak) + ")");
    }
}

void criterion_correction_ordering(std::vector<std::string>& notes) {
    int wins = 0;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        RunConfig base = desk_config(Algorithm::PumpoutBC, "pair", 0.45, seed);
        SweepOutcome sweep = sweep_gamma(base, kDefaultGammaGrid);
        double pbc_final = 0.0;
        for (const auto& run : sweep.runs) {
            if (run.gamma == sweep.chosen_gamma) pbc_final = run.result.final_test_accuracy;
        }

        ExperimentResult nn = run_experiment(desk_config(Algorithm::NnBC, "pair", 0.45, seed));
        for (const auto& m : nn.epochs) {
            require(m.min_train_loss >= 0.0,
                    "seed " + std::to_string(seed) + ": nnbc clipped loss went negative");
        }

        bool win = pbc_final >= nn.final_test_accuracy;
        if (win) ++wins;
        notes.push_back("seed " + std::to_string(seed) + ": pumpout_bc(gamma=" +
                        fmt("%g", sweep.chosen_gamma) + ") " + fmt("%.3f", pbc_final) +
                        (win ? " >= " : " < ") + "nnbc " + fmt("%.3f", nn.final_test_accuracy));
    }
    require(wins >= 2, "pumpout_bc beat nnbc on only " + std::to_string(wins) + "/3 seeds");
}

std::string g_data_dir = "data";

void criterion_mnist_smoke(std::vector<std::string>& notes) {
    std::string dir = g_data_dir + "/mnist";
    std::string train_images = dir + "/train-images-idx3-ubyte";
    std::string train_labels = dir + "/train-labels-idx1-ubyte";
    std::string test_images = dir + "/t10k-images-idx3-ubyte";
    std::string test_labels = dir + "/t10k-labels-idx1-ubyte";
    for (const auto& p : {train_images, train_labels, test_images, test_labels}) {
        if (!file_exists(p)) {
            throw Skip{"MNIST IDX files not found under " + dir +
                       " (see README for how to provision them)"};
        }
    }

    NoisyDataset train = load_idx_mnist(train_images, train_labels, 10000);
    NoisyDataset test = load_idx_mnist(test_images, test_labels, 2000);
    test.split = Split::Test;
    notes.push_back("loaded " + std::to_string(train.size()) + " train / " +
                    std::to_string(test.size()) + " test records");

    TransitionMatrix sym = TransitionMatrix::symmetry_flip(10, 0.5);
    train.noisy_labels = corrupt(train.clean_labels, sym, derive_seed(1, "corrupt-train"));

    TrainConfig cfg;
    cfg.batch_size = 128;
    cfg.learning_rate = 0.001;
    cfg.max_epochs = 200;
    cfg.tau = 0.5;
    cfg.optimizer = OptimizerKind::Adam;
    cfg.gamma = 0.05;
    cfg.hidden = {64, 64};
    cfg.seed = 1;
    cfg.eval_interval = 5;

    TrainResult sl = train_pumpout_sl(cfg, train, test);
    TrainResult standard = train_standard(cfg, train, test);

    double sl_final = sl.epochs.back().test_accuracy;
    double std_final = standard.epochs.back().test_accuracy;
    require(sl_final >= std_final + 0.05, "pumpout_sl " + fmt("%.3f", sl_final) + " < standard " +
                                              fmt("%.3f", std_final) + " + 0.05");
    notes.push_back("pumpout_sl " + fmt("%.3f", sl_final) + " vs standard " +
                    fmt("%.3f", std_final) + " after 200 epochs, symmetry-50%");
}

struct Criterion {
    int id;
    const char* title;
    bool slow;
    std::function<void(std::vector<std::string>&)> body;
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> only;
    bool skip_slow = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--skip-slow") == 0) {
            skip_slow = true;
        } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string item;
            while (std::getline(ss, item, ',')) only.push_back(std::stoi(item));
        } else if (std::strcmp(argv[i], "--data-dir") == 0 && i + 1 < argc) {
            g_data_dir = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--skip-slow] [--only N,M,...] [--data-dir DIR]\n",
                         argv[0]);
            return 2;
        }
    }
    if (const char* env = std::getenv("PUMPOUT_DATA_DIR")) {
        if (g_data_dir == "data") g_data_dir = env;
    }

    std::vector<Criterion> criteria = {
        {1, "unbiasedness identity of the backward-corrected loss", false, criterion_unbiasedness},
        {2, "non-negative corrected loss never dips below zero", false, criterion_nonnegativity},
        {3, "backprop matches central finite differences", false, criterion_gradient_oracle},
        {4, "reduction laws hold bitwise over five epochs", false, criterion_reduction_laws},
        {5, "weighted-batch gradient equals the per-sample loop", false, criterion_per_sample_loop},
        {6, "keep-rate schedule matches the closed form exactly", false, criterion_schedule},
        {7, "corruption reproduces the channel marginals", false, criterion_noise_marginals},
        {8, "desk-scale: pumpout_sl keeps label precision high", false, criterion_selection_behavior},
        {9, "desk-scale: pumpout_sl beats standard, which decays", false, criterion_robustness_ordering},
        {10, "desk-scale: swept pumpout_bc matches or beats nnbc", false, criterion_correction_ordering},
        {11, "mnist subset smoke run (slow suite)", true, criterion_mnist_smoke},
    };

    int failed = 0, passed = 0, skipped = 0, ran = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        if (skip_slow && c.slow) continue;
        ++ran;

        std::vector<std::string> notes;
        auto start = std::chrono::steady_clock::now();
        const char* verdict;
        std::string detail;
        try {
            c.body(notes);
            verdict = "PASS";
            ++passed;
        } catch (const Skip& s) {
            verdict = "SKIP";
            detail = s.reason;
            ++skipped;
        } catch (const Failure& f) {
            verdict = "FAIL";
            detail = f.message;
            ++failed;
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = std::string("unexpected error: ") + e.what();
            ++failed;
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        std::printf("criterion %2d [%s] %s (%.2f s)\n", c.id, verdict, c.title, secs);
        for (const auto& n : notes) std::printf("              - %s\n", n.c_str());
        if (!detail.empty()) std::printf("              ! %s\n", detail.c_str());
        std::fflush(stdout);
    }

    std::printf("summary: %d passed, %d failed, %d skipped\n", passed, failed, skipped);
    if (failed > 0) return 1;
    if (ran > 0 && passed == 0 && skipped > 0) return 77;  // everything requested was skipped
    return 0;
}
