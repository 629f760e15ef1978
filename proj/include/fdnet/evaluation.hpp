#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdnet/dynamic_network.hpp"
#include "fdnet/model.hpp"
#include "fdnet/parallel.hpp"
#include "fdnet/spline_basis.hpp"
#include "fdnet/trainer.hpp"

namespace fdnet {

// F1 of the positive class; 0 when precision+recall is 0.
inline double f1_score(const std::vector<bool>& predictions, const std::vector<bool>& truths) {
    if (predictions.empty() || predictions.size() != truths.size())
        throw std::invalid_argument("f1_score: inputs must be nonempty and equal length");
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] && truths[i]) ++tp;
        else if (predictions[i]) ++fp;
        else if (truths[i]) ++fn;
    }
    if (2 * tp + fp + fn == 0) return 0.0;
    return 2.0 * tp / static_cast<double>(2 * tp + fp + fn);
}

// Chance-corrected partition agreement from the contingency table. A zero
// denominator (both labelings trivial) counts as perfect agreement.
inline double adjusted_rand_index(const std::vector<int>& labels_a,
                                  const std::vector<int>& labels_b) {
    if (labels_a.empty() || labels_a.size() != labels_b.size())
        throw std::invalid_argument("adjusted_rand_index: inputs must be nonempty and equal length");
    auto remap = [](const std::vector<int>& v) {
        std::map<int, int> ids;
        std::vector<int> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] = ids.try_emplace(v[i], static_cast<int>(ids.size())).first->second;
        return out;
    };
    std::vector<int> a = remap(labels_a), b = remap(labels_b);
    int ka = *std::max_element(a.begin(), a.end()) + 1;
    int kb = *std::max_element(b.begin(), b.end()) + 1;
    std::vector<std::vector<long>> table(ka, std::vector<long>(kb, 0));
    for (std::size_t i = 0; i < a.size(); ++i) ++table[a[i]][b[i]];
    auto choose2 = [](long m) { return 0.5 * m * (m - 1); };
    double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (int i = 0; i < ka; ++i) {
        long row = 0;
        for (int j = 0; j < kb; ++j) {
            sum_cells += choose2(table[i][j]);
            row += table[i][j];
        }
        sum_rows += choose2(row);
    }
    for (int j = 0; j < kb; ++j) {
        long col = 0;
        for (int i = 0; i < ka; ++i) col += table[i][j];
        sum_cols += choose2(col);
    }
    double expected = sum_rows * sum_cols / choose2(static_cast<long>(a.size()));
    double maximum = 0.5 * (sum_rows + sum_cols);
    if (maximum - expected == 0.0) return 1.0;
    return (sum_cells - expected) / (maximum - expected);
}

// Mean-over-time-points F1 of held-out entries: per time point with test
// entries, score predictions p >= threshold against the recorded truths,
// then average the per-time F1 values.
inline double holdout_f1(const EmbeddingModel& model, const DynamicNetwork& net,
                         const std::vector<TestEntry>& entries, double threshold) {
    std::map<int, std::pair<std::vector<bool>, std::vector<bool>>> by_time;
    for (const auto& e : entries) {
        double p = link_probability(model, e.src, e.dst, net.times[e.time_index]);
        auto& [preds, truths] = by_time[e.time_index];
        preds.push_back(p >= threshold);
        truths.push_back(e.truth != 0);
    }
    if (by_time.empty()) return 0.0;
    double total = 0.0;
    for (const auto& [i, pair] : by_time) total += f1_score(pair.first, pair.second);
    return total / static_cast<double>(by_time.size());
}

// F1 of the full off-diagonal snapshot at one time point.
inline double snapshot_f1(const EmbeddingModel& model, const DynamicNetwork& net, int time_index,
                          double threshold) {
    const int M = net.num_nodes();
    LinkPrediction pred = predict_links(model, net.times[time_index], threshold);
    std::vector<bool> preds, truths;
    preds.reserve(M * (M - 1));
    truths.reserve(M * (M - 1));
    for (int j = 0; j < M; ++j)
        for (int k = 0; k < M; ++k) {
            if (j == k) continue;
            preds.push_back(pred.links(j, k) != 0);
            truths.push_back(net.snapshots[time_index](j, k) != 0);
        }
    return f1_score(preds, truths);
}

struct EvalConfig {
    TrainConfig train;
    int R = 6;
    int D = 6;
    int degree = 3;
    int L_out = 4;
    int L_in = 5;
    double threshold = 0.5;
};

struct HoldoutRep {
    double fraction;
    int rep;
    double f1;
};

struct HoldoutRow {
    double fraction;
    double mean_f1;
    double sd_f1;
};

struct HoldoutResult {
    std::vector<HoldoutRow> summary;   // one row per fraction
    std::vector<HoldoutRep> per_rep;   // fraction-major, rep-minor
};

namespace seed_stream {
constexpr std::uint64_t eval_split = 0x51;
constexpr std::uint64_t eval_fit = 0x52;
}  // namespace seed_stream

namespace detail {

template <typename SplitFn>
HoldoutResult run_holdout(const DynamicNetwork& net, const std::vector<double>& fractions,
                          int reps, const EvalConfig& config, std::uint64_t seed,
                          SplitFn&& make_split) {
    if (fractions.empty()) throw std::invalid_argument("run_holdout: no fractions");
    if (reps < 1) throw std::invalid_argument("run_holdout: reps must be positive");
    BasisSystem basis = make_basis(1.0, config.D, config.degree);
    const std::size_t total = fractions.size() * static_cast<std::size_t>(reps);
    std::vector<double> f1(total, 0.0);
    std::vector<std::string> failure(total);
    // Replicates are independent; fits inside a parallel sweep run
    // single-threaded to keep one level of parallelism.
    parallel_for(total, config.train.threads, [&](std::size_t task) {
        std::size_t fi = task / reps;
        int rep = static_cast<int>(task % reps);
        std::uint64_t frac_split = derive_seed(derive_seed(seed, seed_stream::eval_split), fi);
        std::uint64_t frac_fit = derive_seed(derive_seed(seed, seed_stream::eval_fit), fi);
        try {
            HoldoutSplit split = make_split(net, fractions[fi],
                                            derive_seed(frac_split, static_cast<std::uint64_t>(rep)));
            TrainConfig tc = config.train;
            tc.seed = derive_seed(frac_fit, static_cast<std::uint64_t>(rep));
            tc.threads = 1;
            auto [model, report] =
                fit(split.train, tc, config.R, basis, config.L_out, config.L_in);
            f1[task] = holdout_f1(model, split.train, split.test_entries, config.threshold);
        } catch (const std::exception& ex) {
            failure[task] = ex.what();
        }
    });
    for (std::size_t task = 0; task < total; ++task)
        if (!failure[task].empty())
            throw std::runtime_error("holdout rep " + std::to_string(task % reps) + " at fraction " +
                                     std::to_string(fractions[task / reps]) + " failed: " +
                                     failure[task]);
    HoldoutResult out;
    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
        double mean = 0.0;
        for (int r = 0; r < reps; ++r) {
            double v = f1[fi * reps + r];
            out.per_rep.push_back({fractions[fi], r, v});
            mean += v;
        }
        mean /= reps;
        double var = 0.0;
        for (int r = 0; r < reps; ++r) {
            double d = f1[fi * reps + r] - mean;
            var += d * d;
        }
        double sd = reps > 1 ? std::sqrt(var / (reps - 1)) : 0.0;
        out.summary.push_back({fractions[fi], mean, sd});
    }
    return out;
}

}  // namespace detail

// Table 1 protocol: per-time link holdout, fit on the reduced mask, score
// held-out entries at threshold, mean/sd over replicates per fraction.
inline HoldoutResult run_link_holdout(const DynamicNetwork& net,
                                      const std::vector<double>& fractions, int reps,
                                      const EvalConfig& config, std::uint64_t seed) {
    return detail::run_holdout(net, fractions, reps, config, seed,
                               [](const DynamicNetwork& n, double f, std::uint64_t s) {
                                   return hold_out_links(n, f, s);
                               });
}

// Interpolation protocol: entire interior time points held out; prediction
// scores the full snapshots at those never-trained times.
inline HoldoutResult run_timepoint_holdout(const DynamicNetwork& net,
                                           const std::vector<double>& fractions, int reps,
                                           const EvalConfig& config, std::uint64_t seed) {
    return detail::run_holdout(net, fractions, reps, config, seed,
                               [](const DynamicNetwork& n, double f, std::uint64_t s) {
                                   return hold_out_timepoints(n, f, s);
                               });
}

// Observed total degree per snapshot.
inline std::vector<double> degree_trajectory(const DynamicNetwork& net) {
    std::vector<double> out;
    out.reserve(net.num_times());
    for (const auto& A : net.snapshots) out.push_back(static_cast<double>(A.sum()));
    return out;
}

// Estimated total connectivity sum_{j != k} p_jk(t) on a grid.
inline std::vector<double> estimated_connectivity(const EmbeddingModel& model,
                                                  const std::vector<double>& grid) {
    const int M = model.num_nodes();
    std::vector<double> out;
    out.reserve(grid.size());
    for (double t : grid) {
        Eigen::VectorXd phi = eval_basis(model.basis, t);
        Eigen::MatrixXd alpha(M, model.embedding_dim);
        for (int j = 0; j < M; ++j) alpha.row(j) = (model.gamma[j] * phi).transpose();
        Eigen::MatrixXd etas = alpha * model.beta.transpose();
        double total = 0.0;
        for (int j = 0; j < M; ++j)
            for (int k = 0; k < M; ++k)
                if (j != k) total += sigmoid(etas(j, k));
        out.push_back(total);
    }
    return out;
}

}  // namespace fdnet
