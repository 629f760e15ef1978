#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fdnet/dynamic_network.hpp"
#include "fdnet/kmeans.hpp"
#include "fdnet/model.hpp"
#include "fdnet/parallel.hpp"

namespace fdnet {

struct TrainConfig {
    Penalties penalties;
    double lr_alpha = 0.05;  // a_alpha
    double lr_beta = 0.05;   // a_beta
    int max_iters = 200;
    double tol = 1e-6;  // relative objective-change stopping rule
    int kmeans_restarts = 10;
    int kmeans_every = 5;  // iterations between center refreshes
    std::uint64_t seed = 0;
    double init_scale = 0.1;
    unsigned threads = 1;  // 0 = all hardware threads
    bool verbose = false;
};

struct TrainReport {
    std::vector<double> objective_history;  // length = iterations_run + 1
    int iterations_run = 0;
    bool converged = false;
    ClusterState clusters;
    double final_objective = 0.0;
    double curvature_norm = 0.0;  // sum_j sum_r gamma_jr^T Phi2 gamma_jr
};

// Seed streams, all derived from the one configured seed.
namespace seed_stream {
constexpr std::uint64_t init_coeffs = 1;
constexpr std::uint64_t init_kmeans_out = 2;
constexpr std::uint64_t init_kmeans_in = 3;
constexpr std::uint64_t refresh_kmeans_out = 4;
constexpr std::uint64_t refresh_kmeans_in = 5;
}  // namespace seed_stream

// Random small-scale start: gamma then beta entries i.i.d.
// Normal(0, init_scale^2) in node order, followed by K-means on the drawn
// coefficients/vectors to seed the cluster state.
inline std::pair<EmbeddingModel, ClusterState> init_model(const DynamicNetwork& net, int R,
                                                          const BasisSystem& basis,
                                                          std::uint64_t seed, double init_scale,
                                                          int L_out, int L_in,
                                                          int kmeans_restarts = 10) {
    if (R < 1) throw std::invalid_argument("init_model: R must be positive");
    if (init_scale < 0.0) throw std::invalid_argument("init_model: init_scale must be nonnegative");
    const int M = net.num_nodes();
    if (L_out < 1 || L_out > M || L_in < 1 || L_in > M)
        throw std::invalid_argument("init_model: cluster count must lie in [1, M]");
    const int D = basis.num_basis;

    EmbeddingModel model = make_zero_model(basis, R, net.node_labels);
    Rng rng(derive_seed(seed, seed_stream::init_coeffs));
    for (int j = 0; j < M; ++j)
        for (int r = 0; r < R; ++r)
            for (int d = 0; d < D; ++d) model.gamma[j](r, d) = init_scale * rng.normal();
    for (int j = 0; j < M; ++j)
        for (int r = 0; r < R; ++r) model.beta(j, r) = init_scale * rng.normal();

    auto out = kmeans_functional(model.gamma, basis.gram, L_out, kmeans_restarts,
                                 derive_seed(seed, seed_stream::init_kmeans_out));
    auto in = kmeans_euclidean(model.beta, L_in, kmeans_restarts,
                               derive_seed(seed, seed_stream::init_kmeans_in));
    ClusterState clusters;
    clusters.theta = std::move(out.centers);
    clusters.zeta = std::move(in.centers);
    clusters.assign_out = std::move(out.assignments);
    clusters.assign_in = std::move(in.assignments);
    return {std::move(model), std::move(clusters)};
}

namespace detail {

// Objective split kept in both parts so cluster refreshes can swap the
// penalty without re-evaluating the likelihood.
struct ObjectiveParts {
    double log_lik = 0.0;
    double penalty = 0.0;
    double value() const { return log_lik - penalty; }
};

inline ObjectiveParts evaluate_objective(const EmbeddingModel& model, const DynamicNetwork& net,
                                         const Penalties& pen, const ClusterState& clusters,
                                         unsigned threads) {
    ObjectiveParts parts;
    parts.log_lik = log_likelihood(model, net, threads);
    parts.penalty = penalty_total(model, pen, clusters);
    return parts;
}

}  // namespace detail

// Alternating penalized ascent: a parallel gradient step on every gamma_j,
// then on every beta_j, with cluster centers refreshed by warm-started
// K-means every `kmeans_every` iterations. Each gradient step backtracks the
// learning rate (halving, at most 30 times, resuming one level above the
// depth last accepted) until the penalized objective does not decrease, so
// the recorded history is non-decreasing by construction. Stops when the
// relative objective change drops below tol or max_iters is reached.
inline std::pair<EmbeddingModel, TrainReport> fit(const DynamicNetwork& net,
                                                  const TrainConfig& config, int R,
                                                  const BasisSystem& basis, int L_out, int L_in) {
    if (!(config.lr_alpha > 0.0) || !(config.lr_beta > 0.0))
        throw std::invalid_argument("fit: learning rates must be positive");
    if (config.max_iters < 1) throw std::invalid_argument("fit: max_iters must be at least 1");
    if (!(config.tol > 0.0)) throw std::invalid_argument("fit: tol must be positive");
    if (config.kmeans_every < 1) throw std::invalid_argument("fit: kmeans_every must be positive");
    if (config.kmeans_restarts < 1)
        throw std::invalid_argument("fit: kmeans_restarts must be positive");

    const int M = net.num_nodes();
    const unsigned threads = config.threads;
    const Penalties& pen = config.penalties;

    auto [model, clusters] =
        init_model(net, R, basis, config.seed, config.init_scale, L_out, L_in,
                   config.kmeans_restarts);
    Eigen::MatrixXd phis = detail::basis_rows(basis, net.times);

    detail::ObjectiveParts obj = detail::evaluate_objective(model, net, pen, clusters, threads);
    if (!std::isfinite(obj.value()))
        throw std::runtime_error("fit: initial objective is non-finite; reduce init_scale");

    TrainReport report;
    report.objective_history.push_back(obj.value());

    // Line search over halved rates; start one level above the last accepted
    // depth. Returns the accepted depth, or -1 when every trial decreased the
    // objective (no step taken).
    auto backtrack = [&](double base_rate, int last_depth, auto&& apply_step) -> int {
        int d = std::max(0, last_depth - 1);
        for (int trial = 0; trial <= 30; ++trial, ++d) {
            double rate = base_rate * std::pow(0.5, d);
            if (apply_step(rate)) return d;
        }
        return -1;
    };

    int depth_gamma = 0, depth_beta = 0;
    int it = 0;
    for (it = 1; it <= config.max_iters; ++it) {
        double prev_value = obj.value();

        {  // gamma phase
            std::vector<Eigen::MatrixXd> grads(M);
            parallel_for(M, threads, [&](std::size_t j) {
                grads[j] = detail::grad_gamma_with(model, net, pen, clusters,
                                                   static_cast<int>(j), phis);
            });
            EmbeddingModel trial = model;
            int d = backtrack(config.lr_alpha, depth_gamma, [&](double rate) {
                for (int j = 0; j < M; ++j) trial.gamma[j] = model.gamma[j] + rate * grads[j];
                auto cand = detail::evaluate_objective(trial, net, pen, clusters, threads);
                if (cand.value() >= obj.value()) {
                    model.gamma = trial.gamma;
                    obj = cand;
                    return true;
                }
                return false;
            });
            if (d >= 0) depth_gamma = d;
        }

        {  // beta phase, using the updated gamma
            std::vector<Eigen::MatrixXd> alphas = detail::alpha_rows(model, phis);
            Eigen::MatrixXd grads(M, R);
            parallel_for(M, threads, [&](std::size_t k) {
                grads.row(k) = detail::grad_beta_with(model, net, pen, clusters,
                                                      static_cast<int>(k), alphas)
                                   .transpose();
            });
            EmbeddingModel trial = model;
            int d = backtrack(config.lr_beta, depth_beta, [&](double rate) {
                trial.beta = model.beta + rate * grads;
                auto cand = detail::evaluate_objective(trial, net, pen, clusters, threads);
                if (cand.value() >= obj.value()) {
                    model.beta = trial.beta;
                    obj = cand;
                    return true;
                }
                return false;
            });
            if (d >= 0) depth_beta = d;
        }

        if (it % config.kmeans_every == 0) {  // center refresh
            auto out = kmeans_functional(
                model.gamma, basis.gram, L_out, config.kmeans_restarts,
                derive_seed(derive_seed(config.seed, seed_stream::refresh_kmeans_out),
                            static_cast<std::uint64_t>(it)),
                &clusters.theta);
            auto in = kmeans_euclidean(
                model.beta, L_in, config.kmeans_restarts,
                derive_seed(derive_seed(config.seed, seed_stream::refresh_kmeans_in),
                            static_cast<std::uint64_t>(it)),
                clusters.zeta);
            ClusterState refreshed;
            refreshed.theta = std::move(out.centers);
            refreshed.zeta = std::move(in.centers);
            refreshed.assign_out = std::move(out.assignments);
            refreshed.assign_in = std::move(in.assignments);
            // Warm-started Lloyd cannot worsen the center penalty, but the
            // history's exact monotonicity must not hinge on two code paths
            // agreeing to the last bit; re-evaluate and keep the better.
            double refreshed_penalty = penalty_total(model, pen, refreshed);
            if (refreshed_penalty <= obj.penalty) {
                clusters = std::move(refreshed);
                obj.penalty = refreshed_penalty;
            }
        }

        if (!std::isfinite(obj.value()))
            throw std::runtime_error(
                "fit: objective became non-finite; reduce lr-alpha/lr-beta");
        report.objective_history.push_back(obj.value());
        if (config.verbose)
            std::fprintf(stderr, "%d,%.10g,%.3g\n", it, obj.value(), obj.value() - prev_value);
        if (std::abs(obj.value() - prev_value) < config.tol * (1.0 + std::abs(prev_value))) {
            report.converged = true;
            break;
        }
    }
    report.iterations_run = static_cast<int>(report.objective_history.size()) - 1;
    report.clusters = clusters;
    report.final_objective = obj.value();
    for (int j = 0; j < M; ++j)
        report.curvature_norm +=
            (model.gamma[j] * basis.curvature_gram).cwiseProduct(model.gamma[j]).sum();
    return {std::move(model), std::move(report)};
}

// Euclidean K-means on the instantaneous embeddings alpha_j(t).
inline std::vector<int> cluster_at_time(const EmbeddingModel& model, double t, int L, int restarts,
                                        std::uint64_t seed) {
    const int M = model.num_nodes();
    Eigen::MatrixXd points(M, model.embedding_dim);
    for (int j = 0; j < M; ++j) points.row(j) = alpha_at(model, j, t).transpose();
    return kmeans_euclidean(points, L, restarts, seed).assignments;
}

}  // namespace fdnet
