#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fdnet/dynamic_network.hpp"
#include "fdnet/model.hpp"
#include "fdnet/rng.hpp"

namespace fdnet {

// Planted-cluster generator settings. Defaults R=6, L_out=4, L_in=5 with
// normal centers and within-cluster normal noise.
struct GeneratorSpec {
    int num_nodes = 50;   // M
    int num_times = 20;   // n
    int embedding_dim = 6;  // R
    int clusters_out = 4;   // L_out
    int clusters_in = 5;    // L_in
    double sigma_alpha = 0.25;
    double sigma_beta = 0.25;
    double center_scale = 1.0;
    BasisSystem basis;
    std::uint64_t seed = 0;
};

struct SyntheticNetwork {
    DynamicNetwork network;
    EmbeddingModel truth;
    std::vector<int> labels_out;  // planted sending clusters
    std::vector<int> labels_in;   // planted receiving clusters
};

namespace seed_stream {
constexpr std::uint64_t gen_centers_gamma = 0x20;
constexpr std::uint64_t gen_centers_beta = 0x21;
constexpr std::uint64_t gen_assign_out = 0x22;
constexpr std::uint64_t gen_assign_in = 0x23;
constexpr std::uint64_t gen_gamma_noise = 0x24;
constexpr std::uint64_t gen_beta_noise = 0x25;
constexpr std::uint64_t gen_adjacency = 0x26;
}  // namespace seed_stream

namespace detail {

// Balanced planted labels: node j starts in cluster j mod L, then a full
// shuffle decouples cluster from node order.
inline std::vector<int> planted_labels(int M, int L, Rng& rng) {
    std::vector<int> labels(M);
    for (int j = 0; j < M; ++j) labels[j] = j % L;
    rng.shuffle(labels);
    return labels;
}

inline std::string zero_padded_label(int j, int M) {
    int width = 1;
    for (int v = M - 1; v >= 10; v /= 10) ++width;
    width = std::max(width, 3);
    std::string digits = std::to_string(j);
    return "node" + std::string(width - digits.size(), '0') + digits;
}

}  // namespace detail

// Bernoulli draws A_i(j,k) ~ Bern(sigmoid(eta_jk(t_i))) from a fixed model,
// sampled in time-then-row-then-column order. Lets one model be resampled
// under many seeds.
inline std::vector<Eigen::MatrixXi> resample_adjacency(const EmbeddingModel& truth,
                                                       const std::vector<double>& times,
                                                       std::uint64_t seed) {
    const int M = truth.num_nodes();
    const int R = truth.embedding_dim;
    std::vector<Eigen::MatrixXi> snaps(times.size(), Eigen::MatrixXi::Zero(M, M));
    Rng rng(derive_seed(seed, seed_stream::gen_adjacency));
    for (std::size_t i = 0; i < times.size(); ++i) {
        Eigen::VectorXd phi = eval_basis(truth.basis, times[i]);
        Eigen::MatrixXd alpha(M, R);
        for (int j = 0; j < M; ++j) alpha.row(j) = (truth.gamma[j] * phi).transpose();
        Eigen::MatrixXd etas = alpha * truth.beta.transpose();
        for (int j = 0; j < M; ++j)
            for (int k = 0; k < M; ++k) {
                if (j == k) continue;
                snaps[i](j, k) = rng.uniform() < sigmoid(etas(j, k)) ? 1 : 0;
            }
    }
    return snaps;
}

// Draws cluster centers Normal(0, center_scale^2), balanced random cluster
// labels, per-node coefficients around their centers, and Bernoulli
// adjacency snapshots on the uniform grid t_i = i/(n-1) over [0,1].
inline SyntheticNetwork generate(const GeneratorSpec& spec) {
    const int M = spec.num_nodes;
    const int n = spec.num_times;
    const int R = spec.embedding_dim;
    const int D = spec.basis.num_basis;
    if (M < 1) throw std::invalid_argument("generate: M must be positive");
    if (n < 2) throw std::invalid_argument("generate: n must be at least 2");
    if (R < 1) throw std::invalid_argument("generate: R must be positive");
    if (spec.clusters_out < 1 || spec.clusters_out > M)
        throw std::invalid_argument("generate: L_out exceeds M");
    if (spec.clusters_in < 1 || spec.clusters_in > M)
        throw std::invalid_argument("generate: L_in exceeds M");
    if (spec.sigma_alpha < 0.0 || spec.sigma_beta < 0.0 || spec.center_scale < 0.0)
        throw std::invalid_argument("generate: scales must be nonnegative");
    if (spec.basis.num_basis < 1) throw std::invalid_argument("generate: basis not constructed");

    // Centers.
    std::vector<Eigen::MatrixXd> mu_gamma(spec.clusters_out);
    {
        Rng rng(derive_seed(spec.seed, seed_stream::gen_centers_gamma));
        for (auto& c : mu_gamma) {
            c.resize(R, D);
            for (int r = 0; r < R; ++r)
                for (int d = 0; d < D; ++d) c(r, d) = spec.center_scale * rng.normal();
        }
    }
    Eigen::MatrixXd mu_beta(spec.clusters_in, R);
    {
        Rng rng(derive_seed(spec.seed, seed_stream::gen_centers_beta));
        for (int l = 0; l < spec.clusters_in; ++l)
            for (int r = 0; r < R; ++r) mu_beta(l, r) = spec.center_scale * rng.normal();
    }

    // Planted labels.
    Rng rng_out(derive_seed(spec.seed, seed_stream::gen_assign_out));
    Rng rng_in(derive_seed(spec.seed, seed_stream::gen_assign_in));
    SyntheticNetwork out;
    out.labels_out = detail::planted_labels(M, spec.clusters_out, rng_out);
    out.labels_in = detail::planted_labels(M, spec.clusters_in, rng_in);

    // Node coefficients around their cluster centers.
    std::vector<std::string> labels(M);
    for (int j = 0; j < M; ++j) labels[j] = detail::zero_padded_label(j, M);
    out.truth = make_zero_model(spec.basis, R, labels);
    {
        Rng rng(derive_seed(spec.seed, seed_stream::gen_gamma_noise));
        for (int j = 0; j < M; ++j)
            for (int r = 0; r < R; ++r)
                for (int d = 0; d < D; ++d)
                    out.truth.gamma[j](r, d) =
                        mu_gamma[out.labels_out[j]](r, d) + spec.sigma_alpha * rng.normal();
    }
    {
        Rng rng(derive_seed(spec.seed, seed_stream::gen_beta_noise));
        for (int j = 0; j < M; ++j)
            for (int r = 0; r < R; ++r)
                out.truth.beta(j, r) = mu_beta(out.labels_in[j], r) + spec.sigma_beta * rng.normal();
    }

    // Bernoulli snapshots on the uniform grid.
    std::vector<double> times(n);
    for (int i = 0; i < n; ++i) times[i] = static_cast<double>(i) / (n - 1);
    std::vector<Eigen::MatrixXi> snaps = resample_adjacency(out.truth, times, spec.seed);
    out.network = network_from_snapshots(std::move(labels), std::move(times), std::move(snaps));
    return out;
}

}  // namespace fdnet
