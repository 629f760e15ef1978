#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdnet/dynamic_network.hpp"
#include "fdnet/parallel.hpp"
#include "fdnet/spline_basis.hpp"

namespace fdnet {

inline double sigmoid(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
inline double softplus(double x) noexcept {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Latent-space model: node j sends with a time-varying R-dimensional
// trajectory alpha_j(t) = gamma_j * phi(t) and receives with a static
// R-vector beta_j. The link logit is their inner product.
struct EmbeddingModel {
    BasisSystem basis;
    int embedding_dim = 0;  // R
    std::vector<std::string> node_labels;
    std::vector<Eigen::MatrixXd> gamma;  // M matrices, R x D
    Eigen::MatrixXd beta;                // M x R

    int num_nodes() const { return static_cast<int>(gamma.size()); }
};

struct Penalties {
    double alpha_center = 0.0;  // lambda_a0: pull gamma_j toward its cluster center
    double beta_center = 0.0;   // lambda_b0: pull beta_j toward its cluster center
    double alpha_ridge = 0.0;   // lambda_a1: functional ridge on alpha_j
    double beta_ridge = 0.0;    // lambda_b1: Euclidean ridge on beta_j
    double alpha_smooth = 0.0;  // lambda_a2: curvature (second-derivative) penalty
};

// Cluster centers and assignments for both embedding families. Assignments
// index the nearest center under the respective metric (Phi-metric for
// theta, Euclidean for zeta), ties resolved to the lowest index.
struct ClusterState {
    std::vector<Eigen::MatrixXd> theta;  // L_out centers, R x D
    Eigen::MatrixXd zeta;                // L_in x R
    std::vector<int> assign_out;         // M values in [0, L_out)
    std::vector<int> assign_in;          // M values in [0, L_in)
};

inline EmbeddingModel make_zero_model(const BasisSystem& basis, int R,
                                      std::vector<std::string> labels) {
    EmbeddingModel m;
    m.basis = basis;
    m.embedding_dim = R;
    m.gamma.assign(labels.size(), Eigen::MatrixXd::Zero(R, basis.num_basis));
    m.beta = Eigen::MatrixXd::Zero(static_cast<int>(labels.size()), R);
    m.node_labels = std::move(labels);
    return m;
}

// alpha_j(t), the instantaneous outgoing embedding.
inline Eigen::VectorXd alpha_at(const EmbeddingModel& model, int j, double t) {
    return model.gamma[j] * eval_basis(model.basis, t);
}

// eta_jk(t) = <alpha_j(t), beta_k>.
inline double eta(const EmbeddingModel& model, int j, int k, double t) {
    return alpha_at(model, j, t).dot(model.beta.row(k));
}

inline double link_probability(const EmbeddingModel& model, int j, int k, double t) {
    return sigmoid(eta(model, j, k, t));
}

namespace detail {

// Basis values at every network time, rows phi(t_i).
inline Eigen::MatrixXd basis_rows(const BasisSystem& bs, const std::vector<double>& times) {
    Eigen::MatrixXd out(times.size(), bs.num_basis);
    for (std::size_t i = 0; i < times.size(); ++i)
        out.row(i) = eval_basis(bs, times[i]).transpose();
    return out;
}

// Bernoulli log-likelihood terms of node j's outgoing row at every time:
// sum over observed (j,k) of A*eta - softplus(eta).
inline double node_row_log_likelihood(const EmbeddingModel& model, const DynamicNetwork& net,
                                      const Eigen::MatrixXd& phis, int j) {
    const int M = net.num_nodes();
    double total = 0.0;
    for (int i = 0; i < net.num_times(); ++i) {
        Eigen::VectorXd a = model.gamma[j] * phis.row(i).transpose();
        Eigen::VectorXd etas = model.beta * a;  // eta_{jk}(t_i) over k
        const auto& A = net.snapshots[i];
        const auto& mask = net.masks[i];
        for (int k = 0; k < M; ++k) {
            if (!mask(j, k)) continue;
            double e = etas[k];
            total += (A(j, k) != 0 ? e : 0.0) - softplus(e);
        }
    }
    return total;
}

}  // namespace detail

// Masked Bernoulli log-likelihood, sum_i sum_{(j,k) observed} A*eta - softplus(eta).
// Per-node partials are reduced in node order, so the result is independent
// of the thread count.
inline double log_likelihood(const EmbeddingModel& model, const DynamicNetwork& net,
                             unsigned threads = 1) {
    const int M = net.num_nodes();
    Eigen::MatrixXd phis = detail::basis_rows(model.basis, net.times);
    std::vector<double> partial(M, 0.0);
    parallel_for(M, threads, [&](std::size_t j) {
        partial[j] = detail::node_row_log_likelihood(model, net, phis, static_cast<int>(j));
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

// <u, v> in the function space: sum_r u_r^T Phi v_r over coefficient rows.
inline double functional_inner_product(const BasisSystem& basis, const Eigen::MatrixXd& u_coeffs,
                                       const Eigen::MatrixXd& v_coeffs) {
    return (u_coeffs * basis.gram).cwiseProduct(v_coeffs).sum();
}

// Squared Phi-metric distance between two coefficient blocks.
inline double functional_distance_sq(const Eigen::MatrixXd& u_coeffs,
                                     const Eigen::MatrixXd& v_coeffs,
                                     const Eigen::MatrixXd& gram) {
    Eigen::MatrixXd d = u_coeffs - v_coeffs;
    return (d * gram).cwiseProduct(d).sum();
}

// The five penalty sums of the training objective (positive magnitudes).
inline double penalty_total(const EmbeddingModel& model, const Penalties& pen,
                            const ClusterState& clusters) {
    const int M = model.num_nodes();
    double total = 0.0;
    for (int j = 0; j < M; ++j) {
        const Eigen::MatrixXd& g = model.gamma[j];
        if (pen.alpha_center > 0.0)
            total += pen.alpha_center *
                     functional_distance_sq(g, clusters.theta[clusters.assign_out[j]],
                                            model.basis.gram);
        if (pen.alpha_ridge > 0.0)
            total += pen.alpha_ridge * (g * model.basis.gram).cwiseProduct(g).sum();
        if (pen.alpha_smooth > 0.0)
            total += pen.alpha_smooth * (g * model.basis.curvature_gram).cwiseProduct(g).sum();
        if (pen.beta_center > 0.0) {
            Eigen::RowVectorXd d = model.beta.row(j) - clusters.zeta.row(clusters.assign_in[j]);
            total += pen.beta_center * d.squaredNorm();
        }
        if (pen.beta_ridge > 0.0) total += pen.beta_ridge * model.beta.row(j).squaredNorm();
    }
    return total;
}

// Training objective: log-likelihood minus the centrality, ridge, and
// smoothness penalties, with cluster assignments taken as given.
inline double penalized_objective(const EmbeddingModel& model, const DynamicNetwork& net,
                                  const Penalties& pen, const ClusterState& clusters,
                                  unsigned threads = 1) {
    return log_likelihood(model, net, threads) - penalty_total(model, pen, clusters);
}

namespace detail {

// Gradient of the penalized objective in gamma_j, assignments fixed. Shares
// the caller's precomputed basis rows.
inline Eigen::MatrixXd grad_gamma_with(const EmbeddingModel& model, const DynamicNetwork& net,
                                       const Penalties& pen, const ClusterState& clusters,
                                       int j, const Eigen::MatrixXd& phis) {
    const int M = net.num_nodes();
    const int R = model.embedding_dim;
    const int D = model.basis.num_basis;
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(R, D);
    for (int i = 0; i < net.num_times(); ++i) {
        Eigen::VectorXd phi = phis.row(i).transpose();
        Eigen::VectorXd a = model.gamma[j] * phi;
        Eigen::VectorXd etas = model.beta * a;
        const auto& A = net.snapshots[i];
        const auto& mask = net.masks[i];
        Eigen::VectorXd resid = Eigen::VectorXd::Zero(M);
        for (int k = 0; k < M; ++k)
            if (mask(j, k)) resid[k] = static_cast<double>(A(j, k)) - sigmoid(etas[k]);
        // score contribution: (beta^T resid) phi^T
        grad.noalias() += (model.beta.transpose() * resid) * phi.transpose();
    }
    const Eigen::MatrixXd& g = model.gamma[j];
    if (pen.alpha_center > 0.0)
        grad.noalias() -=
            2.0 * pen.alpha_center * (g - clusters.theta[clusters.assign_out[j]]) * model.basis.gram;
    if (pen.alpha_ridge > 0.0) grad.noalias() -= 2.0 * pen.alpha_ridge * g * model.basis.gram;
    if (pen.alpha_smooth > 0.0)
        grad.noalias() -= 2.0 * pen.alpha_smooth * g * model.basis.curvature_gram;
    return grad;
}

// Gradient of the penalized objective in beta_k; `alphas[i]` caches the M x R
// matrix of alpha_j(t_i) rows.
inline Eigen::VectorXd grad_beta_with(const EmbeddingModel& model, const DynamicNetwork& net,
                                      const Penalties& pen, const ClusterState& clusters, int k,
                                      const std::vector<Eigen::MatrixXd>& alphas) {
    const int M = net.num_nodes();
    const int R = model.embedding_dim;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(R);
    Eigen::VectorXd beta_k = model.beta.row(k).transpose();
    for (int i = 0; i < net.num_times(); ++i) {
        const Eigen::MatrixXd& alpha = alphas[i];
        Eigen::VectorXd etas = alpha * beta_k;  // eta_{jk}(t_i) over senders j
        const auto& A = net.snapshots[i];
        const auto& mask = net.masks[i];
        for (int j = 0; j < M; ++j) {
            if (!mask(j, k)) continue;
            double resid = static_cast<double>(A(j, k)) - sigmoid(etas[j]);
            grad.noalias() += resid * alpha.row(j).transpose();
        }
    }
    if (pen.beta_center > 0.0)
        grad.noalias() -= 2.0 * pen.beta_center *
                          (beta_k - clusters.zeta.row(clusters.assign_in[k]).transpose());
    if (pen.beta_ridge > 0.0) grad.noalias() -= 2.0 * pen.beta_ridge * beta_k;
    return grad;
}

// alpha_j(t_i) for all j, one M x R matrix per time.
inline std::vector<Eigen::MatrixXd> alpha_rows(const EmbeddingModel& model,
                                               const Eigen::MatrixXd& phis) {
    const int M = model.num_nodes();
    std::vector<Eigen::MatrixXd> alphas(phis.rows());
    for (Eigen::Index i = 0; i < phis.rows(); ++i) {
        Eigen::MatrixXd a(M, model.embedding_dim);
        for (int j = 0; j < M; ++j) a.row(j) = (model.gamma[j] * phis.row(i).transpose()).transpose();
        alphas[i] = std::move(a);
    }
    return alphas;
}

}  // namespace detail

inline Eigen::MatrixXd grad_gamma(const EmbeddingModel& model, const DynamicNetwork& net,
                                  const Penalties& pen, const ClusterState& clusters, int j) {
    Eigen::MatrixXd phis = detail::basis_rows(model.basis, net.times);
    return detail::grad_gamma_with(model, net, pen, clusters, j, phis);
}

inline Eigen::VectorXd grad_beta(const EmbeddingModel& model, const DynamicNetwork& net,
                                 const Penalties& pen, const ClusterState& clusters, int k) {
    Eigen::MatrixXd phis = detail::basis_rows(model.basis, net.times);
    return detail::grad_beta_with(model, net, pen, clusters, k, detail::alpha_rows(model, phis));
}

struct LinkPrediction {
    Eigen::MatrixXd probabilities;  // M x M, zero diagonal
    Eigen::MatrixXi links;          // p >= threshold, zero diagonal
};

// All pairwise link probabilities at time t with the >= threshold rule.
inline LinkPrediction predict_links(const EmbeddingModel& model, double t, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("predict_links: threshold must lie in (0,1)");
    const int M = model.num_nodes();
    Eigen::VectorXd phi = eval_basis(model.basis, t);
    LinkPrediction out;
    out.probabilities = Eigen::MatrixXd::Zero(M, M);
    out.links = Eigen::MatrixXi::Zero(M, M);
    for (int j = 0; j < M; ++j) {
        Eigen::VectorXd a = model.gamma[j] * phi;
        Eigen::VectorXd etas = model.beta * a;
        for (int k = 0; k < M; ++k) {
            if (j == k) continue;
            double p = sigmoid(etas[k]);
            out.probabilities(j, k) = p;
            out.links(j, k) = p >= threshold ? 1 : 0;
        }
    }
    return out;
}

}  // namespace fdnet
