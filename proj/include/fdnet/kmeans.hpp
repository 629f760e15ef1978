#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fdnet/model.hpp"
#include "fdnet/rng.hpp"

namespace fdnet {

// Lloyd clustering result. `objective_trace` records the within-cluster
// scatter after each center update of the winning run (never increasing).
struct KMeansResult {
    Eigen::MatrixXd centers;  // L x P
    std::vector<int> assignments;
    double objective = 0.0;
    std::vector<double> objective_trace;
};

namespace detail {

// Squared distance (x-y)^T G (x-y); G symmetric positive definite.
inline double metric_dist_sq(const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& y,
                             const Eigen::MatrixXd& metric) {
    Eigen::RowVectorXd d = x - y;
    return d * metric * d.transpose();
}

struct LloydRun {
    Eigen::MatrixXd centers;
    std::vector<int> assignments;
    double objective;
    std::vector<double> trace;
};

// Nearest-center assignment, ties to the lowest center index.
inline void assign_nearest(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers,
                           const Eigen::MatrixXd& metric, std::vector<int>& assign,
                           std::vector<double>& dist) {
    const int M = static_cast<int>(points.rows());
    const int L = static_cast<int>(centers.rows());
    for (int j = 0; j < M; ++j) {
        int best = 0;
        double best_d = metric_dist_sq(points.row(j), centers.row(0), metric);
        for (int l = 1; l < L; ++l) {
            double d = metric_dist_sq(points.row(j), centers.row(l), metric);
            if (d < best_d) {
                best_d = d;
                best = l;
            }
        }
        assign[j] = best;
        dist[j] = best_d;
    }
}

// k-means++ seeding under the metric: D^2-proportional sampling.
inline Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& points, const Eigen::MatrixXd& metric,
                                      int L, Rng& rng) {
    const int M = static_cast<int>(points.rows());
    Eigen::MatrixXd centers(L, points.cols());
    centers.row(0) = points.row(static_cast<int>(rng.uniform_int(M)));
    std::vector<double> dist(M);
    for (int j = 0; j < M; ++j) dist[j] = metric_dist_sq(points.row(j), centers.row(0), metric);
    for (int l = 1; l < L; ++l) {
        double total = 0.0;
        for (double d : dist) total += d;
        int pick;
        if (total > 0.0) {
            double u = rng.uniform() * total;
            pick = M - 1;
            double acc = 0.0;
            for (int j = 0; j < M; ++j) {
                acc += dist[j];
                if (u < acc) {
                    pick = j;
                    break;
                }
            }
        } else {
            pick = static_cast<int>(rng.uniform_int(M));  // all points coincide with a center
        }
        centers.row(l) = points.row(pick);
        for (int j = 0; j < M; ++j)
            dist[j] = std::min(dist[j], metric_dist_sq(points.row(j), centers.row(l), metric));
    }
    return centers;
}

// Lloyd iterations to a fixed point: assign to nearest center, reseed empty
// clusters with the farthest point (skipped when every distance is zero),
// recompute centers as member means. The mean minimizes the within-cluster
// sum for any positive definite metric.
inline LloydRun lloyd(const Eigen::MatrixXd& points, const Eigen::MatrixXd& metric,
                      Eigen::MatrixXd centers) {
    const int M = static_cast<int>(points.rows());
    const int L = static_cast<int>(centers.rows());
    LloydRun run;
    run.assignments.assign(M, -1);
    std::vector<double> dist(M, 0.0);
    std::vector<int> prev;
    for (int iter = 0; iter < 200; ++iter) {
        assign_nearest(points, centers, metric, run.assignments, dist);
        std::vector<int> count(L, 0);
        for (int a : run.assignments) ++count[a];
        for (int l = 0; l < L; ++l) {
            if (count[l] > 0) continue;
            int far = 0;
            double far_d = -1.0;
            for (int j = 0; j < M; ++j)
                if (count[run.assignments[j]] > 1 && dist[j] > far_d) {
                    far_d = dist[j];
                    far = j;
                }
            if (far_d <= 0.0) continue;  // coincident points: leave empty
            --count[run.assignments[far]];
            run.assignments[far] = l;
            count[l] = 1;
            dist[far] = 0.0;
        }
        if (iter > 0 && run.assignments == prev) break;
        prev = run.assignments;
        for (int l = 0; l < L; ++l) {
            if (count[l] == 0) continue;
            Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(points.cols());
            for (int j = 0; j < M; ++j)
                if (run.assignments[j] == l) mean += points.row(j);
            centers.row(l) = mean / count[l];
        }
        double obj = 0.0;
        for (int j = 0; j < M; ++j)
            obj += metric_dist_sq(points.row(j), centers.row(run.assignments[j]), metric);
        run.trace.push_back(obj);
    }
    run.centers = std::move(centers);
    run.objective = 0.0;
    for (int j = 0; j < M; ++j)
        run.objective +=
            metric_dist_sq(points.row(j), run.centers.row(run.assignments[j]), metric);
    return run;
}

}  // namespace detail

// Best-of-restarts Lloyd under a quadratic metric. Optional warm centers are
// evaluated as an extra candidate before the seeded restarts; with restarts=0
// and warm centers given, this is a pure warm refinement (objective can only
// improve on the warm configuration's).
inline KMeansResult kmeans_metric(const Eigen::MatrixXd& points, const Eigen::MatrixXd& metric,
                                  int L, int restarts, std::uint64_t seed,
                                  const std::optional<Eigen::MatrixXd>& warm_centers = {}) {
    const int M = static_cast<int>(points.rows());
    if (L < 1) throw std::invalid_argument("kmeans: L must be positive");
    if (L > M) throw std::invalid_argument("kmeans: L exceeds number of points");
    if (restarts < 1 && !warm_centers) throw std::invalid_argument("kmeans: no restarts");

    std::optional<detail::LloydRun> best;
    auto consider = [&](detail::LloydRun run) {
        if (!best || run.objective < best->objective) best = std::move(run);
    };
    if (warm_centers) {
        if (warm_centers->rows() != L || warm_centers->cols() != points.cols())
            throw std::invalid_argument("kmeans: warm center shape mismatch");
        consider(detail::lloyd(points, metric, *warm_centers));
    }
    for (int r = 0; r < restarts; ++r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        consider(detail::lloyd(points, metric, detail::seed_plus_plus(points, metric, L, rng)));
    }
    KMeansResult out;
    out.centers = std::move(best->centers);
    out.assignments = std::move(best->assignments);
    out.objective = best->objective;
    out.objective_trace = std::move(best->trace);
    return out;
}

// Flattens R x D coefficient blocks to rows of an M x (R*D) matrix, row r
// occupying the slice [r*D, (r+1)*D).
inline Eigen::MatrixXd flatten_coeffs(const std::vector<Eigen::MatrixXd>& coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("flatten_coeffs: empty input");
    const int R = static_cast<int>(coeffs[0].rows());
    const int D = static_cast<int>(coeffs[0].cols());
    Eigen::MatrixXd out(coeffs.size(), R * D);
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        for (int r = 0; r < R; ++r) out.block(static_cast<int>(j), r * D, 1, D) = coeffs[j].row(r);
    return out;
}

inline Eigen::MatrixXd unflatten_row(const Eigen::RowVectorXd& row, int R, int D) {
    Eigen::MatrixXd out(R, D);
    for (int r = 0; r < R; ++r) out.row(r) = row.segment(r * D, D);
    return out;
}

struct FunctionalKMeansResult {
    std::vector<Eigen::MatrixXd> centers;  // L blocks, R x D
    std::vector<int> assignments;
    double objective = 0.0;
    std::vector<double> objective_trace;
};

// K-means over coefficient blocks under the Phi-metric: the blockwise form
// sum_r (u_r - v_r)^T Phi (u_r - v_r) equals a flat quadratic metric
// I_R (x) Phi, so generic Lloyd applies unchanged.
inline FunctionalKMeansResult kmeans_functional(const std::vector<Eigen::MatrixXd>& coeffs,
                                                const Eigen::MatrixXd& gram, int L, int restarts,
                                                std::uint64_t seed,
                                                const std::vector<Eigen::MatrixXd>* warm = nullptr) {
    Eigen::MatrixXd points = flatten_coeffs(coeffs);
    const int R = static_cast<int>(coeffs[0].rows());
    const int D = static_cast<int>(coeffs[0].cols());
    Eigen::MatrixXd metric = Eigen::MatrixXd::Zero(R * D, R * D);
    for (int r = 0; r < R; ++r) metric.block(r * D, r * D, D, D) = gram;
    std::optional<Eigen::MatrixXd> warm_rows;
    if (warm) warm_rows = flatten_coeffs(*warm);
    KMeansResult flat = kmeans_metric(points, metric, L, restarts, seed, warm_rows);
    FunctionalKMeansResult out;
    out.centers.reserve(L);
    for (int l = 0; l < L; ++l) out.centers.push_back(unflatten_row(flat.centers.row(l), R, D));
    out.assignments = std::move(flat.assignments);
    out.objective = flat.objective;
    out.objective_trace = std::move(flat.objective_trace);
    return out;
}

inline KMeansResult kmeans_euclidean(const Eigen::MatrixXd& points, int L, int restarts,
                                     std::uint64_t seed,
                                     const std::optional<Eigen::MatrixXd>& warm = {}) {
    Eigen::MatrixXd metric = Eigen::MatrixXd::Identity(points.cols(), points.cols());
    return kmeans_metric(points, metric, L, restarts, seed, warm);
}

}  // namespace fdnet
