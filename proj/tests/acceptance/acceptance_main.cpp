// Acceptance gate: nine numbered end-to-end criteria, each printing a single
// [PASS]/[FAIL] line with the measured numbers. Run with no arguments to
// execute all criteria, or pass criterion numbers (1-9) to run a subset.
// Thresholds are pinned here on purpose; loosening them is a library change,
// not a test tweak.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <Eigen/Dense>

#include <fdnet/fdnet.hpp>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream ss;
    ss << std::setprecision(prec) << v;
    return ss.str();
}

// Renumbers labels by first occurrence so relabel-equivalent partitions
// compare equal and objective recomputation is order-identical.
std::vector<int> canonical(const std::vector<int>& labels) {
    std::map<int, int> remap;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int l : labels) out.push_back(remap.try_emplace(l, static_cast<int>(remap.size())).first->second);
    return out;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Average ranks (ties share the mean rank), 1-based.
std::vector<double> ranks_of(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size(), 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        double shared = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> rx = ranks_of(x), ry = ranks_of(y);
    double mx = oracle::mean_of(rx), my = oracle::mean_of(ry);
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    if (dx == 0.0 || dy == 0.0) return 0.0;
    return num / std::sqrt(dx * dy);
}

// The synthetic regime used throughout: planted clusters at the generator
// defaults, cubic basis with D=6 on [0,1].
fdnet::GeneratorSpec default_regime(std::uint64_t seed) {
    fdnet::GeneratorSpec spec;
    spec.basis = fdnet::make_basis(1.0, 6, 3);
    spec.seed = seed;
    return spec;
}

fdnet::TrainConfig default_training(std::uint64_t seed) {
    fdnet::TrainConfig cfg;
    cfg.penalties.alpha_center = 0.1;
    cfg.penalties.beta_center = 0.1;
    cfg.penalties.alpha_ridge = 0.01;
    cfg.penalties.beta_ridge = 0.01;
    cfg.penalties.alpha_smooth = 1.0;
    cfg.lr_alpha = 0.05;
    cfg.lr_beta = 0.05;
    cfg.max_iters = 250;
    cfg.tol = 1e-7;
    cfg.kmeans_every = 5;
    cfg.kmeans_restarts = 10;
    cfg.init_scale = 0.1;
    cfg.threads = 1;
    cfg.seed = seed;
    return cfg;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(FDNET_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<missing:" + p.string() + ">";
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Analytic gradients match central finite differences on random instances.

Outcome criterion1() {
    auto start = std::chrono::steady_clock::now();
    const double h = 1e-6;
    double worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        fdnet::Rng rng(1000 + static_cast<std::uint64_t>(inst));
        const int M = 2 + static_cast<int>(rng.uniform_int(4));  // 2..5
        const int n = 2 + static_cast<int>(rng.uniform_int(3));  // 2..4
        const int R = 1 + static_cast<int>(rng.uniform_int(3));  // 1..3
        fdnet::BasisSystem basis = fdnet::make_basis(1.0, 4, 3);
        const int D = basis.num_basis;

        std::vector<double> times(n);
        for (int i = 0; i < n; ++i) times[i] = static_cast<double>(i) / (n - 1);
        std::vector<Eigen::MatrixXi> snaps(n, Eigen::MatrixXi::Zero(M, M));
        for (auto& s : snaps)
            for (int j = 0; j < M; ++j)
                for (int k = 0; k < M; ++k) s(j, k) = rng.uniform() < 0.5 ? 1 : 0;
        std::vector<std::string> labels(M);
        for (int j = 0; j < M; ++j) labels[j] = "v" + std::to_string(j);
        fdnet::DynamicNetwork net = fdnet::network_from_snapshots(labels, times, snaps);

        fdnet::EmbeddingModel model = fdnet::make_zero_model(basis, R, labels);
        for (int j = 0; j < M; ++j)
            for (int r = 0; r < R; ++r)
                for (int d = 0; d < D; ++d) model.gamma[j](r, d) = 0.5 * rng.normal();
        for (int j = 0; j < M; ++j)
            for (int r = 0; r < R; ++r) model.beta(j, r) = 0.5 * rng.normal();

        const int L = std::min(2, M);
        fdnet::ClusterState clusters;
        clusters.theta.assign(L, Eigen::MatrixXd::Zero(R, D));
        clusters.zeta = Eigen::MatrixXd::Zero(L, R);
        for (auto& c : clusters.theta)
            for (int r = 0; r < R; ++r)
                for (int d = 0; d < D; ++d) c(r, d) = 0.5 * rng.normal();
        for (int l = 0; l < L; ++l)
            for (int r = 0; r < R; ++r) clusters.zeta(l, r) = 0.5 * rng.normal();
        clusters.assign_out.resize(M);
        clusters.assign_in.resize(M);
        for (int j = 0; j < M; ++j) {
            clusters.assign_out[j] = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(L)));
            clusters.assign_in[j] = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(L)));
        }

        fdnet::Penalties pen;
        const double lam = (inst % 2 == 1) ? 0.1 : 0.0;
        pen.alpha_center = pen.beta_center = pen.alpha_ridge = pen.beta_ridge = pen.alpha_smooth = lam;

        for (int j = 0; j < M; ++j) {
            Eigen::MatrixXd g = fdnet::grad_gamma(model, net, pen, clusters, j);
            for (int r = 0; r < R; ++r)
                for (int d = 0; d < D; ++d) {
                    double fd = oracle::central_difference(
                        [&](double x) {
                            fdnet::EmbeddingModel m = model;
                            m.gamma[j](r, d) = x;
                            return fdnet::penalized_objective(m, net, pen, clusters);
                        },
                        model.gamma[j](r, d), h);
                    worst = std::max(worst, std::abs(g(r, d) - fd) / std::max(1.0, std::abs(g(r, d))));
                }
        }
        for (int k = 0; k < M; ++k) {
            Eigen::VectorXd g = fdnet::grad_beta(model, net, pen, clusters, k);
            for (int r = 0; r < R; ++r) {
                double fd = oracle::central_difference(
                    [&](double x) {
                        fdnet::EmbeddingModel m = model;
                        m.beta(k, r) = x;
                        return fdnet::penalized_objective(m, net, pen, clusters);
                    },
                    model.beta(k, r), h);
                worst = std::max(worst, std::abs(g(r) - fd) / std::max(1.0, std::abs(g(r))));
            }
        }
    }
    double secs = elapsed_s(start);
    Outcome out;
    out.pass = worst < 1e-5 && secs < 60.0;
    out.detail = "50 instances, max relative gradient error " + fmt(worst, 3) + " (limit 1e-05), " +
                 fmt(secs, 3) + " s (limit 60)";
    return out;
}

// ---------------------------------------------------------------------------
// 2. Gram matrices match an adaptive-quadrature oracle; degree-0 Gram is
//    exactly h*I.

Outcome criterion2() {
    double worst_rel = 0.0;
    for (int D : {6, 12}) {
        fdnet::BasisSystem bs = fdnet::make_basis(1.0, D, 3);
        std::vector<double> breaks(bs.knots.begin() + bs.degree, bs.knots.end() - bs.degree);
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::MatrixXd& lib = pass == 0 ? bs.gram : bs.curvature_gram;
            Eigen::MatrixXd oracle_mat(D, D);
            for (int i = 0; i < D; ++i)
                for (int j = 0; j < D; ++j) {
                    auto integrand = [&](double t) {
                        Eigen::VectorXd v = pass == 0 ? fdnet::eval_basis(bs, t)
                                                      : fdnet::eval_basis_second_derivative(bs, t);
                        return v(i) * v(j);
                    };
                    // The oracle must be converged well past the 1e-10
                    // verification threshold even for the smallest corner
                    // overlaps, so its tolerance scales with the entry.
                    double lib_scale = lib.cwiseAbs().maxCoeff();
                    double tol = 1e-12 * std::abs(lib(i, j)) + 1e-15 * lib_scale;
                    oracle_mat(i, j) = oracle::integrate_piecewise(integrand, breaks, tol);
                }
            double scale = oracle_mat.cwiseAbs().maxCoeff();
            for (int i = 0; i < D; ++i)
                for (int j = 0; j < D; ++j) {
                    double o = oracle_mat(i, j), g = lib(i, j);
                    double rel;
                    if (std::abs(o) > 1e-8 * scale)
                        rel = std::abs(g - o) / std::abs(o);
                    else
                        rel = std::abs(g - o) / std::max(1.0, scale);
                    worst_rel = std::max(worst_rel, rel);
                }
        }
    }

    bool identity_exact = true;
    for (int D : {4, 8}) {
        fdnet::BasisSystem flat = fdnet::make_basis(1.0, D, 0);
        Eigen::MatrixXd expect = (1.0 / D) * Eigen::MatrixXd::Identity(D, D);
        if (!(flat.gram == expect)) identity_exact = false;
        if (!(flat.curvature_gram == Eigen::MatrixXd::Zero(D, D))) identity_exact = false;
    }

    Outcome out;
    out.pass = worst_rel < 1e-10 && identity_exact;
    out.detail = "cubic D in {6,12}: max relative quadrature error " + fmt(worst_rel, 3) +
                 " (limit 1e-10); degree-0 Gram " +
                 (identity_exact ? std::string("== h*I exactly") : std::string("NOT exactly h*I"));
    return out;
}

// ---------------------------------------------------------------------------
// 3. Lloyd with restarts equals the exhaustive-partition minimum.

Outcome criterion3() {
    // At least 10 restarts are required; 20 gives margin against the rare
    // seeding draw whose every start lands in the same local basin (pure
    // noise instances have no cluster structure to guide k-means++).
    const int M = 6, L = 2, restarts = 20;
    int matched = 0, total = 0;
    double worst_obj_gap = 0.0;

    fdnet::BasisSystem bs = fdnet::make_basis(1.0, 3, 2);
    const int R = 2, D = 3;
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(R * D, R * D);
    for (int r = 0; r < R; ++r) block.block(r * D, r * D, D, D) = bs.gram;
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);

    for (int inst = 0; inst < 20; ++inst) {
        std::uint64_t seed = 3000 + static_cast<std::uint64_t>(inst);
        fdnet::Rng rng(seed);

        // Euclidean metric on R^2.
        Eigen::MatrixXd pts(M, 2);
        for (int j = 0; j < M; ++j)
            for (int c = 0; c < 2; ++c) pts(j, c) = rng.normal();
        fdnet::KMeansResult lib = fdnet::kmeans_euclidean(pts, L, restarts, seed);
        oracle::BruteForceResult brute = oracle::brute_force_kmeans(
            pts, L, [&](const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& y) {
                Eigen::RowVectorXd d = x - y;
                return static_cast<double>(d * eye * d.transpose());
            });
        {
            std::vector<int> ca = canonical(lib.assignments), cb = canonical(brute.assignments);
            double oa = oracle::partition_objective(pts, ca, L, eye);
            double ob = oracle::partition_objective(pts, cb, L, eye);
            ++total;
            if (ca == cb && oa == ob) ++matched;
            worst_obj_gap = std::max(worst_obj_gap,
                                     std::abs(lib.objective - ob) / std::max(1.0, std::abs(ob)));
        }

        // Gram-induced functional metric on coefficient blocks.
        std::vector<Eigen::MatrixXd> coeffs(M, Eigen::MatrixXd(R, D));
        for (auto& c : coeffs)
            for (int r = 0; r < R; ++r)
                for (int d = 0; d < D; ++d) c(r, d) = rng.normal();
        fdnet::FunctionalKMeansResult flib =
            fdnet::kmeans_functional(coeffs, bs.gram, L, restarts, seed);
        Eigen::MatrixXd flat = fdnet::flatten_coeffs(coeffs);
        oracle::BruteForceResult fbrute = oracle::brute_force_kmeans(
            flat, L, [&](const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& y) {
                Eigen::RowVectorXd d = x - y;
                return static_cast<double>(d * block * d.transpose());
            });
        {
            std::vector<int> ca = canonical(flib.assignments), cb = canonical(fbrute.assignments);
            double oa = oracle::partition_objective(flat, ca, L, block);
            double ob = oracle::partition_objective(flat, cb, L, block);
            ++total;
            if (ca == cb && oa == ob) ++matched;
            worst_obj_gap = std::max(worst_obj_gap,
                                     std::abs(flib.objective - ob) / std::max(1.0, std::abs(ob)));
        }
    }

    Outcome out;
    out.pass = matched == total && worst_obj_gap < 1e-9;
    out.detail = std::to_string(matched) + "/" + std::to_string(total) +
                 " partitions exactly optimal (both metrics, " + std::to_string(restarts) +
                 " restarts); max library-vs-oracle objective gap " + fmt(worst_obj_gap, 3);
    return out;
}

// ---------------------------------------------------------------------------
// 4. Link-holdout F1 band and trend across fractions 10-50%.

Outcome criterion4() {
    auto start = std::chrono::steady_clock::now();
    const std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<std::vector<double>> f1s(fractions.size());
    std::vector<double> positives_only;

    for (std::uint64_t s = 1; s <= 20; ++s) {
        fdnet::SyntheticNetwork gen = fdnet::generate(default_regime(s));
        for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
            fdnet::HoldoutSplit split = fdnet::hold_out_links(gen.network, fractions[fi], s);
            auto [model, report] =
                fdnet::fit(split.train, default_training(s), 6, gen.truth.basis, 4, 5);
            (void)report;
            f1s[fi].push_back(fdnet::holdout_f1(model, gen.network, split.test_entries, 0.5));
            if (fi == 0) {
                // Same fit scored on the held-out positives alone: precision
                // is 1 by construction, so this isolates recall.
                std::vector<fdnet::TestEntry> pos;
                for (const auto& e : split.test_entries)
                    if (e.truth != 0) pos.push_back(e);
                positives_only.push_back(fdnet::holdout_f1(model, gen.network, pos, 0.5));
            }
        }
    }

    std::vector<double> means, sds;
    for (const auto& v : f1s) {
        means.push_back(oracle::mean_of(v));
        sds.push_back(oracle::sample_sd(v));
    }
    double rho = spearman_rho(fractions, means);
    double max_sd = *std::max_element(sds.begin(), sds.end());

    bool band = means[0] >= 0.85;
    bool trend = rho <= 0.0;
    bool tight = max_sd <= 0.06;

    std::ostringstream ss;
    ss << "mean F1 by fraction";
    for (std::size_t fi = 0; fi < fractions.size(); ++fi)
        ss << " " << fmt(fractions[fi], 2) << ":" << fmt(means[fi], 3) << "(" << fmt(sds[fi], 2)
           << ")";
    ss << "; band mean@0.10 >= 0.85: " << (band ? "yes" : "NO") << "; Spearman rho " << fmt(rho, 3)
       << " (need <= 0): " << (trend ? "yes" : "NO") << "; max sd " << fmt(max_sd, 3)
       << " (need <= 0.06): " << (tight ? "yes" : "NO")
       << "; positives-only mean@0.10 " << fmt(oracle::mean_of(positives_only), 3) << "; "
       << fmt(elapsed_s(start), 4) << " s";

    Outcome out;
    out.pass = band && trend && tight;
    out.detail = ss.str();
    return out;
}

// ---------------------------------------------------------------------------
// 5. Snapshot F1 at held-out interior time points stays close to training
//    times (spline interpolation across time).

Outcome criterion5() {
    std::vector<double> held_means, train_means;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        fdnet::SyntheticNetwork gen = fdnet::generate(default_regime(s));
        fdnet::HoldoutSplit split = fdnet::hold_out_timepoints(gen.network, 0.1, s);
        auto [model, report] =
            fdnet::fit(split.train, default_training(s), 6, gen.truth.basis, 4, 5);
        (void)report;

        std::vector<bool> held(gen.network.num_times(), false);
        for (const auto& e : split.test_entries) held[static_cast<std::size_t>(e.time_index)] = true;

        double held_sum = 0.0, train_sum = 0.0;
        int held_n = 0, train_n = 0;
        for (int i = 0; i < gen.network.num_times(); ++i) {
            double f1 = fdnet::snapshot_f1(model, gen.network, i, 0.5);
            if (held[static_cast<std::size_t>(i)]) {
                held_sum += f1;
                ++held_n;
            } else {
                train_sum += f1;
                ++train_n;
            }
        }
        held_means.push_back(held_sum / held_n);
        train_means.push_back(train_sum / train_n);
    }
    double held = oracle::mean_of(held_means);
    double train = oracle::mean_of(train_means);
    double gap = std::abs(held - train);

    Outcome out;
    out.pass = gap < 0.05;
    out.detail = "5 seeds, 10% interior times held out: mean held-out snapshot F1 " + fmt(held, 3) +
                 ", training times " + fmt(train, 3) + ", |gap| " + fmt(gap, 3) + " (limit 0.05)";
    return out;
}

// ---------------------------------------------------------------------------
// 6. Planted-cluster recovery from fitted embeddings at low noise.

Outcome criterion6() {
    std::vector<double> ari_out, ari_in;
    for (std::uint64_t s = 1; s <= 10; ++s) {
        fdnet::GeneratorSpec spec = default_regime(s);
        spec.sigma_alpha = 0.1;
        spec.sigma_beta = 0.1;
        fdnet::SyntheticNetwork gen = fdnet::generate(spec);
        auto [model, report] =
            fdnet::fit(gen.network, default_training(s), 6, gen.truth.basis, 4, 5);
        (void)report;

        fdnet::FunctionalKMeansResult fk =
            fdnet::kmeans_functional(model.gamma, model.basis.gram, 4, 20, s);
        fdnet::KMeansResult ek = fdnet::kmeans_euclidean(model.beta, 5, 20, s);
        ari_out.push_back(fdnet::adjusted_rand_index(fk.assignments, gen.labels_out));
        ari_in.push_back(fdnet::adjusted_rand_index(ek.assignments, gen.labels_in));
    }
    double med_out = median_of(ari_out);
    double med_in = median_of(ari_in);

    Outcome out;
    out.pass = med_out >= 0.9 && med_in >= 0.9;
    out.detail = "10 seeds, sigma 0.1: median ARI out-clusters " + fmt(med_out, 3) +
                 ", in-clusters " + fmt(med_in, 3) + " (both need >= 0.9)";
    return out;
}

// ---------------------------------------------------------------------------
// 7. Objective history is non-decreasing at every accepted step.

Outcome criterion7() {
    int violations = 0;
    int steps = 0;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        fdnet::SyntheticNetwork gen = fdnet::generate(default_regime(s));
        fdnet::TrainConfig cfg = default_training(s);
        cfg.max_iters = 150;
        auto [model, report] = fdnet::fit(gen.network, cfg, 6, gen.truth.basis, 4, 5);
        (void)model;
        for (std::size_t i = 1; i < report.objective_history.size(); ++i) {
            ++steps;
            if (!(report.objective_history[i] >= report.objective_history[i - 1])) ++violations;
        }
    }
    Outcome out;
    out.pass = violations == 0;
    out.detail = "5 seeds, " + std::to_string(steps) + " accepted steps, " +
                 std::to_string(violations) + " monotonicity violations (exact comparison)";
    return out;
}

// ---------------------------------------------------------------------------
// 8. Likelihood and ridge penalty sums are invariant under a simultaneous
//    orthogonal rotation of the embedding index.

Outcome criterion8() {
    fdnet::SyntheticNetwork gen = fdnet::generate(default_regime(1));
    const fdnet::EmbeddingModel& model = gen.truth;
    const int R = model.embedding_dim;

    fdnet::Rng rng(77);
    Eigen::MatrixXd raw(R, R);
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < R; ++j) raw(i, j) = rng.normal();
    Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ();

    fdnet::EmbeddingModel rotated = model;
    for (auto& g : rotated.gamma) g = Q * g;
    rotated.beta = model.beta * Q.transpose();

    auto ridge_sums = [](const fdnet::EmbeddingModel& m) {
        double alpha = 0.0;
        for (const auto& g : m.gamma) alpha += (g * m.basis.gram).cwiseProduct(g).sum();
        return std::pair<double, double>(alpha, m.beta.squaredNorm());
    };

    double ll_a = fdnet::log_likelihood(model, gen.network);
    double ll_b = fdnet::log_likelihood(rotated, gen.network);
    auto [ra, ba] = ridge_sums(model);
    auto [rb, bb] = ridge_sums(rotated);

    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); };
    double worst = std::max({rel(ll_a, ll_b), rel(ra, rb), rel(ba, bb)});

    Outcome out;
    out.pass = worst < 1e-8;
    out.detail = "orthogonal rotation of R=6 index: max relative change " + fmt(worst, 3) +
                 " across likelihood/alpha-ridge/beta-ridge (limit 1e-08)";
    return out;
}

// ---------------------------------------------------------------------------
// 9. The CLI pipeline rerun with identical seeds is byte-identical.

Outcome criterion9() {
    fs::path root = fs::temp_directory_path() / "fdnet_acceptance_pipeline";
    fs::remove_all(root);

    auto pipeline = [&](const std::string& name) -> bool {
        fs::path base = root / name;
        fs::path sim = base / "sim", fit = base / "fit", ev = base / "eval", pred = base / "pred",
                 clus = base / "clus";
        for (const auto& d : {sim, fit, ev, pred, clus}) fs::create_directories(d);
        std::string net = (sim / "network.csv").string();
        std::string mdl = (fit / "model.json").string();
        if (run_cli("simulate --M 20 --n 10 --R 3 --L-out 3 --L-in 3 --seed 42 --output-dir " +
                    sim.string()) != 0)
            return false;
        if (run_cli("fit --input " + net +
                    " --R 3 --D 5 --L-out 3 --L-in 3 --max-iters 40 --seed 7 --threads 1"
                    " --output-dir " +
                    fit.string()) != 0)
            return false;
        if (run_cli("eval --input " + net +
                    " --protocol links --fractions 0.2,0.4 --reps 2 --R 3 --D 5 --L-out 3"
                    " --L-in 3 --max-iters 30 --seed 9 --threads 1 --output-dir " +
                    ev.string()) != 0)
            return false;
        if (run_cli("predict --model " + mdl + " --t 0.5 --threshold 0.5 --output-dir " +
                    pred.string()) != 0)
            return false;
        if (run_cli("cluster --model " + mdl + " --mode static-out --L 3 --seed 3 --output-dir " +
                    clus.string()) != 0)
            return false;
        return true;
    };

    if (!pipeline("a") || !pipeline("b")) {
        Outcome out;
        out.detail = "pipeline run failed; see " + root.string();
        return out;
    }

    const std::vector<std::string> files = {
        "sim/network.csv",  "sim/truth_model.json", "sim/labels.csv",
        "fit/model.json",   "fit/report.json",      "eval/results.csv",
        "eval/summary.json", "pred/probabilities.csv", "pred/edges.csv",
        "clus/labels.csv"};
    int identical = 0;
    std::string first_diff;
    for (const auto& f : files) {
        if (slurp(root / "a" / f) == slurp(root / "b" / f))
            ++identical;
        else if (first_diff.empty())
            first_diff = f;
    }

    Outcome out;
    out.pass = identical == static_cast<int>(files.size());
    out.detail = std::to_string(identical) + "/" + std::to_string(files.size()) +
                 " pipeline outputs byte-identical across reruns" +
                 (first_diff.empty() ? std::string() : "; first difference: " + first_diff);
    return out;
}

struct Criterion {
    const char* name;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"gradient oracle", criterion1},
    {"Gram matrix exactness", criterion2},
    {"k-means exhaustive equivalence", criterion3},
    {"link holdout F1 band and trend", criterion4},
    {"held-out time interpolation", criterion5},
    {"planted cluster recovery", criterion6},
    {"monotone objective ascent", criterion7},
    {"rotation invariance", criterion8},
    {"pipeline determinism", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) {
        int c = std::atoi(argv[i]);
        if (c < 1 || c > 9) {
            std::fprintf(stderr, "usage: %s [criterion 1-9]...\n", argv[0]);
            return 2;
        }
        which.push_back(c);
    }
    if (which.empty())
        for (int c = 1; c <= 9; ++c) which.push_back(c);

    int failures = 0;
    for (int c : which) {
        const Criterion& crit = kCriteria[c - 1];
        Outcome result;
        try {
            result = crit.run();
        } catch (const std::exception& ex) {
            result.pass = false;
            result.detail = std::string("unexpected exception: ") + ex.what();
        }
        std::printf("[%s] criterion %d (%s): %s\n", result.pass ? "PASS" : "FAIL", c, crit.name,
                    result.detail.c_str());
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
