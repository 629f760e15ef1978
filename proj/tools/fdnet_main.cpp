// fdnet: simulate, fit, predict, evaluate, and cluster dynamic-network
// embedding models from the command line. Every command is a deterministic
// function of its input files, flags, and --seed; reruns produce identical
// bytes. Exit codes: 0 success, 2 usage error, 1 runtime failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fdnet/fdnet.hpp"

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shared flag bundle; each subcommand registers the subset it uses.
struct Options {
    std::string input;
    std::string model_path;
    std::string output_dir = ".";
    int M = 50;
    int n = 20;
    int R = 6;
    int D = 0;  // 0 = auto: max(6, ceil(n/4)) capped at n, floored at degree+1
    int degree = 3;
    int L_out = 4;
    int L_in = 5;
    int L = 0;
    double sigma_alpha = 0.25;
    double sigma_beta = 0.25;
    double center_scale = 1.0;
    double lambda_a0 = 0.1;
    double lambda_a1 = 0.01;
    double lambda_a2 = 1.0;
    double lambda_b0 = 0.1;
    double lambda_b1 = 0.01;
    double lr_alpha = 0.05;
    double lr_beta = 0.05;
    int max_iters = 200;
    double tol = 1e-6;
    int kmeans_every = 5;
    int kmeans_restarts = 10;
    double init_scale = 0.1;
    unsigned threads = 0;
    std::uint64_t seed = 0;
    double threshold = 0.5;
    std::string fractions = "0.1,0.2,0.3,0.4,0.5";
    int reps = 20;
    double t = std::nan("");
    int grid_points = 101;
    std::string mode;
    std::string protocol = "links";
    bool verbose = false;
};

std::vector<double> parse_fractions(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            double f = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument("trailing characters");
            out.push_back(f);
        } catch (const std::exception&) {
            throw UsageError("--fractions: bad value '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("--fractions: empty list");
    for (double f : out)
        if (!(f > 0.0 && f < 1.0)) throw UsageError("--fractions: values must lie in (0,1)");
    return out;
}

int resolve_D(const Options& opt, int n) {
    if (opt.D > 0) {
        if (opt.D < opt.degree + 1) throw UsageError("--D must be at least degree+1");
        return opt.D;
    }
    int d = std::max(6, (n + 3) / 4);
    d = std::min(d, n);
    return std::max(d, opt.degree + 1);
}

fdnet::TrainConfig train_config(const Options& opt) {
    fdnet::TrainConfig config;
    config.penalties.alpha_center = opt.lambda_a0;
    config.penalties.alpha_ridge = opt.lambda_a1;
    config.penalties.alpha_smooth = opt.lambda_a2;
    config.penalties.beta_center = opt.lambda_b0;
    config.penalties.beta_ridge = opt.lambda_b1;
    config.lr_alpha = opt.lr_alpha;
    config.lr_beta = opt.lr_beta;
    config.max_iters = opt.max_iters;
    config.tol = opt.tol;
    config.kmeans_every = opt.kmeans_every;
    config.kmeans_restarts = opt.kmeans_restarts;
    config.init_scale = opt.init_scale;
    config.threads = opt.threads;
    config.seed = opt.seed;
    config.verbose = opt.verbose;
    return config;
}

std::filesystem::path out_path(const Options& opt, const std::string& name) {
    std::filesystem::create_directories(opt.output_dir);
    return std::filesystem::path(opt.output_dir) / name;
}

void validate_positive(double v, const char* flag) {
    if (!(v > 0.0)) throw UsageError(std::string(flag) + " must be positive");
}

void validate_lambdas(const Options& opt) {
    if (opt.lambda_a0 < 0 || opt.lambda_a1 < 0 || opt.lambda_a2 < 0 || opt.lambda_b0 < 0 ||
        opt.lambda_b1 < 0)
        throw UsageError("penalty weights must be nonnegative");
}

void cmd_simulate(const Options& opt) {
    if (opt.M < 1) throw UsageError("--M must be positive");
    if (opt.n < 2) throw UsageError("--n must be at least 2");
    if (opt.R < 1) throw UsageError("--R must be positive");
    if (opt.L_out < 1 || opt.L_out > opt.M) throw UsageError("--L-out exceeds M");
    if (opt.L_in < 1 || opt.L_in > opt.M) throw UsageError("--L-in exceeds M");
    if (opt.sigma_alpha < 0 || opt.sigma_beta < 0 || opt.center_scale < 0)
        throw UsageError("--sigma-alpha/--sigma-beta/--center-scale must be nonnegative");
    fdnet::GeneratorSpec spec;
    spec.num_nodes = opt.M;
    spec.num_times = opt.n;
    spec.embedding_dim = opt.R;
    spec.clusters_out = opt.L_out;
    spec.clusters_in = opt.L_in;
    spec.sigma_alpha = opt.sigma_alpha;
    spec.sigma_beta = opt.sigma_beta;
    spec.center_scale = opt.center_scale;
    spec.basis = fdnet::make_basis(1.0, resolve_D(opt, opt.n), opt.degree);
    spec.seed = opt.seed;
    fdnet::SyntheticNetwork data = fdnet::generate(spec);
    fdnet::save_edge_list(data.network, out_path(opt, "network.csv").string());
    fdnet::save_model(data.truth, out_path(opt, "truth_model.json").string());
    fdnet::save_labels_csv(data.network.node_labels, {data.labels_out, data.labels_in},
                           {"out_cluster", "in_cluster"}, out_path(opt, "labels.csv").string());
}

void cmd_fit(const Options& opt) {
    if (opt.input.empty()) throw UsageError("--input is required");
    if (opt.R < 1) throw UsageError("--R must be positive");
    validate_positive(opt.lr_alpha, "--lr-alpha");
    validate_positive(opt.lr_beta, "--lr-beta");
    validate_positive(opt.tol, "--tol");
    if (opt.max_iters < 1) throw UsageError("--max-iters must be at least 1");
    if (opt.kmeans_every < 1) throw UsageError("--kmeans-every must be positive");
    if (opt.kmeans_restarts < 1) throw UsageError("--kmeans-restarts must be positive");
    if (opt.init_scale < 0) throw UsageError("--init-scale must be nonnegative");
    validate_lambdas(opt);
    fdnet::DynamicNetwork net = fdnet::load_edge_list(opt.input);
    if (opt.L_out < 1 || opt.L_out > net.num_nodes()) throw UsageError("--L-out exceeds M");
    if (opt.L_in < 1 || opt.L_in > net.num_nodes()) throw UsageError("--L-in exceeds M");
    fdnet::BasisSystem basis = fdnet::make_basis(1.0, resolve_D(opt, net.num_times()), opt.degree);
    auto [model, report] = fdnet::fit(net, train_config(opt), opt.R, basis, opt.L_out, opt.L_in);
    fdnet::save_model(model, out_path(opt, "model.json").string());
    fdnet::save_report(report, out_path(opt, "report.json").string());
}

void cmd_predict(const Options& opt) {
    if (opt.model_path.empty()) throw UsageError("--model is required");
    if (std::isnan(opt.t)) throw UsageError("--t is required");
    if (!(opt.threshold > 0.0 && opt.threshold < 1.0))
        throw UsageError("--threshold must lie in (0,1)");
    fdnet::EmbeddingModel model = fdnet::load_model(opt.model_path);
    if (!(opt.t >= 0.0 && opt.t <= model.basis.domain_end))
        throw UsageError("--t outside the model domain [0," +
                         fdnet::format_double(model.basis.domain_end) + "]");
    fdnet::LinkPrediction pred = fdnet::predict_links(model, opt.t, opt.threshold);
    fdnet::save_probability_csv(pred.probabilities, out_path(opt, "probabilities.csv").string());
    fdnet::save_predicted_edges(pred, model.node_labels, out_path(opt, "edges.csv").string());
}

void cmd_eval(const Options& opt) {
    if (opt.input.empty()) throw UsageError("--input is required");
    if (!(opt.threshold > 0.0 && opt.threshold < 1.0))
        throw UsageError("--threshold must lie in (0,1)");
    validate_lambdas(opt);
    fdnet::DynamicNetwork net = fdnet::load_edge_list(opt.input);
    if (opt.protocol == "trajectory") {
        if (opt.model_path.empty()) throw UsageError("--model is required for trajectory output");
        if (opt.grid_points < 2) throw UsageError("--grid-points must be at least 2");
        fdnet::EmbeddingModel model = fdnet::load_model(opt.model_path);
        std::vector<double> degrees = fdnet::degree_trajectory(net);
        std::vector<std::pair<double, double>> observed;
        for (int i = 0; i < net.num_times(); ++i)
            observed.emplace_back(net.original_times[i], degrees[i]);
        std::vector<double> grid(opt.grid_points);
        for (int i = 0; i < opt.grid_points; ++i)
            grid[i] = model.basis.domain_end * static_cast<double>(i) / (opt.grid_points - 1);
        std::vector<double> connectivity = fdnet::estimated_connectivity(model, grid);
        double lo = net.original_times.front();
        double hi = net.original_times.back();
        std::vector<std::pair<double, double>> estimated;
        for (int i = 0; i < opt.grid_points; ++i)
            estimated.emplace_back(lo + (hi - lo) * grid[i] / model.basis.domain_end,
                                   connectivity[i]);
        fdnet::save_trajectory_csv(observed, estimated, out_path(opt, "trajectory.csv").string());
        return;
    }
    if (opt.protocol != "links" && opt.protocol != "timepoints")
        throw UsageError("--protocol must be links, timepoints, or trajectory");
    if (opt.reps < 1) throw UsageError("--reps must be positive");
    std::vector<double> fractions = parse_fractions(opt.fractions);
    fdnet::EvalConfig config;
    config.train = train_config(opt);
    config.R = opt.R;
    config.D = resolve_D(opt, net.num_times());
    config.degree = opt.degree;
    config.L_out = opt.L_out;
    config.L_in = opt.L_in;
    config.threshold = opt.threshold;
    fdnet::HoldoutResult result =
        opt.protocol == "links"
            ? fdnet::run_link_holdout(net, fractions, opt.reps, config, opt.seed)
            : fdnet::run_timepoint_holdout(net, fractions, opt.reps, config, opt.seed);
    fdnet::save_holdout_csv(result, out_path(opt, "results.csv").string());
    fdnet::save_holdout_summary(result, opt.protocol, out_path(opt, "summary.json").string());
}

void cmd_cluster(const Options& opt) {
    if (opt.model_path.empty()) throw UsageError("--model is required");
    if (opt.L < 1) throw UsageError("--L must be positive");
    if (opt.kmeans_restarts < 1) throw UsageError("--kmeans-restarts must be positive");
    fdnet::EmbeddingModel model = fdnet::load_model(opt.model_path);
    if (opt.L > model.num_nodes()) throw UsageError("--L exceeds the number of nodes");
    std::vector<int> labels;
    if (opt.mode == "static-out") {
        labels = fdnet::kmeans_functional(model.gamma, model.basis.gram, opt.L,
                                          opt.kmeans_restarts, opt.seed)
                     .assignments;
    } else if (opt.mode == "static-in") {
        labels = fdnet::kmeans_euclidean(model.beta, opt.L, opt.kmeans_restarts, opt.seed)
                     .assignments;
    } else if (opt.mode == "dynamic") {
        if (std::isnan(opt.t)) throw UsageError("--mode dynamic requires --t");
        if (!(opt.t >= 0.0 && opt.t <= model.basis.domain_end))
            throw UsageError("--t outside the model domain [0," +
                             fdnet::format_double(model.basis.domain_end) + "]");
        labels = fdnet::cluster_at_time(model, opt.t, opt.L, opt.kmeans_restarts, opt.seed);
    } else {
        throw UsageError("--mode must be static-out, static-in, or dynamic");
    }
    fdnet::save_labels_csv(model.node_labels, {labels}, {"label"},
                           out_path(opt, "labels.csv").string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic-network embedding with functional sending trajectories"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--output-dir", opt.output_dir, "Directory for output files");
        cmd->add_option("--seed", opt.seed, "Master seed; all randomness derives from it");
        cmd->add_flag("--verbose", opt.verbose, "Progress lines on standard error");
    };
    auto add_basis = [&](CLI::App* cmd) {
        cmd->add_option("--D", opt.D, "Basis size (default max(6,ceil(n/4)) capped at n)");
        cmd->add_option("--degree", opt.degree, "Spline degree")->check(CLI::NonNegativeNumber);
    };
    auto add_train = [&](CLI::App* cmd) {
        cmd->add_option("--R", opt.R, "Embedding dimension");
        cmd->add_option("--L-out", opt.L_out, "Sending cluster count");
        cmd->add_option("--L-in", opt.L_in, "Receiving cluster count");
        cmd->add_option("--lambda-a0", opt.lambda_a0, "Sending centrality weight");
        cmd->add_option("--lambda-a1", opt.lambda_a1, "Sending ridge weight");
        cmd->add_option("--lambda-a2", opt.lambda_a2, "Smoothness weight");
        cmd->add_option("--lambda-b0", opt.lambda_b0, "Receiving centrality weight");
        cmd->add_option("--lambda-b1", opt.lambda_b1, "Receiving ridge weight");
        cmd->add_option("--lr-alpha", opt.lr_alpha, "Sending learning rate");
        cmd->add_option("--lr-beta", opt.lr_beta, "Receiving learning rate");
        cmd->add_option("--max-iters", opt.max_iters, "Iteration cap");
        cmd->add_option("--tol", opt.tol, "Relative objective-change stopping rule");
        cmd->add_option("--kmeans-every", opt.kmeans_every, "Iterations between center refreshes");
        cmd->add_option("--kmeans-restarts", opt.kmeans_restarts, "K-means restarts");
        cmd->add_option("--init-scale", opt.init_scale, "Initialization standard deviation");
        cmd->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Generate a planted-cluster network");
    simulate->add_option("--M", opt.M, "Node count");
    simulate->add_option("--n", opt.n, "Snapshot count");
    simulate->add_option("--R", opt.R, "Embedding dimension");
    simulate->add_option("--L-out", opt.L_out, "Sending cluster count");
    simulate->add_option("--L-in", opt.L_in, "Receiving cluster count");
    simulate->add_option("--sigma-alpha", opt.sigma_alpha, "Within-cluster noise of gamma");
    simulate->add_option("--sigma-beta", opt.sigma_beta, "Within-cluster noise of beta");
    simulate->add_option("--center-scale", opt.center_scale, "Cluster center scale");
    add_basis(simulate);
    add_common(simulate);

    CLI::App* fit = app.add_subcommand("fit", "Fit an embedding model to an edge list");
    fit->add_option("--input", opt.input, "Edge list CSV (time,src,dst)");
    add_basis(fit);
    add_train(fit);
    add_common(fit);

    CLI::App* predict = app.add_subcommand("predict", "Predict links at a time point");
    predict->add_option("--model", opt.model_path, "Model JSON path");
    predict->add_option("--t", opt.t, "Time point in the model domain");
    predict->add_option("--threshold", opt.threshold, "Link threshold (p >= threshold)");
    add_common(predict);

    CLI::App* eval = app.add_subcommand("eval", "Holdout evaluation or trajectory export");
    eval->add_option("--input", opt.input, "Edge list CSV (time,src,dst)");
    eval->add_option("--protocol", opt.protocol, "links | timepoints | trajectory");
    eval->add_option("--fractions", opt.fractions, "Comma-separated holdout fractions");
    eval->add_option("--reps", opt.reps, "Replicates per fraction");
    eval->add_option("--threshold", opt.threshold, "Link threshold");
    eval->add_option("--model", opt.model_path, "Model JSON (trajectory protocol)");
    eval->add_option("--grid-points", opt.grid_points, "Trajectory grid size");
    add_basis(eval);
    add_train(eval);
    add_common(eval);

    CLI::App* cluster = app.add_subcommand("cluster", "Cluster nodes from a fitted model");
    cluster->add_option("--model", opt.model_path, "Model JSON path");
    cluster->add_option("--mode", opt.mode, "static-out | static-in | dynamic");
    cluster->add_option("--L", opt.L, "Cluster count");
    cluster->add_option("--t", opt.t, "Time point (dynamic mode)");
    cluster->add_option("--kmeans-restarts", opt.kmeans_restarts, "K-means restarts");
    add_common(cluster);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) cmd_simulate(opt);
        else if (fit->parsed()) cmd_fit(opt);
        else if (predict->parsed()) cmd_predict(opt);
        else if (eval->parsed()) cmd_eval(opt);
        else if (cluster->parsed()) cmd_cluster(opt);
    } catch (const UsageError& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
