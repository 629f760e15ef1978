#pragma once

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "fdnet/dynamic_network.hpp"
#include "fdnet/evaluation.hpp"
#include "fdnet/model.hpp"
#include "fdnet/trainer.hpp"

namespace fdnet {

// Shortest round-trip decimal form; keeps every emitted file byte-stable.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw std::runtime_error(path + ": invalid JSON: " + ex.what());
    }
    return j;
}

}  // namespace detail

// Model file: {basis:{degree,D,T}, R, node_labels, gamma, beta}. Knots and
// Gram matrices are never stored; load rebuilds them from (degree, D, T).
inline void save_model(const EmbeddingModel& model, const std::string& path) {
    nlohmann::json j;
    j["basis"] = {{"degree", model.basis.degree},
                  {"D", model.basis.num_basis},
                  {"T", model.basis.domain_end}};
    j["R"] = model.embedding_dim;
    j["node_labels"] = model.node_labels;
    auto gamma = nlohmann::json::array();
    for (const auto& g : model.gamma) {
        auto node = nlohmann::json::array();
        for (int r = 0; r < g.rows(); ++r) {
            auto row = nlohmann::json::array();
            for (int d = 0; d < g.cols(); ++d) row.push_back(g(r, d));
            node.push_back(std::move(row));
        }
        gamma.push_back(std::move(node));
    }
    j["gamma"] = std::move(gamma);
    auto beta = nlohmann::json::array();
    for (int k = 0; k < model.beta.rows(); ++k) {
        auto row = nlohmann::json::array();
        for (int r = 0; r < model.beta.cols(); ++r) row.push_back(model.beta(k, r));
        beta.push_back(std::move(row));
    }
    j["beta"] = std::move(beta);
    detail::open_out(path) << j.dump(2) << '\n';
}

inline EmbeddingModel load_model(const std::string& path) {
    nlohmann::json j = detail::load_json(path);
    try {
        const auto& jb = j.at("basis");
        BasisSystem basis = make_basis(jb.at("T").get<double>(), jb.at("D").get<int>(),
                                       jb.at("degree").get<int>());
        int R = j.at("R").get<int>();
        std::vector<std::string> labels = j.at("node_labels").get<std::vector<std::string>>();
        EmbeddingModel model = make_zero_model(basis, R, labels);
        const auto& jg = j.at("gamma");
        const auto& jbeta = j.at("beta");
        if (static_cast<int>(jg.size()) != model.num_nodes() ||
            static_cast<int>(jbeta.size()) != model.num_nodes())
            throw std::runtime_error("gamma/beta node count mismatch");
        for (int jn = 0; jn < model.num_nodes(); ++jn) {
            if (static_cast<int>(jg[jn].size()) != R)
                throw std::runtime_error("gamma dimension mismatch");
            for (int r = 0; r < R; ++r) {
                if (static_cast<int>(jg[jn][r].size()) != basis.num_basis)
                    throw std::runtime_error("gamma basis-count mismatch");
                for (int d = 0; d < basis.num_basis; ++d)
                    model.gamma[jn](r, d) = jg[jn][r][d].get<double>();
            }
            if (static_cast<int>(jbeta[jn].size()) != R)
                throw std::runtime_error("beta dimension mismatch");
            for (int r = 0; r < R; ++r) model.beta(jn, r) = jbeta[jn][r].get<double>();
        }
        return model;
    } catch (const nlohmann::json::exception& ex) {
        throw std::runtime_error(path + ": bad model file: " + ex.what());
    }
}

// Snapshot export: {labels, times, matrices} with 0/1 entries; times in
// source units.
inline void save_network_json(const DynamicNetwork& net, const std::string& path) {
    nlohmann::json j;
    j["labels"] = net.node_labels;
    j["times"] = net.original_times;
    auto mats = nlohmann::json::array();
    for (const auto& A : net.snapshots) {
        auto mat = nlohmann::json::array();
        for (int r = 0; r < A.rows(); ++r) {
            auto row = nlohmann::json::array();
            for (int c = 0; c < A.cols(); ++c) row.push_back(A(r, c));
            mat.push_back(std::move(row));
        }
        mats.push_back(std::move(mat));
    }
    j["matrices"] = std::move(mats);
    detail::open_out(path) << j.dump(2) << '\n';
}

// Standard edge-list CSV, time-major then row-major; times in source units.
inline void save_edge_list(const DynamicNetwork& net, const std::string& path) {
    auto out = detail::open_out(path);
    out << "time,src,dst\n";
    for (int i = 0; i < net.num_times(); ++i)
        for (int j = 0; j < net.num_nodes(); ++j)
            for (int k = 0; k < net.num_nodes(); ++k)
                if (net.snapshots[i](j, k) != 0)
                    out << format_double(net.original_times[i]) << ',' << net.node_labels[j] << ','
                        << net.node_labels[k] << '\n';
}

inline void save_report(const TrainReport& report, const std::string& path) {
    nlohmann::json j;
    j["objective_history"] = report.objective_history;
    j["iterations_run"] = report.iterations_run;
    j["converged"] = report.converged;
    j["final_objective"] = report.final_objective;
    j["curvature_norm"] = report.curvature_norm;
    j["clusters"] = {{"assign_out", report.clusters.assign_out},
                     {"assign_in", report.clusters.assign_in}};
    detail::open_out(path) << j.dump(2) << '\n';
}

// Planted or estimated cluster labels, one row per node.
inline void save_labels_csv(const std::vector<std::string>& nodes,
                            const std::vector<std::vector<int>>& columns,
                            const std::vector<std::string>& column_names,
                            const std::string& path) {
    auto out = detail::open_out(path);
    out << "node";
    for (const auto& name : column_names) out << ',' << name;
    out << '\n';
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        out << nodes[j];
        for (const auto& col : columns) out << ',' << col[j];
        out << '\n';
    }
}

inline void save_holdout_csv(const HoldoutResult& result, const std::string& path) {
    auto out = detail::open_out(path);
    out << "fraction,rep,f1\n";
    for (const auto& row : result.per_rep)
        out << format_double(row.fraction) << ',' << row.rep << ',' << format_double(row.f1)
            << '\n';
}

inline void save_holdout_summary(const HoldoutResult& result, const std::string& protocol,
                                 const std::string& path) {
    nlohmann::json j;
    j["protocol"] = protocol;
    auto rows = nlohmann::json::array();
    for (const auto& row : result.summary)
        rows.push_back(
            {{"fraction", row.fraction}, {"mean_f1", row.mean_f1}, {"sd_f1", row.sd_f1}});
    j["rows"] = std::move(rows);
    detail::open_out(path) << j.dump(2) << '\n';
}

// Long-format trajectory table for external plotting.
inline void save_trajectory_csv(const std::vector<std::pair<double, double>>& observed,
                                const std::vector<std::pair<double, double>>& estimated,
                                const std::string& path) {
    auto out = detail::open_out(path);
    out << "t,value,series\n";
    for (const auto& [t, v] : observed)
        out << format_double(t) << ',' << format_double(v) << ",observed_degree\n";
    for (const auto& [t, v] : estimated)
        out << format_double(t) << ',' << format_double(v) << ",estimated_connectivity\n";
}

inline void save_probability_csv(const Eigen::MatrixXd& probabilities, const std::string& path) {
    auto out = detail::open_out(path);
    for (int j = 0; j < probabilities.rows(); ++j) {
        for (int k = 0; k < probabilities.cols(); ++k) {
            if (k > 0) out << ',';
            out << format_double(probabilities(j, k));
        }
        out << '\n';
    }
}

inline void save_predicted_edges(const LinkPrediction& pred,
                                 const std::vector<std::string>& labels,
                                 const std::string& path) {
    auto out = detail::open_out(path);
    out << "src,dst,probability\n";
    for (int j = 0; j < pred.links.rows(); ++j)
        for (int k = 0; k < pred.links.cols(); ++k)
            if (pred.links(j, k) != 0)
                out << labels[j] << ',' << labels[k] << ','
                    << format_double(pred.probabilities(j, k)) << '\n';
}

}  // namespace fdnet
