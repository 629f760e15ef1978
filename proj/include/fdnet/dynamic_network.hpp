#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fdnet/rng.hpp"

namespace fdnet {

using MaskMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Directed unweighted network observed as binary adjacency snapshots over a
// fixed node universe. The mask marks which entries participate in the
// likelihood (true = observed); diagonals are always masked out. Internal
// times live on [0,1] (affine rescale of the ingested times, which are kept
// for reporting).
struct DynamicNetwork {
    std::vector<std::string> node_labels;
    std::vector<double> times;           // strictly increasing, in [0,1]
    std::vector<double> original_times;  // same order, source units
    std::vector<Eigen::MatrixXi> snapshots;
    std::vector<MaskMatrix> masks;

    int num_nodes() const { return static_cast<int>(node_labels.size()); }
    int num_times() const { return static_cast<int>(times.size()); }
};

// One held-out adjacency entry with its ground truth.
struct TestEntry {
    int time_index;
    int src;
    int dst;
    int truth;
};

struct HoldoutSplit {
    DynamicNetwork train;  // same snapshots, reduced mask
    std::vector<TestEntry> test_entries;
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

// Affine map of times onto [0,1]; a single time maps to 0.
inline std::vector<double> rescale_times(const std::vector<double>& raw) {
    std::vector<double> scaled(raw.size(), 0.0);
    if (raw.size() > 1) {
        double lo = raw.front(), hi = raw.back();
        for (std::size_t i = 0; i < raw.size(); ++i)
            scaled[i] = (raw[i] - lo) / (hi - lo);
    }
    return scaled;
}

}  // namespace detail

// Assembles a network from parallel snapshot/time arrays: full off-diagonal
// mask, diagonal zeroed and unobserved, times rescaled to [0,1].
inline DynamicNetwork network_from_snapshots(std::vector<std::string> labels,
                                             std::vector<double> raw_times,
                                             std::vector<Eigen::MatrixXi> snapshots) {
    const int M = static_cast<int>(labels.size());
    const int n = static_cast<int>(raw_times.size());
    if (n == 0 || snapshots.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("network_from_snapshots: times/snapshots size mismatch");
    for (int i = 1; i < n; ++i)
        if (!(raw_times[i] > raw_times[i - 1]))
            throw std::invalid_argument("network_from_snapshots: times must be strictly increasing");
    DynamicNetwork net;
    net.node_labels = std::move(labels);
    net.original_times = raw_times;
    net.times = detail::rescale_times(raw_times);
    net.snapshots = std::move(snapshots);
    net.masks.assign(n, MaskMatrix::Constant(M, M, true));
    for (int i = 0; i < n; ++i) {
        auto& A = net.snapshots[i];
        if (A.rows() != M || A.cols() != M)
            throw std::invalid_argument("network_from_snapshots: snapshot shape mismatch");
        for (int j = 0; j < M; ++j) {
            A(j, j) = 0;
            net.masks[i](j, j) = false;
        }
    }
    return net;
}

// Reads a `time,src,dst` CSV edge list. The node universe is the set of all
// labels seen anywhere (sorted), constant across time; a label absent at some
// time contributes observed zero rows/columns there. Self-loops and malformed
// rows are rejected with their row number.
inline DynamicNetwork load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty edge list: " + path);
    {
        auto header = detail::split_csv_row(line);
        if (header.size() != 3 || header[0] != "time" || header[1] != "src" || header[2] != "dst")
            throw std::runtime_error(path + ": expected header 'time,src,dst'");
    }
    struct Row {
        double time;
        std::string src, dst;
    };
    std::vector<Row> rows;
    std::set<std::string> labels;
    std::set<double> time_set;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split_csv_row(line);
        if (fields.size() != 3)
            throw std::runtime_error(path + ": row " + std::to_string(lineno) +
                                     ": expected 3 fields, got " + std::to_string(fields.size()));
        double t;
        try {
            std::size_t used = 0;
            t = std::stod(fields[0], &used);
            if (used != fields[0].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw std::runtime_error(path + ": row " + std::to_string(lineno) +
                                     ": bad time value '" + fields[0] + "'");
        }
        if (fields[1].empty() || fields[2].empty())
            throw std::runtime_error(path + ": row " + std::to_string(lineno) + ": empty node label");
        if (fields[1] == fields[2])
            throw std::runtime_error(path + ": row " + std::to_string(lineno) +
                                     ": self-loop on node '" + fields[1] + "'");
        rows.push_back({t, fields[1], fields[2]});
        labels.insert(fields[1]);
        labels.insert(fields[2]);
        time_set.insert(t);
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");

    std::vector<std::string> label_list(labels.begin(), labels.end());
    std::vector<double> raw_times(time_set.begin(), time_set.end());
    std::map<std::string, int> label_idx;
    for (std::size_t i = 0; i < label_list.size(); ++i) label_idx[label_list[i]] = static_cast<int>(i);
    std::map<double, int> time_idx;
    for (std::size_t i = 0; i < raw_times.size(); ++i) time_idx[raw_times[i]] = static_cast<int>(i);

    const int M = static_cast<int>(label_list.size());
    std::vector<Eigen::MatrixXi> snaps(raw_times.size(), Eigen::MatrixXi::Zero(M, M));
    for (const auto& r : rows)
        snaps[time_idx[r.time]](label_idx[r.src], label_idx[r.dst]) = 1;
    return network_from_snapshots(std::move(label_list), std::move(raw_times), std::move(snaps));
}

// Per time point, hides ceil(fraction * #positives) positive entries chosen
// uniformly plus an equal number of negatives (balanced test set; capped by
// the negatives available). Hidden entries keep their snapshot values and are
// recorded with truth. A time with no observed positives contributes nothing.
inline HoldoutSplit hold_out_links(const DynamicNetwork& net, double fraction,
                                   std::uint64_t rng_seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("hold_out_links: fraction must lie in (0,1)");
    HoldoutSplit split;
    split.train = net;
    Rng rng(derive_seed(rng_seed, 0x11));
    const int M = net.num_nodes();
    for (int i = 0; i < net.num_times(); ++i) {
        std::vector<std::pair<int, int>> pos, neg;
        for (int j = 0; j < M; ++j)
            for (int k = 0; k < M; ++k) {
                if (!net.masks[i](j, k)) continue;
                (net.snapshots[i](j, k) != 0 ? pos : neg).emplace_back(j, k);
            }
        if (pos.empty()) continue;
        std::size_t want = static_cast<std::size_t>(
            std::ceil(fraction * static_cast<double>(pos.size())));
        std::size_t take_pos = std::min(want, pos.size());
        std::size_t take_neg = std::min(want, neg.size());
        rng.choose_prefix(pos, take_pos);
        rng.choose_prefix(neg, take_neg);
        auto hide = [&](const std::vector<std::pair<int, int>>& v, std::size_t count) {
            for (std::size_t q = 0; q < count; ++q) {
                auto [j, k] = v[q];
                split.train.masks[i](j, k) = false;
                split.test_entries.push_back({i, j, k, net.snapshots[i](j, k)});
            }
        };
        hide(pos, take_pos);
        hide(neg, take_neg);
    }
    return split;
}

// Clears the full mask of ceil(fraction * n) interior time points chosen
// uniformly; the first and last times are never removed. Every off-diagonal
// entry of a removed time becomes a test entry.
inline HoldoutSplit hold_out_timepoints(const DynamicNetwork& net, double fraction,
                                        std::uint64_t rng_seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("hold_out_timepoints: fraction must lie in (0,1)");
    const int n = net.num_times();
    if (n < 3) throw std::invalid_argument("hold_out_timepoints: need at least 3 time points");
    const int interior = n - 2;
    const int count = static_cast<int>(std::ceil(fraction * static_cast<double>(n)));
    if (count >= interior)
        throw std::invalid_argument(
            "hold_out_timepoints: fraction would remove all interior time points");
    std::vector<int> candidates(interior);
    for (int i = 0; i < interior; ++i) candidates[i] = i + 1;
    Rng rng(derive_seed(rng_seed, 0x71));
    rng.choose_prefix(candidates, static_cast<std::size_t>(count));
    std::vector<int> chosen(candidates.begin(), candidates.begin() + count);
    std::sort(chosen.begin(), chosen.end());

    HoldoutSplit split;
    split.train = net;
    const int M = net.num_nodes();
    for (int i : chosen) {
        split.train.masks[i].setConstant(false);
        for (int j = 0; j < M; ++j)
            for (int k = 0; k < M; ++k)
                if (j != k && net.masks[i](j, k))
                    split.test_entries.push_back({i, j, k, net.snapshots[i](j, k)});
    }
    return split;
}

}  // namespace fdnet
