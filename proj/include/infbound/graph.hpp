#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "infbound/errors.hpp"

namespace infbound {

using NodeId = int;

struct Arc {
    NodeId node;   // neighbor
    double prob;   // transmission probability of the directed edge
};

/// An independent-cascade problem instance: directed weighted graph plus a
/// nonempty seed set.  Immutable after construction; safe to share across
/// threads read-only.
class ICModel {
public:
    ICModel(int n, std::vector<std::pair<NodeId, NodeId>> edges, std::vector<double> probs,
            std::vector<NodeId> seeds)
        : n_(n), edges_(std::move(edges)), probs_(std::move(probs)) {
        if (n_ < 1) throw InvalidParamsError("node count must be >= 1");
        if (edges_.size() != probs_.size())
            throw InvalidParamsError("edge and probability counts differ");
        if (seeds.empty()) throw EmptySeedSetError();

        std::unordered_set<std::uint64_t> seen;
        seen.reserve(edges_.size() * 2);
        out_adj_.resize(n_);
        in_adj_.resize(n_);
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            auto [u, v] = edges_[i];
            double p = probs_[i];
            if (u < 0 || u >= n_) throw IndexOutOfRangeError(u, n_);
            if (v < 0 || v >= n_) throw IndexOutOfRangeError(v, n_);
            if (u == v) throw SelfLoopError(u);
            if (!(p >= 0.0 && p <= 1.0)) throw ProbOutOfRangeError(p);
            std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
            if (!seen.insert(key).second) throw DuplicateEdgeError(u, v);
            out_adj_[u].push_back({v, p});
            in_adj_[v].push_back({u, p});
        }

        is_seed_.assign(n_, false);
        std::set<NodeId> uniq(seeds.begin(), seeds.end());
        for (NodeId s : uniq) {
            if (s < 0 || s >= n_) throw IndexOutOfRangeError(s, n_);
            is_seed_[s] = true;
        }
        seeds_.assign(uniq.begin(), uniq.end());
    }

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
    const std::vector<double>& edge_probs() const { return probs_; }
    const std::vector<NodeId>& seeds() const { return seeds_; }
    bool is_seed(NodeId v) const { return is_seed_[v]; }
    const std::vector<Arc>& out_adj(NodeId v) const { return out_adj_[v]; }
    const std::vector<Arc>& in_adj(NodeId v) const { return in_adj_[v]; }

    bool operator==(const ICModel& other) const {
        if (n_ != other.n_ || seeds_ != other.seeds_) return false;
        auto canon = [](const ICModel& m) {
            std::vector<std::tuple<NodeId, NodeId, double>> es;
            es.reserve(m.edges_.size());
            for (std::size_t i = 0; i < m.edges_.size(); ++i)
                es.emplace_back(m.edges_[i].first, m.edges_[i].second, m.probs_[i]);
            std::sort(es.begin(), es.end());
            return es;
        };
        return canon(*this) == canon(other);
    }

private:
    int n_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    std::vector<double> probs_;
    std::vector<NodeId> seeds_;
    std::vector<bool> is_seed_;
    std::vector<std::vector<Arc>> out_adj_;
    std::vector<std::vector<Arc>> in_adj_;
};

inline ICModel build_ic_model(int n, std::vector<std::pair<NodeId, NodeId>> edges,
                              std::vector<double> probs, std::vector<NodeId> seeds) {
    return ICModel(n, std::move(edges), std::move(probs), std::move(seeds));
}

/// Each undirected edge {u,v} with probability p becomes (u,v) and (v,u), both
/// with probability p.
inline ICModel from_undirected(int n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                               const std::vector<double>& probs, std::vector<NodeId> seeds) {
    if (edges.size() != probs.size())
        throw InvalidParamsError("edge and probability counts differ");
    std::vector<std::pair<NodeId, NodeId>> directed;
    std::vector<double> dprobs;
    directed.reserve(edges.size() * 2);
    dprobs.reserve(edges.size() * 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        directed.emplace_back(edges[i].first, edges[i].second);
        directed.emplace_back(edges[i].second, edges[i].first);
        dprobs.push_back(probs[i]);
        dprobs.push_back(probs[i]);
    }
    return ICModel(n, std::move(directed), std::move(dprobs), std::move(seeds));
}

namespace detail {

inline std::string format_prob(double p) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return buf;
}

}  // namespace detail

/// Text format: line 1 `directed <n>` or `undirected <n>`, line 2
/// `seeds <id> ...`, then one `<src> <dst> <prob>` per line.  `#` starts a
/// comment.  Probabilities carry 17 significant digits so round-trips are
/// bit-exact.
inline void save_edge_list(const ICModel& model, std::ostream& out) {
    out << "directed " << model.node_count() << "\n";
    out << "seeds";
    for (NodeId s : model.seeds()) out << ' ' << s;
    out << "\n";
    for (std::size_t i = 0; i < model.edges().size(); ++i)
        out << model.edges()[i].first << ' ' << model.edges()[i].second << ' '
            << detail::format_prob(model.edge_probs()[i]) << "\n";
}

inline void save_edge_list(const ICModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    save_edge_list(model, out);
    if (!out) throw IoError("write failed: " + path);
}

inline ICModel load_edge_list(std::istream& in) {
    std::string line;
    int line_no = 0;
    auto next_content_line = [&](std::string& out_line) {
        while (std::getline(in, line)) {
            ++line_no;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::size_t i = line.find_first_not_of(" \t\r");
            if (i == std::string::npos) continue;
            out_line = line;
            return true;
        }
        return false;
    };

    std::string header;
    if (!next_content_line(header)) throw ParseError(line_no, "missing header line");
    std::istringstream hs(header);
    std::string kind;
    int n = 0;
    if (!(hs >> kind >> n) || (kind != "directed" && kind != "undirected") || n < 1)
        throw ParseError(line_no, "expected 'directed <n>' or 'undirected <n>'");
    bool undirected = (kind == "undirected");

    std::string seed_line;
    if (!next_content_line(seed_line)) throw ParseError(line_no, "missing seeds line");
    std::istringstream ss(seed_line);
    std::string tag;
    ss >> tag;
    if (tag != "seeds") throw ParseError(line_no, "expected 'seeds <id> ...'");
    std::vector<NodeId> seeds;
    NodeId s;
    while (ss >> s) seeds.push_back(s);
    if (seeds.empty()) throw ParseError(line_no, "seed set is empty");

    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<double> probs;
    std::string edge_line;
    while (next_content_line(edge_line)) {
        std::istringstream es(edge_line);
        NodeId u, v;
        double p;
        if (!(es >> u >> v >> p)) throw ParseError(line_no, "expected '<src> <dst> <prob>'");
        std::string extra;
        if (es >> extra) throw ParseError(line_no, "trailing tokens: " + extra);
        if (!(p >= 0.0 && p <= 1.0)) throw ParseError(line_no, "probability outside [0,1]");
        edges.emplace_back(u, v);
        probs.push_back(p);
    }

    try {
        return undirected ? from_undirected(n, edges, probs, std::move(seeds))
                          : build_ic_model(n, std::move(edges), std::move(probs), std::move(seeds));
    } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
    }
}

inline ICModel load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return load_edge_list(in);
}

/// FNV-1a over the canonical serialization; used as the model fingerprint.
inline std::uint64_t model_content_hash(const ICModel& model) {
    std::ostringstream os;
    save_edge_list(model, os);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : os.str()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace infbound
