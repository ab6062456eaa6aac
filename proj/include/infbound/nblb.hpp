#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "infbound/graph.hpp"

namespace infbound {

/// Minimum-distance directed acyclic subnetwork: nodes ordered by BFS distance
/// from the seed set (ties by node id), keeping only forward edges.
struct Mdas {
    std::vector<NodeId> order;  // rank -> node
    std::vector<int> rank;      // node -> rank
    std::vector<int> distance;  // node -> BFS distance, -1 if unreachable
    // forward out-arcs per node: (dst, prob), dst of higher rank
    std::vector<std::vector<Arc>> forward_adj;
    // forward in-arcs per node, sorted by ascending rank of the source
    std::vector<std::vector<Arc>> backward_adj;
};

struct LBVector {
    std::vector<double> lb;  // per node
    double sigma_minus = 0.0;
    std::uint64_t ops = 0;  // message operations, for complexity checks
};

/// Order of incoming messages fed to the truncated inclusion-exclusion sum.
/// Arrival order (ascending rank of the in-neighbor) reproduces the reference
/// tables; greedy sorts by descending prob*LB, which often tightens the bound.
enum class LbMsgOrder { arrival, greedy };

inline Mdas build_mdas(const ICModel& model) {
    const int n = model.node_count();
    Mdas mdas;
    mdas.distance.assign(n, -1);
    std::vector<NodeId> queue;
    for (NodeId s : model.seeds()) {
        mdas.distance[s] = 0;
        queue.push_back(s);
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        NodeId u = queue[qi];
        for (const Arc& arc : model.out_adj(u))
            if (mdas.distance[arc.node] < 0) {
                mdas.distance[arc.node] = mdas.distance[u] + 1;
                queue.push_back(arc.node);
            }
    }

    mdas.order.resize(n);
    for (int v = 0; v < n; ++v) mdas.order[v] = v;
    std::sort(mdas.order.begin(), mdas.order.end(), [&](NodeId a, NodeId b) {
        // unreachable nodes (distance -1) go last, then by id
        auto key = [&](NodeId v) {
            int d = mdas.distance[v];
            return std::pair<int, NodeId>(d < 0 ? std::numeric_limits<int>::max() : d, v);
        };
        return key(a) < key(b);
    });
    mdas.rank.assign(n, 0);
    for (int r = 0; r < n; ++r) mdas.rank[mdas.order[r]] = r;

    mdas.forward_adj.resize(n);
    mdas.backward_adj.resize(n);
    for (int u = 0; u < n; ++u)
        for (const Arc& arc : model.out_adj(u))
            if (mdas.rank[u] < mdas.rank[arc.node]) {
                mdas.forward_adj[u].push_back(arc);
                mdas.backward_adj[arc.node].push_back({u, arc.prob});
            }
    for (int v = 0; v < n; ++v)
        std::sort(mdas.backward_adj[v].begin(), mdas.backward_adj[v].end(),
                  [&](const Arc& a, const Arc& b) { return mdas.rank[a.node] < mdas.rank[b.node]; });
    return mdas;
}

/// Truncated inclusion-exclusion over an ordered in-neighbor message list of
/// (LB(u_i), P'_{u_i v}) pairs; terms are accepted while the running prefix
/// sum of probabilities stays <= 1.
inline double process_incoming_msg_lb(const std::vector<std::pair<double, double>>& messages) {
    double result = 0.0;
    double prefix = 0.0;
    for (const auto& [lb, p] : messages) {
        if (prefix > 1.0) break;
        result += p * lb * (1.0 - prefix);
        prefix += p;
    }
    return result;
}

/// Nonbacktracking lower bound on the influence.
inline LBVector nb_lb(const ICModel& model, LbMsgOrder msg_order = LbMsgOrder::arrival) {
    const int n = model.node_count();
    Mdas mdas = build_mdas(model);

    LBVector result;
    result.lb.assign(n, 0.0);
    std::vector<std::pair<double, double>> messages;
    for (NodeId v : mdas.order) {
        double lb;
        if (model.is_seed(v)) {
            lb = 1.0;
            result.ops += 1;
        } else {
            messages.clear();
            for (const Arc& arc : mdas.backward_adj[v])
                messages.emplace_back(result.lb[arc.node], arc.prob);
            if (msg_order == LbMsgOrder::greedy)
                std::sort(messages.begin(), messages.end(),
                          [](const auto& a, const auto& b) { return a.first * a.second > b.first * b.second; });
            lb = process_incoming_msg_lb(messages);
            result.ops += messages.size() + 1;
        }
        result.lb[v] = lb;
        result.sigma_minus += lb;
        result.ops += mdas.forward_adj[v].size();
    }
    return result;
}

}  // namespace infbound
