#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "infbound/graph.hpp"

namespace infbound {

/// Per-level upper bounds UB_l(v), sparse (absent entry = 0), plus the
/// aggregated bound sigma_plus.
struct UBTable {
    int n = 0;
    int levels_run = 0;
    double sigma_plus = 0.0;
    std::uint64_t ops = 0;  // message operations, for complexity checks
    // levels[l][v] = UB_l(v); only retained when requested
    std::vector<std::unordered_map<NodeId, double>> levels;
    // messages[l][(u<<32|v)] = UB_l(u->v); only retained when requested
    std::vector<std::unordered_map<std::uint64_t, double>> messages;
    bool table_retained = false;
    bool messages_retained = false;

    double ub(int l, NodeId v) const {
        if (l < 0 || l >= static_cast<int>(levels.size())) return 0.0;
        auto it = levels[l].find(v);
        return it == levels[l].end() ? 0.0 : it->second;
    }
    double message(int l, NodeId u, NodeId v) const {
        if (l < 0 || l >= static_cast<int>(messages.size())) return 0.0;
        std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
        auto it = messages[l].find(key);
        return it == messages[l].end() ? 0.0 : it->second;
    }
};

struct NbUbOptions {
    bool retain_table = true;
    bool retain_messages = false;
};

namespace detail {
inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }
}  // namespace detail

/// UB_l(u) = 1 - prod over incoming messages m of (1 - m).
inline double process_incoming_msg_ub(const std::vector<double>& messages) {
    double prod = 1.0;
    for (double m : messages) prod *= 1.0 - m;
    return detail::clamp01(1.0 - prod);
}

/// UB_l(u->v): nonbacktracking discount of the reverse message.  Callers must
/// handle the msg_from_target ~ 1 case themselves (see nb_ub), where the
/// division is replaced by the equivalent exclusion product.
inline double generate_outgoing_msg_ub(double msg_from_target, double ub_u, double p_uv) {
    if (msg_from_target == 0.0) return detail::clamp01(p_uv * ub_u);
    return detail::clamp01(p_uv * (1.0 - (1.0 - ub_u) / (1.0 - msg_from_target)));
}

namespace detail {

// One in-flight message: source node and value UB_{l-1}(u->v).
using MsgList = std::vector<std::pair<NodeId, double>>;

struct NbUbState {
    std::vector<NodeId> frontier;                // S_l
    std::vector<MsgList> inbox;                  // M_next, per node
    std::vector<char> in_frontier;
};

// Runs levels [start_level, n) of the message-passing loop, given seeded
// frontier/inbox.  `table` may arrive pre-filled with earlier-level entries
// and `survive` with their running products prod_l (1 - UB_l(v)); the final
// aggregate sums 1 - survive[v] over all nodes.
inline UBTable run_nb_ub_levels(const ICModel& model, NbUbState state, int start_level,
                                const NbUbOptions& opt, UBTable table,
                                std::vector<double> survive) {
    const int n = model.node_count();
    table.n = n;
    table.table_retained = opt.retain_table;
    table.messages_retained = opt.retain_messages;
    if (opt.retain_table) table.levels.resize(n);
    if (opt.retain_messages) table.messages.resize(n);
    if (survive.empty()) survive.assign(n, 1.0);

    std::vector<MsgList> current(n);
    MsgList scratch;

    int l = start_level;
    for (; l < n; ++l) {
        if (state.frontier.empty()) break;  // all walks exhausted; later UBs are 0
        std::vector<NodeId> next_frontier;
        std::vector<char> in_next(n, 0);
        for (NodeId u : state.frontier) {
            current[u].swap(state.inbox[u]);
            state.inbox[u].clear();
        }
        for (NodeId u : state.frontier) {
            const MsgList& curr = current[u];
            double prod = 1.0;
            for (const auto& [src, m] : curr) prod *= 1.0 - m;
            double ub_u = clamp01(1.0 - prod);
            table.ops += curr.size() + 1;
            if (opt.retain_table && ub_u != 0.0) table.levels[l].emplace(u, ub_u);
            survive[u] *= 1.0 - ub_u;

            for (const Arc& arc : model.out_adj(u)) {
                NodeId v = arc.node;
                if (model.is_seed(v)) continue;
                double reverse = 0.0;
                bool found = false;
                for (const auto& [src, m] : curr)
                    if (src == v) {
                        reverse = m;
                        found = true;
                        break;
                    }
                double out;
                if (!found || reverse == 0.0) {
                    out = generate_outgoing_msg_ub(0.0, ub_u, arc.prob);
                } else if (1.0 - reverse > 1e-12) {
                    out = generate_outgoing_msg_ub(reverse, ub_u, arc.prob);
                } else {
                    // division guard: exclusion product over the other sources
                    double excl = 1.0;
                    for (const auto& [src, m] : curr)
                        if (src != v) excl *= 1.0 - m;
                    out = clamp01(arc.prob * (1.0 - excl));
                }
                table.ops += curr.size() + 1;
                if (opt.retain_messages && out != 0.0)
                    table.messages[l].emplace(
                        (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v), out);
                state.inbox[v].emplace_back(u, out);
                if (!in_next[v]) {
                    in_next[v] = 1;
                    next_frontier.push_back(v);
                }
            }
            current[u].clear();
        }
        state.frontier = std::move(next_frontier);
    }
    table.levels_run = l;

    table.sigma_plus = 0.0;
    for (int v = 0; v < n; ++v) table.sigma_plus += 1.0 - survive[v];
    return table;
}

}  // namespace detail

/// Nonbacktracking upper bound on the influence.
inline UBTable nb_ub(const ICModel& model, const NbUbOptions& opt = {}) {
    const int n = model.node_count();
    detail::NbUbState state;
    state.inbox.resize(n);
    state.in_frontier.assign(n, 0);
    for (NodeId s : model.seeds()) {
        state.inbox[s].emplace_back(s, 1.0);
        state.frontier.push_back(s);
    }
    return detail::run_nb_ub_levels(model, std::move(state), 0, opt, UBTable{}, {});
}

/// Recomputes sigma_plus from a retained table (same aggregate nb_ub reports).
inline double sigma_plus(const UBTable& table) {
    std::vector<double> survive(table.n, 1.0);
    for (const auto& level : table.levels)
        for (const auto& [v, ub] : level) survive[v] *= 1.0 - ub;
    double sigma = 0.0;
    for (double s : survive) sigma += 1.0 - s;
    return sigma;
}

}  // namespace infbound
