#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "infbound/errors.hpp"
#include "infbound/graph.hpp"
#include "infbound/nbub.hpp"
#include "infbound/nblb.hpp"
#include "infbound/oracle.hpp"

namespace infbound {

struct TunableParams {
    int t = 0;
    enum class Mode { exact, mc } mode = Mode::exact;
    std::uint64_t mc_samples = 10000;  // mode == mc only
    std::uint64_t rng_seed = 0;
};

/// tNB-UB: exact path-union probabilities up to horizon t, then the NB-UB
/// recursion from level t+1 on.  t = 0 reduces to nb_ub.
inline UBTable t_nb_ub(const ICModel& model, const TunableParams& params,
                       const NbUbOptions& opt = {}, int cap = kDefaultOracleCap) {
    const int n = model.node_count();
    const int t = params.t;
    if (t < 0 || t > n - 1)
        throw InvalidHorizonError("tNB-UB horizon t must be in [0, n-1], got " +
                                  std::to_string(t));

    UBTable table;
    table.n = n;
    if (opt.retain_table) table.levels.resize(n);
    if (opt.retain_messages) table.messages.resize(n);
    std::vector<double> survive(n, 1.0);

    detail::NbUbState state;
    state.inbox.resize(n);
    std::vector<char> in_frontier(n, 0);

    for (NodeId u = 0; u < n; ++u) {
        double ub_t = path_union_prob(model, u, t, {}, PathLenMode::at_most, cap);
        if (opt.retain_table && ub_t != 0.0) table.levels[t].emplace(u, ub_t);
        survive[u] = 1.0 - ub_t;

        // seed sources carry no level-t messages beyond t = 0 (seed values are
        // pinned at level 0)
        if (model.is_seed(u) && t >= 1) continue;
        for (const Arc& arc : model.out_adj(u)) {
            NodeId v = arc.node;
            if (model.is_seed(v)) continue;
            double msg = path_edge_message_prob(model, u, v, t, cap);
            if (msg > 0.0) {
                if (opt.retain_messages)
                    table.messages[t].emplace(
                        (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v), msg);
                state.inbox[v].emplace_back(u, msg);
                if (!in_frontier[v]) {
                    in_frontier[v] = 1;
                    state.frontier.push_back(v);
                }
            }
        }
    }
    return detail::run_nb_ub_levels(model, std::move(state), t + 1, opt, std::move(table),
                                    std::move(survive));
}

/// tNB-LB: exact (or MC) infection probabilities on the induced subnetwork of
/// the first t MDAS nodes, then the NB-LB recursion.  t = |S_0| reduces to
/// nb_lb; t = n with exact mode reproduces the oracle.
inline LBVector t_nb_lb(const ICModel& model, const TunableParams& params,
                        LbMsgOrder msg_order = LbMsgOrder::arrival,
                        int cap = kDefaultOracleCap) {
    const int n = model.node_count();
    const int t = params.t;
    if (t < 0 || t > n)
        throw InvalidHorizonError("tNB-LB horizon t must be in [0, n], got " + std::to_string(t));

    Mdas mdas = build_mdas(model);
    std::vector<double> init_p;
    if (t > 0) {
        std::vector<NodeId> prefix(mdas.order.begin(), mdas.order.begin() + t);
        if (params.mode == TunableParams::Mode::exact) {
            init_p = exact_subnetwork_influence(model, prefix, cap).p;
        } else {
            std::vector<int> local(n, -1);
            for (int i = 0; i < t; ++i) local[prefix[i]] = i;
            std::vector<std::pair<NodeId, NodeId>> edges;
            std::vector<double> probs;
            for (std::size_t i = 0; i < model.edges().size(); ++i) {
                auto [u, v] = model.edges()[i];
                if (local[u] >= 0 && local[v] >= 0) {
                    edges.emplace_back(local[u], local[v]);
                    probs.push_back(model.edge_probs()[i]);
                }
            }
            std::vector<NodeId> seeds;
            for (NodeId s : model.seeds())
                if (local[s] >= 0) seeds.push_back(local[s]);
            if (seeds.empty()) throw EmptySeedSetError();
            ICModel sub(t, std::move(edges), std::move(probs), std::move(seeds));
            std::vector<double> sub_p;
            mc_influence(sub, params.mc_samples, params.rng_seed, &sub_p);
            init_p.assign(n, 0.0);
            for (int i = 0; i < t; ++i) init_p[prefix[i]] = sub_p[i];
        }
    }

    LBVector result;
    result.lb.assign(n, 0.0);
    std::vector<std::pair<double, double>> messages;
    for (int k = 0; k < n; ++k) {
        NodeId v = mdas.order[k];
        double lb;
        if (k < t) {
            lb = init_p[v];
            result.ops += 1;
        } else if (model.is_seed(v)) {
            lb = 1.0;
            result.ops += 1;
        } else {
            messages.clear();
            for (const Arc& arc : mdas.backward_adj[v])
                messages.emplace_back(result.lb[arc.node], arc.prob);
            if (msg_order == LbMsgOrder::greedy)
                std::sort(messages.begin(), messages.end(), [](const auto& a, const auto& b) {
                    return a.first * a.second > b.first * b.second;
                });
            lb = process_incoming_msg_lb(messages);
            result.ops += messages.size() + 1;
        }
        result.lb[v] = lb;
        result.sigma_minus += lb;
    }
    return result;
}

}  // namespace infbound
