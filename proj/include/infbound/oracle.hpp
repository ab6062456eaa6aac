#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "infbound/errors.hpp"
#include "infbound/graph.hpp"
#include "infbound/rng.hpp"

namespace infbound {

/// Default cap on the number of undetermined edges a state enumeration may
/// cover (2^25 states is still sub-second per evaluation).
inline constexpr int kDefaultOracleCap = 25;

struct InfectionProbabilities {
    std::vector<double> p;  // per node, indexed by NodeId
    double sigma = 0.0;
};

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t rng_seed = 0;
};

namespace detail {

// Local view for live-arc enumeration: node 0 is a super-source standing for
// the whole seed set, edges with probability strictly inside (0,1) get one
// enumeration bit each, p==1 edges are always-open arcs.
struct LocalArcGraph {
    int local_n = 1;
    std::vector<int> local_of;            // original -> local id, -1 if absent
    std::vector<NodeId> original_of;      // local id (>=1) -> original
    std::vector<std::vector<int>> always_adj;
    std::vector<std::tuple<int, int, double>> enum_edges;  // (local u, local v, p)

    int local_id(NodeId v, int n) {
        if (local_of.empty()) local_of.assign(n, -1);
        int& id = local_of[v];
        if (id < 0) {
            id = local_n++;
            original_of.push_back(v);
        }
        return id;
    }
};

inline LocalArcGraph build_local_arcs(const ICModel& model, int cap) {
    LocalArcGraph g;
    g.always_adj.resize(1);
    g.original_of.push_back(-1);  // placeholder for the super-source
    for (std::size_t i = 0; i < model.edges().size(); ++i) {
        auto [u, v] = model.edges()[i];
        double p = model.edge_probs()[i];
        if (p <= 0.0 || model.is_seed(v)) continue;  // can't open / target already infected
        int lu = model.is_seed(u) ? 0 : g.local_id(u, model.node_count());
        int lv = g.local_id(v, model.node_count());
        g.always_adj.resize(g.local_n);
        if (p >= 1.0)
            g.always_adj[lu].push_back(lv);
        else
            g.enum_edges.emplace_back(lu, lv, p);
    }
    g.always_adj.resize(g.local_n);
    if (static_cast<int>(g.enum_edges.size()) > cap)
        throw TooManyEdgesError(static_cast<int>(g.enum_edges.size()), cap);
    return g;
}

// Gray-code sweep over all open/closed states.  Accumulates the infection
// probability of every local node into `acc` (size local_n).
inline void enumerate_states(const LocalArcGraph& g, std::vector<double>& acc) {
    const int m = static_cast<int>(g.enum_edges.size());
    const int ln = g.local_n;
    acc.assign(ln, 0.0);

    if (ln <= 64) {
        std::vector<std::uint64_t> adj(ln, 0);
        for (int u = 0; u < ln; ++u)
            for (int v : g.always_adj[u]) adj[u] |= 1ULL << v;

        double prob = 1.0;
        std::vector<bool> open(m, false);
        for (const auto& [lu, lv, p] : g.enum_edges) {
            (void)lu;
            (void)lv;
            prob *= 1.0 - p;
        }

        std::unordered_map<std::uint64_t, double> mass;
        mass.reserve(1024);
        const std::uint64_t states = 1ULL << m;
        for (std::uint64_t i = 0;; ++i) {
            std::uint64_t reach = 1, frontier = 1;
            while (frontier) {
                std::uint64_t nxt = 0;
                std::uint64_t f = frontier;
                while (f) {
                    int u = std::countr_zero(f);
                    f &= f - 1;
                    nxt |= adj[u];
                }
                frontier = nxt & ~reach;
                reach |= frontier;
            }
            mass[reach] += prob;

            if (i + 1 == states) break;
            int e = std::countr_zero(i + 1);
            auto& [lu, lv, p] = g.enum_edges[e];
            if (open[e]) {
                adj[lu] &= ~(1ULL << lv);
                prob = prob / p * (1.0 - p);
            } else {
                adj[lu] |= 1ULL << lv;
                prob = prob / (1.0 - p) * p;
            }
            open[e] = !open[e];
            // a second enumerable (u,v) edge cannot exist: ICModel rejects duplicates
        }
        for (const auto& [reach_mask, mass_prob] : mass) {
            std::uint64_t r = reach_mask;
            while (r) {
                int v = std::countr_zero(r);
                r &= r - 1;
                acc[v] += mass_prob;
            }
        }
        return;
    }

    // Generic path for graphs whose p==1 arcs drag in more than 64 local nodes.
    std::vector<std::vector<std::pair<int, int>>> enum_out(ln);  // (edge idx, local dst)
    for (int e = 0; e < m; ++e) {
        auto& [lu, lv, p] = g.enum_edges[e];
        (void)p;
        enum_out[lu].emplace_back(e, lv);
    }
    double prob = 1.0;
    for (const auto& [lu, lv, p] : g.enum_edges) {
        (void)lu;
        (void)lv;
        prob *= 1.0 - p;
    }
    std::vector<bool> open(m, false);
    std::vector<char> seen(ln);
    std::vector<int> stack;
    const std::uint64_t states = 1ULL << m;
    for (std::uint64_t i = 0;; ++i) {
        std::fill(seen.begin(), seen.end(), 0);
        stack.assign(1, 0);
        seen[0] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : g.always_adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            for (auto [e, v] : enum_out[u])
                if (open[e] && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
        for (int v = 1; v < ln; ++v)
            if (seen[v]) acc[v] += prob;

        if (i + 1 == states) break;
        int e = std::countr_zero(i + 1);
        auto& [lu, lv, p] = g.enum_edges[e];
        (void)lu;
        (void)lv;
        prob = open[e] ? prob / p * (1.0 - p) : prob / (1.0 - p) * p;
        open[e] = !open[e];
    }
}

}  // namespace detail

/// Exact infection probabilities by live-arc state enumeration.
inline InfectionProbabilities exact_influence(const ICModel& model, int cap = kDefaultOracleCap) {
    detail::LocalArcGraph g = detail::build_local_arcs(model, cap);
    std::vector<double> acc;
    detail::enumerate_states(g, acc);

    InfectionProbabilities result;
    result.p.assign(model.node_count(), 0.0);
    for (NodeId s : model.seeds()) result.p[s] = 1.0;
    for (int lv = 1; lv < g.local_n; ++lv) result.p[g.original_of[lv]] = acc[lv];
    for (double x : result.p) result.sigma += x;
    return result;
}

/// Monte-Carlo influence estimate; each sample runs an independent cascade via
/// BFS, sampling every edge state lazily at most once.  Deterministic for a
/// fixed (model, samples, rng_seed) and independent of worker scheduling since
/// sample i always uses substream(rng_seed, i).
inline McEstimate mc_influence(const ICModel& model, std::uint64_t samples, std::uint64_t rng_seed,
                               std::vector<double>* per_node = nullptr) {
    if (samples < 1) throw InvalidParamsError("samples must be >= 1");
    const int n = model.node_count();
    std::vector<std::uint64_t> stamp(n, 0);
    std::vector<NodeId> queue;
    std::vector<std::uint64_t> node_hits;
    if (per_node) node_hits.assign(n, 0);

    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng = Rng::substream(rng_seed, s);
        const std::uint64_t mark = s + 1;
        queue.clear();
        for (NodeId v : model.seeds()) {
            stamp[v] = mark;
            queue.push_back(v);
        }
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            NodeId u = queue[qi];
            for (const Arc& arc : model.out_adj(u)) {
                if (stamp[arc.node] == mark) continue;
                if (rng.bernoulli(arc.prob)) {
                    stamp[arc.node] = mark;
                    queue.push_back(arc.node);
                }
            }
        }
        double infected = static_cast<double>(queue.size());
        sum += infected;
        sumsq += infected * infected;
        if (per_node)
            for (NodeId v : queue) ++node_hits[v];
    }

    McEstimate est;
    est.samples = samples;
    est.rng_seed = rng_seed;
    est.mean = sum / static_cast<double>(samples);
    if (samples > 1) {
        double var = (sumsq - sum * sum / static_cast<double>(samples)) /
                     static_cast<double>(samples - 1);
        est.stderr_ = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
    }
    if (per_node) {
        per_node->assign(n, 0.0);
        for (int v = 0; v < n; ++v)
            (*per_node)[v] = static_cast<double>(node_hits[v]) / static_cast<double>(samples);
    }
    return est;
}

enum class PathLenMode { at_most, exact };

/// Probability that at least one simple path from a seed to `target`, with
/// length <= len (or == len in exact mode), avoiding every node in `excluded`,
/// is fully open.  Enumerates edge states over the union of edges appearing on
/// any qualifying path.
inline double path_union_prob(const ICModel& model, NodeId target, int len,
                              const std::vector<NodeId>& excluded = {},
                              PathLenMode mode = PathLenMode::at_most,
                              int cap = kDefaultOracleCap) {
    const int n = model.node_count();
    if (target < 0 || target >= n) throw IndexOutOfRangeError(target, n);
    if (len < 0) throw InvalidParamsError("path length must be >= 0");
    std::vector<char> avoid(n, 0);
    for (NodeId v : excluded) avoid[v] = 1;
    if (avoid[target]) return 0.0;

    if (model.is_seed(target)) {
        // length-0 path
        if (mode == PathLenMode::at_most || len == 0) return 1.0;
    } else if (len == 0) {
        return 0.0;
    }

    // Collect qualifying paths as masks over the union of their (0,1)-prob
    // edges; p==1 edges are always satisfied, p==0 edges kill the path.
    std::unordered_map<std::uint64_t, int> edge_bit;  // (u<<32|v) -> bit
    std::vector<double> bit_prob;
    std::vector<std::uint64_t> path_masks;
    bool certain = false;

    std::vector<char> on_path(n, 0);
    struct Frame {
        NodeId node;
        std::size_t arc;
    };
    std::vector<Frame> stack;
    std::vector<std::uint64_t> mask_stack;  // running edge mask per depth

    auto record = [&](std::uint64_t mask) {
        if (mask == 0) {
            certain = true;
            return;
        }
        path_masks.push_back(mask);
    };

    for (NodeId s : model.seeds()) {
        if (certain) break;
        if (avoid[s]) continue;
        if (s == target) continue;  // length-0 handled above
        stack.assign(1, {s, 0});
        mask_stack.assign(1, 0);
        on_path[s] = 1;
        while (!stack.empty() && !certain) {
            Frame& f = stack.back();
            int depth = static_cast<int>(stack.size()) - 1;  // edges so far
            if (depth >= len || f.arc >= model.out_adj(f.node).size()) {
                on_path[f.node] = 0;
                stack.pop_back();
                mask_stack.pop_back();
                continue;
            }
            const Arc& arc = model.out_adj(f.node)[f.arc++];
            NodeId v = arc.node;
            if (on_path[v] || avoid[v] || arc.prob <= 0.0) continue;
            std::uint64_t mask = mask_stack.back();
            if (arc.prob < 1.0) {
                std::uint64_t key =
                    (static_cast<std::uint64_t>(f.node) << 32) | static_cast<std::uint32_t>(v);
                auto [it, inserted] = edge_bit.try_emplace(key, static_cast<int>(bit_prob.size()));
                if (inserted) {
                    if (static_cast<int>(bit_prob.size()) >= cap)
                        throw TooManyEdgesError(static_cast<int>(bit_prob.size()) + 1, cap);
                    bit_prob.push_back(arc.prob);
                }
                mask |= 1ULL << it->second;
            }
            if (v == target) {
                if (mode == PathLenMode::at_most || depth + 1 == len) record(mask);
                continue;  // simple paths cannot revisit the target
            }
            stack.push_back({v, 0});
            mask_stack.push_back(mask);
            on_path[v] = 1;
        }
        for (Frame& f : stack) on_path[f.node] = 0;
    }
    if (certain) return 1.0;
    if (path_masks.empty()) return 0.0;

    // Drop paths that are supersets of another; they never decide the union.
    std::sort(path_masks.begin(), path_masks.end(), [](std::uint64_t a, std::uint64_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    std::vector<std::uint64_t> minimal;
    for (std::uint64_t mask : path_masks) {
        bool dominated = false;
        for (std::uint64_t kept : minimal)
            if ((mask & kept) == kept) {
                dominated = true;
                break;
            }
        if (!dominated) minimal.push_back(mask);
    }

    const int m = static_cast<int>(bit_prob.size());
    double total = 0.0;
    for (std::uint64_t state = 0; state < (1ULL << m); ++state) {
        bool hit = false;
        for (std::uint64_t mask : minimal)
            if ((state & mask) == mask) {
                hit = true;
                break;
            }
        if (!hit) continue;
        double prob = 1.0;
        for (int e = 0; e < m; ++e)
            prob *= (state >> e) & 1 ? bit_prob[e] : 1.0 - bit_prob[e];
        total += prob;
    }
    return std::min(total, 1.0);
}

/// p_t(u->v): probability that some open simple path of length exactly t
/// reaches u while avoiding v, and edge (u,v) is additionally open.
inline double path_edge_message_prob(const ICModel& model, NodeId u, NodeId v, int t,
                                     int cap = kDefaultOracleCap) {
    double p_uv = 0.0;
    for (const Arc& arc : model.out_adj(u))
        if (arc.node == v) {
            p_uv = arc.prob;
            break;
        }
    if (p_uv <= 0.0) return 0.0;
    // (u,v) is independent of any path avoiding v.
    return p_uv * path_union_prob(model, u, t, {v}, PathLenMode::exact, cap);
}

/// Exact infection probabilities in the vertex-induced subnetwork; entries for
/// nodes outside the subset are 0.
inline InfectionProbabilities exact_subnetwork_influence(const ICModel& model,
                                                         const std::vector<NodeId>& subset,
                                                         int cap = kDefaultOracleCap) {
    const int n = model.node_count();
    std::vector<int> local(n, -1);
    std::vector<NodeId> nodes;
    for (NodeId v : subset) {
        if (v < 0 || v >= n) throw IndexOutOfRangeError(v, n);
        if (local[v] < 0) {
            local[v] = static_cast<int>(nodes.size());
            nodes.push_back(v);
        }
    }
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

    ICModel sub(static_cast<int>(nodes.size()), std::move(edges), std::move(probs),
                std::move(seeds));
    InfectionProbabilities sub_result = exact_influence(sub, cap);

    InfectionProbabilities result;
    result.p.assign(n, 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) result.p[nodes[i]] = sub_result.p[i];
    result.sigma = sub_result.sigma;
    return result;
}

/// (sigma_plus - sigma_minus)^2 / 4.
inline double variance_upper_bound(double sigma_plus, double sigma_minus) {
    if (sigma_plus < sigma_minus - 1e-9) throw InvalidBoundsError(sigma_plus, sigma_minus);
    double d = std::max(0.0, sigma_plus - sigma_minus);
    return d * d / 4.0;
}

}  // namespace infbound
