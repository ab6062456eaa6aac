#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "infbound/errors.hpp"
#include "infbound/graph.hpp"
#include "infbound/rng.hpp"

namespace infbound {

enum class GraphFamily { erdos_renyi, random_regular, scale_free, powerlaw_tree };

struct GenSpec {
    GraphFamily family = GraphFamily::erdos_renyi;
    int n = 1;
    double edge_prob = 0.0;  // erdos_renyi
    int degree = 3;          // random_regular
    double alpha = 2.5;      // scale_free / powerlaw_tree
    std::uint64_t rng_seed = 0;
    bool take_lcc = false;
    double uniform_p = 0.5;  // transmission probability for every edge
};

using UndirectedEdges = std::vector<std::pair<NodeId, NodeId>>;

namespace detail {

inline std::uint64_t edge_key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

// i.i.d. sample from P(k) proportional to k^-alpha on 1..kmax, by inverse CDF.
class PowerLawSampler {
public:
    PowerLawSampler(double alpha, int kmax) {
        cum_.reserve(kmax);
        double total = 0.0;
        for (int k = 1; k <= kmax; ++k) {
            total += std::pow(static_cast<double>(k), -alpha);
            cum_.push_back(total);
        }
        for (double& c : cum_) c /= total;
    }
    int sample(Rng& rng) const {
        double u = rng.next_double();
        auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
        return static_cast<int>(it - cum_.begin()) + 1;
    }

private:
    std::vector<double> cum_;
};

}  // namespace detail

/// G(n, p) by geometric edge skipping, O(n + |E|).
inline UndirectedEdges gen_erdos_renyi(int n, double p, Rng& rng) {
    if (n < 1) throw InvalidParamsError("n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidParamsError("edge probability outside [0,1]");
    UndirectedEdges edges;
    if (p <= 0.0 || n < 2) return edges;
    if (p >= 1.0) {
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
        return edges;
    }
    const double log_q = std::log1p(-p);
    std::int64_t total = static_cast<std::int64_t>(n) * (n - 1) / 2;
    std::int64_t idx = -1;
    for (;;) {
        double r = rng.next_double();
        idx += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
        if (idx >= total) break;
        // linear pair index -> (u, v) with u < v
        std::int64_t u = static_cast<std::int64_t>(
            (2.0 * n - 1.0 - std::sqrt((2.0 * n - 1.0) * (2.0 * n - 1.0) - 8.0 * idx)) / 2.0);
        auto row_start = [&](std::int64_t r0) { return r0 * (2 * n - r0 - 1) / 2; };
        while (u > 0 && row_start(u) > idx) --u;
        while (row_start(u + 1) <= idx) ++u;
        std::int64_t v = u + 1 + (idx - row_start(u));
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    return edges;
}

/// Random d-regular simple graph by the pairing model with rejection.
inline UndirectedEdges gen_random_regular(int n, int d, Rng& rng, int max_retries = 2000) {
    if (n < 1 || d < 1) throw InvalidParamsError("need n >= 1 and d >= 1");
    if (d >= n) throw InvalidParamsError("degree must be < n");
    if ((static_cast<std::int64_t>(n) * d) % 2 != 0)
        throw InvalidParamsError("n*d must be even for a d-regular graph");

    std::vector<NodeId> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * d);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        stubs.clear();
        for (NodeId v = 0; v < n; ++v)
            for (int i = 0; i < d; ++i) stubs.push_back(v);
        for (std::size_t i = stubs.size() - 1; i > 0; --i)
            std::swap(stubs[i], stubs[rng.next_below(i + 1)]);

        UndirectedEdges edges;
        std::unordered_set<std::uint64_t> seen;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            NodeId u = stubs[i], v = stubs[i + 1];
            if (u == v || !seen.insert(detail::edge_key(u, v)).second) {
                ok = false;
                break;
            }
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
        if (ok) return edges;
    }
    throw GenerationFailureError("pairing model failed to produce a simple " + std::to_string(d) +
                                 "-regular graph");
}

/// Erased configuration model with i.i.d. power-law degrees P(k) ~ k^-alpha,
/// k >= 1: stubs paired uniformly, self-loops and multi-edges dropped.
inline UndirectedEdges gen_scale_free(int n, double alpha, Rng& rng) {
    if (n < 1) throw InvalidParamsError("n must be >= 1");
    if (!(alpha > 1.0)) throw InvalidParamsError("alpha must be > 1");
    if (n < 2) return {};
    detail::PowerLawSampler sampler(alpha, n - 1);
    std::vector<int> degree(n);
    long long total = 0;
    for (int v = 0; v < n; ++v) {
        degree[v] = sampler.sample(rng);
        total += degree[v];
    }
    if (total % 2 != 0) {
        ++degree[rng.next_below(n)];
        ++total;
    }
    std::vector<NodeId> stubs;
    stubs.reserve(total);
    for (NodeId v = 0; v < n; ++v)
        for (int i = 0; i < degree[v]; ++i) stubs.push_back(v);
    for (std::size_t i = stubs.size() - 1; i > 0; --i)
        std::swap(stubs[i], stubs[rng.next_below(i + 1)]);

    UndirectedEdges edges;
    std::unordered_set<std::uint64_t> seen;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        NodeId u = stubs[i], v = stubs[i + 1];
        if (u == v) continue;
        if (!seen.insert(detail::edge_key(u, v)).second) continue;
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    return edges;
}

/// Random tree with a power-law degree sequence: draw i.i.d. degrees, repair
/// the sum to 2(n-1) by random unit increments/decrements, then realize the
/// sequence through a shuffled Pruefer string.
inline UndirectedEdges gen_powerlaw_tree(int n, double alpha, Rng& rng, int max_retries = 1000) {
    if (n < 1) throw InvalidParamsError("n must be >= 1");
    if (!(alpha > 1.0)) throw InvalidParamsError("alpha must be > 1");
    if (n == 1) return {};
    if (n == 2) return {{0, 1}};

    detail::PowerLawSampler sampler(alpha, n - 1);
    const long long target = 2LL * (n - 1);
    std::vector<int> degree(n);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        long long total = 0;
        for (int v = 0; v < n; ++v) {
            degree[v] = sampler.sample(rng);
            total += degree[v];
        }
        bool repaired = true;
        long long guard = 0;
        while (total != target) {
            if (++guard > 100LL * n) {
                repaired = false;
                break;
            }
            NodeId v = static_cast<NodeId>(rng.next_below(n));
            if (total < target && degree[v] < n - 1) {
                ++degree[v];
                ++total;
            } else if (total > target && degree[v] > 1) {
                --degree[v];
                --total;
            }
        }
        if (!repaired) continue;

        // Pruefer string with node v appearing degree[v]-1 times
        std::vector<NodeId> prufer;
        prufer.reserve(n - 2);
        for (NodeId v = 0; v < n; ++v)
            for (int i = 1; i < degree[v]; ++i) prufer.push_back(v);
        if (static_cast<int>(prufer.size()) != n - 2) continue;
        for (std::size_t i = prufer.size(); i > 1; --i)
            std::swap(prufer[i - 1], prufer[rng.next_below(i)]);

        std::vector<int> count(n, 0);
        for (NodeId v : prufer) ++count[v];
        UndirectedEdges edges;
        edges.reserve(n - 1);
        std::vector<NodeId> leaves;
        for (NodeId v = 0; v < n; ++v)
            if (count[v] == 0) leaves.push_back(v);
        std::make_heap(leaves.begin(), leaves.end(), std::greater<>());
        for (NodeId v : prufer) {
            std::pop_heap(leaves.begin(), leaves.end(), std::greater<>());
            NodeId leaf = leaves.back();
            leaves.pop_back();
            edges.emplace_back(std::min(leaf, v), std::max(leaf, v));
            if (--count[v] == 0) {
                leaves.push_back(v);
                std::push_heap(leaves.begin(), leaves.end(), std::greater<>());
            }
        }
        std::pop_heap(leaves.begin(), leaves.end(), std::greater<>());
        NodeId a = leaves.back();
        leaves.pop_back();
        NodeId b = leaves.back();
        edges.emplace_back(std::min(a, b), std::max(a, b));
        return edges;
    }
    throw GenerationFailureError("power-law tree degree sequence retries exhausted");
}

/// Nodes of the largest connected component (undirected); size ties broken by
/// the smallest contained node id.
inline std::vector<NodeId> largest_connected_component(int n, const UndirectedEdges& edges) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<int> find_stack;
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (auto [u, v] : edges) {
        int ru = find(u), rv = find(v);
        if (ru != rv) parent[std::max(ru, rv)] = std::min(ru, rv);
    }
    std::vector<int> size(n, 0);
    for (int v = 0; v < n; ++v) ++size[find(v)];
    int best = 0;
    for (int r = 1; r < n; ++r)
        if (size[r] > size[best]) best = r;  // equal sizes keep the smaller root
    std::vector<NodeId> component;
    for (int v = 0; v < n; ++v)
        if (find(v) == best) component.push_back(v);
    return component;
}

/// Draws the undirected graph for the family, optionally restricts it to the
/// largest connected component (reindexed, order-preserving), picks one
/// uniform-random seed node, and symmetrizes with the uniform transmission
/// probability.
inline ICModel generate(const GenSpec& spec) {
    Rng rng = Rng::substream(spec.rng_seed, 0);
    UndirectedEdges edges;
    switch (spec.family) {
        case GraphFamily::erdos_renyi:
            edges = gen_erdos_renyi(spec.n, spec.edge_prob, rng);
            break;
        case GraphFamily::random_regular:
            edges = gen_random_regular(spec.n, spec.degree, rng);
            break;
        case GraphFamily::scale_free:
            edges = gen_scale_free(spec.n, spec.alpha, rng);
            break;
        case GraphFamily::powerlaw_tree:
            edges = gen_powerlaw_tree(spec.n, spec.alpha, rng);
            break;
    }
    if (!(spec.uniform_p >= 0.0 && spec.uniform_p <= 1.0))
        throw InvalidParamsError("uniform_p outside [0,1]");

    int n = spec.n;
    if (spec.take_lcc) {
        std::vector<NodeId> component = largest_connected_component(n, edges);
        std::vector<int> remap(n, -1);
        for (std::size_t i = 0; i < component.size(); ++i) remap[component[i]] = static_cast<int>(i);
        UndirectedEdges kept;
        for (auto [u, v] : edges)
            if (remap[u] >= 0 && remap[v] >= 0) kept.emplace_back(remap[u], remap[v]);
        edges = std::move(kept);
        n = static_cast<int>(component.size());
    }

    Rng seed_rng = Rng::substream(spec.rng_seed, 1);
    NodeId seed = static_cast<NodeId>(seed_rng.next_below(n));
    std::vector<double> probs(edges.size(), spec.uniform_p);
    return from_undirected(n, edges, probs, {seed});
}

}  // namespace infbound
