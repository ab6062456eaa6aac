#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "infbound/graph.hpp"
#include "infbound/oracle.hpp"

namespace infbound {

/// CLI/JSON payload for a single-model bound computation.  Reports are
/// byte-reproducible for identical inputs and seeds; wall-clock timings are
/// therefore opt-in.
struct BoundReport {
    // model fingerprint
    int n = 0;
    int edge_count = 0;
    std::vector<NodeId> seeds;
    std::uint64_t content_hash = 0;
    std::uint64_t rng_seed = 0;

    std::optional<double> sigma_plus;
    std::optional<double> sigma_minus;
    std::optional<double> variance_bound;
    std::optional<double> exact_sigma;
    std::optional<McEstimate> mc;

    struct TunableEntry {
        int t = 0;
        bool upper = false;  // tNB-UB vs tNB-LB
        double value = 0.0;
        bool probabilistic = false;
    };
    std::vector<TunableEntry> tunable;

    // optional per-node vectors
    std::optional<std::vector<double>> node_upper;  // 1 - prod_l (1 - UB_l(v))
    std::optional<std::vector<double>> node_lower;  // LB(v)
    std::optional<std::vector<double>> node_exact;  // exact p(v)

    struct Timing {
        std::string phase;
        double seconds = 0.0;
    };
    std::vector<Timing> timings;
    bool include_timings = false;
};

namespace detail {

inline std::string json_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void json_num_array(std::ostringstream& os, const std::vector<double>& xs) {
    os << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) os << ',';
        os << json_num(xs[i]);
    }
    os << ']';
}

}  // namespace detail

inline std::string to_json(const BoundReport& r) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"model\": {\"n\": " << r.n << ", \"edges\": " << r.edge_count << ", \"seeds\": [";
    for (std::size_t i = 0; i < r.seeds.size(); ++i) {
        if (i) os << ',';
        os << r.seeds[i];
    }
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.content_hash));
    os << "], \"content_hash\": \"" << hash << "\"},\n";
    os << "  \"rng_seed\": " << r.rng_seed;
    if (r.sigma_plus) os << ",\n  \"sigma_plus\": " << detail::json_num(*r.sigma_plus);
    if (r.sigma_minus) os << ",\n  \"sigma_minus\": " << detail::json_num(*r.sigma_minus);
    if (r.variance_bound) os << ",\n  \"variance_bound\": " << detail::json_num(*r.variance_bound);
    if (r.exact_sigma) os << ",\n  \"exact\": " << detail::json_num(*r.exact_sigma);
    if (r.mc) {
        os << ",\n  \"mc\": {\"mean\": " << detail::json_num(r.mc->mean)
           << ", \"stderr\": " << detail::json_num(r.mc->stderr_)
           << ", \"samples\": " << r.mc->samples << ", \"probabilistic\": true}";
    }
    if (!r.tunable.empty()) {
        os << ",\n  \"tunable\": {";
        for (std::size_t i = 0; i < r.tunable.size(); ++i) {
            const auto& e = r.tunable[i];
            if (i) os << ", ";
            os << '"' << (e.upper ? "ub_t" : "lb_t") << e.t << "\": {\"t\": " << e.t
               << ", \"kind\": \"" << (e.upper ? "upper" : "lower")
               << "\", \"value\": " << detail::json_num(e.value)
               << ", \"probabilistic\": " << (e.probabilistic ? "true" : "false") << '}';
        }
        os << '}';
    }
    if (r.node_upper) {
        os << ",\n  \"node_upper\": ";
        detail::json_num_array(os, *r.node_upper);
    }
    if (r.node_lower) {
        os << ",\n  \"node_lower\": ";
        detail::json_num_array(os, *r.node_lower);
    }
    if (r.node_exact) {
        os << ",\n  \"node_exact\": ";
        detail::json_num_array(os, *r.node_exact);
    }
    if (r.include_timings && !r.timings.empty()) {
        os << ",\n  \"timings\": {";
        for (std::size_t i = 0; i < r.timings.size(); ++i) {
            if (i) os << ", ";
            os << '"' << r.timings[i].phase << "\": " << detail::json_num(r.timings[i].seconds);
        }
        os << '}';
    }
    os << "\n}\n";
    return os.str();
}

}  // namespace infbound
