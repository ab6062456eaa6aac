#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "infbound/errors.hpp"
#include "infbound/generators.hpp"
#include "infbound/nbub.hpp"
#include "infbound/nblb.hpp"
#include "infbound/oracle.hpp"
#include "infbound/report.hpp"
#include "infbound/rng.hpp"

namespace infbound {

/// A replicated generate-and-bound experiment over a transmission-probability
/// grid, one row per (replicate, p) cell.
struct SweepSpec {
    GraphFamily family = GraphFamily::erdos_renyi;
    std::string family_name = "er";
    int n = 100;
    double edge_prob = 0.03;
    int degree = 3;
    double alpha = 2.5;
    bool take_lcc = true;
    std::vector<double> p_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int replicates = 1;
    bool run_ub = true;
    bool run_lb = true;
    bool run_mc = true;
    bool run_exact = false;
    std::uint64_t mc_samples = 10000;
    int oracle_cap = kDefaultOracleCap;
};

struct SweepCell {
    int replicate = 0;
    int p_index = 0;
    double p = 0.0;
    int n = 0;
    int edges = 0;
    std::optional<double> sigma_plus;
    std::optional<double> sigma_minus;
    std::optional<McEstimate> mc;
    std::optional<double> exact_sigma;
    std::optional<double> variance_bound;
    std::string error;
};

struct SweepResult {
    std::vector<SweepCell> cells;  // sorted by (replicate, p_index)
    std::string results_csv;
    std::string aggregate_csv;
};

namespace detail {

inline std::string csv_opt(const std::optional<double>& x) { return x ? json_num(*x) : ""; }

inline SweepCell run_sweep_cell(const SweepSpec& spec, std::uint64_t master_seed, int replicate,
                                int p_index) {
    SweepCell cell;
    cell.replicate = replicate;
    cell.p_index = p_index;
    cell.p = spec.p_grid[p_index];
    std::uint64_t cell_seed = Rng::mix(
        master_seed ^ Rng::mix((static_cast<std::uint64_t>(replicate) << 20) | p_index));
    try {
        GenSpec gen;
        gen.family = spec.family;
        gen.n = spec.n;
        gen.edge_prob = spec.edge_prob;
        gen.degree = spec.degree;
        gen.alpha = spec.alpha;
        gen.take_lcc = spec.take_lcc;
        gen.uniform_p = cell.p;
        // same replicate shares the same graph across the p grid
        gen.rng_seed = Rng::mix(master_seed ^ Rng::mix(replicate));
        ICModel model = generate(gen);
        cell.n = model.node_count();
        cell.edges = model.edge_count();

        if (spec.run_ub) {
            NbUbOptions opt;
            opt.retain_table = false;
            cell.sigma_plus = nb_ub(model, opt).sigma_plus;
        }
        if (spec.run_lb) cell.sigma_minus = nb_lb(model).sigma_minus;
        if (spec.run_mc) cell.mc = mc_influence(model, spec.mc_samples, cell_seed);
        if (spec.run_exact) cell.exact_sigma = exact_influence(model, spec.oracle_cap).sigma;
        if (cell.sigma_plus && cell.sigma_minus)
            cell.variance_bound = variance_upper_bound(*cell.sigma_plus, *cell.sigma_minus);
    } catch (const std::exception& e) {
        cell.error = e.what();
    }
    return cell;
}

}  // namespace detail

inline SweepResult run_sweep(const SweepSpec& spec, std::uint64_t master_seed, int jobs = 1) {
    if (spec.replicates < 1) throw InvalidParamsError("replicates must be >= 1");
    for (double p : spec.p_grid)
        if (!(p > 0.0 && p <= 1.0)) throw InvalidParamsError("p grid values must be in (0,1]");

    const int grid = static_cast<int>(spec.p_grid.size());
    const int total = spec.replicates * grid;
    SweepResult result;
    result.cells.resize(total);

    auto worker = [&](int worker_id, int worker_count) {
        for (int idx = worker_id; idx < total; idx += worker_count)
            result.cells[idx] = detail::run_sweep_cell(spec, master_seed, idx / grid, idx % grid);
    };
    if (jobs <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(jobs);
        for (int w = 0; w < jobs; ++w) threads.emplace_back(worker, w, jobs);
        for (auto& th : threads) th.join();
    }

    std::ostringstream rows;
    rows << "family,n,edges,p,replicate,sigma_plus,sigma_minus,mc_mean,mc_stderr,mc_samples,"
            "exact,variance_bound,error\n";
    for (const SweepCell& c : result.cells) {
        rows << spec.family_name << ',' << c.n << ',' << c.edges << ',' << detail::json_num(c.p)
             << ',' << c.replicate << ',' << detail::csv_opt(c.sigma_plus) << ','
             << detail::csv_opt(c.sigma_minus) << ',';
        if (c.mc)
            rows << detail::json_num(c.mc->mean) << ',' << detail::json_num(c.mc->stderr_) << ','
                 << c.mc->samples;
        else
            rows << ",,";
        rows << ',' << detail::csv_opt(c.exact_sigma) << ',' << detail::csv_opt(c.variance_bound)
             << ',' << c.error << "\n";
    }
    result.results_csv = rows.str();

    // mean relative gaps per p, against the MC reference
    std::ostringstream agg;
    agg << "family,p,gap_plus,gap_minus,cells\n";
    for (int pi = 0; pi < grid; ++pi) {
        double gap_plus = 0.0, gap_minus = 0.0;
        int count_plus = 0, count_minus = 0;
        for (const SweepCell& c : result.cells) {
            if (c.p_index != pi || !c.error.empty() || !c.mc || c.mc->mean <= 0.0) continue;
            if (c.sigma_plus) {
                gap_plus += (*c.sigma_plus - c.mc->mean) / c.mc->mean;
                ++count_plus;
            }
            if (c.sigma_minus) {
                gap_minus += (c.mc->mean - *c.sigma_minus) / c.mc->mean;
                ++count_minus;
            }
        }
        agg << spec.family_name << ',' << detail::json_num(spec.p_grid[pi]) << ',';
        if (count_plus) agg << detail::json_num(gap_plus / count_plus);
        agg << ',';
        if (count_minus) agg << detail::json_num(gap_minus / count_minus);
        agg << ',' << std::max(count_plus, count_minus) << "\n";
    }
    result.aggregate_csv = agg.str();
    return result;
}

}  // namespace infbound
