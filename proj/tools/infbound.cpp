// infbound: guaranteed upper/lower bounds on independent-cascade influence.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "infbound/generators.hpp"
#include "infbound/graph.hpp"
#include "infbound/nbub.hpp"
#include "infbound/nblb.hpp"
#include "infbound/oracle.hpp"
#include "infbound/report.hpp"
#include "infbound/sweep.hpp"
#include "infbound/tunable.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitCap = 3;

int oracle_cap_from_env() {
    if (const char* env = std::getenv("INFBOUND_ORACLE_CAP")) {
        int cap = std::atoi(env);
        if (cap > 0) return cap;
    }
    return infbound::kDefaultOracleCap;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct BoundArgs {
    std::string model_path;
    bool ub = false, lb = false, exact = false, per_node = false, timings = false;
    std::vector<int> tub;
    std::vector<int> tlb;
    std::uint64_t mc_init_samples = 0;  // 0 => exact tNB-LB initialization
    std::uint64_t mc_samples = 0;
    std::uint64_t seed = 0;
    std::string json_out;
};

int cmd_bound(const BoundArgs& args) {
    using namespace infbound;
    const int cap = oracle_cap_from_env();
    ICModel model = load_edge_list(args.model_path);

    bool any = args.ub || args.lb || args.exact || !args.tub.empty() || !args.tlb.empty() ||
               args.mc_samples > 0;
    bool run_ub = args.ub || !any;
    bool run_lb = args.lb || !any;

    BoundReport report;
    report.n = model.node_count();
    report.edge_count = model.edge_count();
    report.seeds = model.seeds();
    report.content_hash = model_content_hash(model);
    report.rng_seed = args.seed;
    report.include_timings = args.timings;
    auto timed = [&](const std::string& phase, auto&& fn) {
        auto start = std::chrono::steady_clock::now();
        fn();
        report.timings.push_back({phase, seconds_since(start)});
    };

    if (run_ub) timed("nb_ub", [&] {
        NbUbOptions opt;
        opt.retain_table = args.per_node;
        UBTable table = nb_ub(model, opt);
        report.sigma_plus = table.sigma_plus;
        if (args.per_node) {
            std::vector<double> node(model.node_count(), 0.0);
            std::vector<double> survive(model.node_count(), 1.0);
            for (const auto& level : table.levels)
                for (const auto& [v, ub] : level) survive[v] *= 1.0 - ub;
            for (int v = 0; v < model.node_count(); ++v) node[v] = 1.0 - survive[v];
            report.node_upper = std::move(node);
        }
    });
    if (run_lb) timed("nb_lb", [&] {
        LBVector lb = nb_lb(model);
        report.sigma_minus = lb.sigma_minus;
        if (args.per_node) report.node_lower = lb.lb;
    });
    for (int t : args.tub) timed("t_nb_ub(" + std::to_string(t) + ")", [&] {
        TunableParams params;
        params.t = t;
        NbUbOptions opt;
        opt.retain_table = false;
        report.tunable.push_back({t, true, t_nb_ub(model, params, opt, cap).sigma_plus, false});
    });
    for (int t : args.tlb) timed("t_nb_lb(" + std::to_string(t) + ")", [&] {
        TunableParams params;
        params.t = t;
        bool probabilistic = args.mc_init_samples > 0;
        if (probabilistic) {
            params.mode = TunableParams::Mode::mc;
            params.mc_samples = args.mc_init_samples;
            params.rng_seed = args.seed;
        }
        report.tunable.push_back(
            {t, false, t_nb_lb(model, params, LbMsgOrder::arrival, cap).sigma_minus,
             probabilistic});
    });
    if (args.mc_samples > 0) timed("mc", [&] {
        report.mc = mc_influence(model, args.mc_samples, args.seed);
    });
    if (args.exact) timed("exact", [&] {
        InfectionProbabilities exact = exact_influence(model, cap);
        report.exact_sigma = exact.sigma;
        if (args.per_node) report.node_exact = exact.p;
    });
    if (report.sigma_plus && report.sigma_minus)
        report.variance_bound = variance_upper_bound(*report.sigma_plus, *report.sigma_minus);

    std::string json = to_json(report);
    std::cout << json;
    if (!args.json_out.empty()) {
        std::ofstream out(args.json_out);
        if (!out) throw infbound::IoError("cannot open " + args.json_out + " for writing");
        out << json;
    }
    return 0;
}

infbound::GraphFamily parse_family(const std::string& name, std::string& canonical) {
    using infbound::GraphFamily;
    if (name == "er" || name == "erdos_renyi") {
        canonical = "er";
        return GraphFamily::erdos_renyi;
    }
    if (name == "regular" || name == "random_regular") {
        canonical = "regular";
        return GraphFamily::random_regular;
    }
    if (name == "sf" || name == "scale_free") {
        canonical = "sf";
        return GraphFamily::scale_free;
    }
    if (name == "tree" || name == "powerlaw_tree") {
        canonical = "tree";
        return GraphFamily::powerlaw_tree;
    }
    throw infbound::InvalidParamsError("unknown family '" + name +
                                       "' (expected er|regular|sf|tree)");
}

struct GenArgs {
    std::string family;
    std::vector<std::string> params;
    std::uint64_t seed = 0;
    bool lcc = false;
    double uniform_p = 0.5;
    std::string out_path;
};

int cmd_gen(const GenArgs& args) {
    using namespace infbound;
    GenSpec spec;
    std::string canonical;
    spec.family = parse_family(args.family, canonical);
    if (args.params.size() != 2)
        throw InvalidParamsError("expected: gen <family> <n> <p|d|alpha>");
    spec.n = std::stoi(args.params[0]);
    switch (spec.family) {
        case GraphFamily::erdos_renyi:
            spec.edge_prob = std::stod(args.params[1]);
            break;
        case GraphFamily::random_regular:
            spec.degree = std::stoi(args.params[1]);
            break;
        default:
            spec.alpha = std::stod(args.params[1]);
            break;
    }
    spec.rng_seed = args.seed;
    spec.take_lcc = args.lcc;
    spec.uniform_p = args.uniform_p;
    ICModel model = generate(spec);
    if (args.out_path.empty())
        save_edge_list(model, std::cout);
    else
        save_edge_list(model, args.out_path);
    return 0;
}

struct SweepArgs {
    std::string spec_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int jobs = 1;
};

infbound::SweepSpec parse_sweep_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw infbound::IoError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw infbound::ParseError(0, std::string("invalid sweep spec json: ") + e.what());
    }
    infbound::SweepSpec spec;
    spec.family = parse_family(j.value("family", "er"), spec.family_name);
    spec.n = j.value("n", 100);
    spec.edge_prob = j.value("p", 0.03);
    spec.degree = j.value("d", 3);
    spec.alpha = j.value("alpha", 2.5);
    spec.take_lcc = j.value("take_lcc", true);
    if (j.contains("p_grid")) spec.p_grid = j["p_grid"].get<std::vector<double>>();
    spec.replicates = j.value("replicates", 1);
    spec.mc_samples = j.value("mc_samples", std::uint64_t{10000});
    if (j.contains("estimators")) {
        spec.run_ub = spec.run_lb = spec.run_mc = spec.run_exact = false;
        for (const auto& e : j["estimators"]) {
            std::string name = e.get<std::string>();
            if (name == "ub")
                spec.run_ub = true;
            else if (name == "lb")
                spec.run_lb = true;
            else if (name == "mc")
                spec.run_mc = true;
            else if (name == "exact")
                spec.run_exact = true;
            else
                throw infbound::InvalidParamsError("unknown estimator '" + name + "'");
        }
    }
    spec.oracle_cap = oracle_cap_from_env();
    return spec;
}

int cmd_sweep(const SweepArgs& args) {
    using namespace infbound;
    SweepSpec spec = parse_sweep_spec(args.spec_path);
    SweepResult result = run_sweep(spec, args.seed, args.jobs);
    std::filesystem::create_directories(args.out_dir);
    auto write = [&](const std::string& name, const std::string& content) {
        std::string path = args.out_dir + "/" + name;
        std::ofstream out(path);
        if (!out) throw IoError("cannot open " + path + " for writing");
        out << content;
    };
    write("results.csv", result.results_csv);
    write("aggregate.csv", result.aggregate_csv);
    int failed = 0;
    for (const SweepCell& c : result.cells)
        if (!c.error.empty()) ++failed;
    std::cout << "wrote " << result.cells.size() << " cells to " << args.out_dir << " (" << failed
              << " failed)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonbacktracking bounds on independent-cascade influence"};
    app.require_subcommand(1);

    BoundArgs bound;
    CLI::App* bound_cmd = app.add_subcommand("bound", "Compute bounds on a model file");
    bound_cmd->add_option("file", bound.model_path, "edge-list model file")->required();
    bound_cmd->add_flag("--ub", bound.ub, "run NB-UB");
    bound_cmd->add_flag("--lb", bound.lb, "run NB-LB");
    bound_cmd->add_option("--tub", bound.tub, "run tNB-UB with horizon t (repeatable)");
    bound_cmd->add_option("--tlb", bound.tlb, "run tNB-LB with horizon t (repeatable)");
    bound_cmd->add_option("--mc-init", bound.mc_init_samples,
                          "MC samples for tNB-LB initialization (default: exact)");
    bound_cmd->add_option("--mc", bound.mc_samples, "Monte-Carlo influence estimate sample count");
    bound_cmd->add_flag("--exact", bound.exact, "exact influence by state enumeration");
    bound_cmd->add_option("--seed", bound.seed, "RNG seed");
    bound_cmd->add_flag("--per-node", bound.per_node, "include per-node vectors");
    bound_cmd->add_flag("--timings", bound.timings, "include wall-clock timings in the report");
    bound_cmd->add_option("--json", bound.json_out, "also write the JSON report to this file");

    GenArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a random network file");
    gen_cmd->add_option("family", gen.family, "er|regular|sf|tree")->required();
    gen_cmd->add_option("params", gen.params, "<n> <p|d|alpha>")->expected(2);
    gen_cmd->add_option("--seed", gen.seed, "RNG seed");
    gen_cmd->add_flag("--lcc", gen.lcc, "restrict to the largest connected component");
    gen_cmd->add_option("-p,--prob", gen.uniform_p, "uniform transmission probability");
    gen_cmd->add_option("-o,--out", gen.out_path, "output file (default: stdout)");

    SweepArgs sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a replicated sweep from a JSON spec");
    sweep_cmd->add_option("spec", sweep.spec_path, "sweep spec JSON file")->required();
    sweep_cmd->add_option("--out", sweep.out_dir, "output directory")->required();
    sweep_cmd->add_option("--seed", sweep.seed, "master RNG seed");
    sweep_cmd->add_option("--jobs", sweep.jobs, "worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*bound_cmd) return cmd_bound(bound);
        if (*gen_cmd) return cmd_gen(gen);
        if (*sweep_cmd) return cmd_sweep(sweep);
    } catch (const infbound::TooManyEdgesError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const infbound::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const infbound::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
