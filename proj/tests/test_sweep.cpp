#include <catch2/catch_amalgamated.hpp>

#include "infbound/report.hpp"
#include "infbound/sweep.hpp"
#include "test_util.hpp"

using namespace infbound;

TEST_CASE("sweep output is independent of the worker count") {
    SweepSpec spec;
    spec.family = GraphFamily::erdos_renyi;
    spec.family_name = "er";
    spec.n = 50;
    spec.edge_prob = 0.06;
    spec.p_grid = {0.2, 0.5, 0.8};
    spec.replicates = 4;
    spec.mc_samples = 2000;
    SweepResult one = run_sweep(spec, 42, 1);
    SweepResult three = run_sweep(spec, 42, 3);
    REQUIRE(one.results_csv == three.results_csv);
    REQUIRE(one.aggregate_csv == three.aggregate_csv);
    REQUIRE(one.cells.size() == 12);
    // reruns with the same master seed are byte-identical too
    REQUIRE(run_sweep(spec, 42, 2).results_csv == one.results_csv);
    REQUIRE(run_sweep(spec, 43, 1).results_csv != one.results_csv);
}

TEST_CASE("tree sweeps close the gap up to MC noise") {
    SweepSpec spec;
    spec.family = GraphFamily::powerlaw_tree;
    spec.family_name = "tree";
    spec.n = 80;
    spec.alpha = 3.0;
    spec.p_grid = {0.3, 0.7};
    spec.replicates = 5;
    spec.mc_samples = 20000;
    SweepResult r = run_sweep(spec, 7, 1);
    for (const SweepCell& c : r.cells) {
        REQUIRE(c.error.empty());
        // bounds coincide on trees, so both must hug the MC estimate
        REQUIRE_THAT(*c.sigma_plus, Catch::Matchers::WithinAbs(*c.sigma_minus, 1e-9));
        REQUIRE(std::abs(c.mc->mean - *c.sigma_plus) <= 5.0 * c.mc->stderr_ + 1e-9);
        REQUIRE(*c.variance_bound <= 1e-18);
    }
}

TEST_CASE("failed cells are recorded and the run continues") {
    SweepSpec spec;
    spec.family = GraphFamily::erdos_renyi;
    spec.family_name = "er";
    spec.n = 50;
    spec.edge_prob = 0.2;  // far too many edges for exact enumeration
    spec.p_grid = {0.5};
    spec.replicates = 2;
    spec.run_mc = false;
    spec.run_exact = true;
    SweepResult r = run_sweep(spec, 1, 1);
    REQUIRE(r.cells.size() == 2);
    for (const SweepCell& c : r.cells) {
        REQUIRE(!c.error.empty());
        REQUIRE(r.results_csv.find(c.error) != std::string::npos);
    }
}

TEST_CASE("sweep spec validation") {
    SweepSpec spec;
    spec.replicates = 0;
    CHECK_THROWS_AS(run_sweep(spec, 0, 1), InvalidParamsError);
    spec.replicates = 1;
    spec.p_grid = {0.0};
    CHECK_THROWS_AS(run_sweep(spec, 0, 1), InvalidParamsError);
}

TEST_CASE("bound report json is reproducible and carries 17 digits") {
    BoundReport r;
    r.n = 4;
    r.edge_count = 8;
    r.seeds = {0};
    r.content_hash = 0x1234abcd;
    r.sigma_plus = 1.0 / 3.0;
    r.sigma_minus = 0.25;
    r.variance_bound = 0.125;
    std::string a = to_json(r);
    REQUIRE(a == to_json(r));
    REQUIRE(a.find("0.33333333333333331") != std::string::npos);
    REQUIRE(a.find("\"content_hash\": \"000000001234abcd\"") != std::string::npos);
    REQUIRE(a.find("timings") == std::string::npos);

    r.timings.push_back({"nb_ub", 0.5});
    REQUIRE(to_json(r).find("timings") == std::string::npos);  // opt-in only
    r.include_timings = true;
    REQUIRE(to_json(r).find("\"nb_ub\": 0.5") != std::string::npos);
}
