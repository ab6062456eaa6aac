#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "infbound/nblb.hpp"
#include "infbound/nbub.hpp"
#include "infbound/oracle.hpp"
#include "test_util.hpp"

using namespace infbound;

namespace {

double triangle_tail_sigma_minus(double p) {
    return 1.0 + 2.0 * p + 2.0 * p * p - std::pow(p, 4);
}

}  // namespace

TEST_CASE("build_mdas on the 4-node example") {
    ICModel m = test_util::triangle_tail_model(0.5);
    Mdas mdas = build_mdas(m);
    REQUIRE(mdas.order == std::vector<NodeId>{0, 1, 2, 3});
    REQUIRE(mdas.distance == std::vector<int>{0, 1, 1, 2});
    // forward arcs: a->b, a->c, b->c, c->d (the reverse directions are dropped)
    REQUIRE(mdas.forward_adj[0].size() == 2);
    REQUIRE(mdas.forward_adj[1].size() == 1);
    REQUIRE(mdas.forward_adj[1][0].node == 2);
    REQUIRE(mdas.forward_adj[2].size() == 1);
    REQUIRE(mdas.forward_adj[2][0].node == 3);
    REQUIRE(mdas.forward_adj[3].empty());
    // incoming arcs arrive in rank order of the source
    REQUIRE(mdas.backward_adj[2].size() == 2);
    REQUIRE(mdas.backward_adj[2][0].node == 0);
    REQUIRE(mdas.backward_adj[2][1].node == 1);
}

TEST_CASE("build_mdas is acyclic and handles unreachable nodes") {
    ICModel m = build_ic_model(5, {{0, 1}, {1, 2}, {4, 3}}, {0.5, 0.5, 0.5}, {0});
    Mdas mdas = build_mdas(m);
    // nodes 3 and 4 are unreachable and ranked last, by id
    REQUIRE(mdas.order == std::vector<NodeId>{0, 1, 2, 3, 4});
    REQUIRE(mdas.distance[3] == -1);
    REQUIRE(mdas.distance[4] == -1);
    for (int u = 0; u < m.node_count(); ++u)
        for (const Arc& arc : mdas.forward_adj[u])
            REQUIRE(mdas.rank[u] < mdas.rank[arc.node]);

    // random models: every forward arc increases rank, every backward list is rank-sorted
    ICModel r = test_util::random_small_model(9, 0.5);
    Mdas rm = build_mdas(r);
    for (int v = 0; v < r.node_count(); ++v)
        for (std::size_t i = 1; i < rm.backward_adj[v].size(); ++i)
            REQUIRE(rm.rank[rm.backward_adj[v][i - 1].node] < rm.rank[rm.backward_adj[v][i].node]);
}

TEST_CASE("process_incoming_msg_lb") {
    REQUIRE(process_incoming_msg_lb({}) == 0.0);
    REQUIRE(process_incoming_msg_lb({{1.0, 0.5}}) == 0.5);

    // two in-neighbors with LB 1 and p: p + p^2 - p^3
    for (double p : {0.25, 0.5, 0.75}) {
        double got = process_incoming_msg_lb({{1.0, p}, {p, p}});
        REQUIRE_THAT(got, Catch::Matchers::WithinAbs(p + p * p - p * p * p, 1e-15));
    }

    // truncation: prefix sums 0.6, 1.1 > 1, so the third term is dropped
    double truncated = process_incoming_msg_lb({{1.0, 0.6}, {1.0, 0.5}, {1.0, 0.9}});
    REQUIRE_THAT(truncated, Catch::Matchers::WithinAbs(0.6 + 0.5 * 0.4, 1e-15));
    // still a valid probability for unit LB inputs
    REQUIRE(truncated <= 1.0);
}

TEST_CASE("reference table golden values") {
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        ICModel m = test_util::triangle_tail_model(p);
        LBVector r = nb_lb(m);
        const double p2 = p * p, p3 = p2 * p, p4 = p3 * p;
        CHECK(r.lb[0] == 1.0);
        CHECK_THAT(r.lb[1], Catch::Matchers::WithinAbs(p, 1e-12));
        CHECK_THAT(r.lb[2], Catch::Matchers::WithinAbs(p + p2 - p3, 1e-12));
        CHECK_THAT(r.lb[3], Catch::Matchers::WithinAbs(p2 + p3 - p4, 1e-12));
        CHECK_THAT(r.sigma_minus, Catch::Matchers::WithinAbs(triangle_tail_sigma_minus(p), 1e-12));
    }
    REQUIRE_THAT(nb_lb(test_util::triangle_tail_model(0.5)).sigma_minus,
                 Catch::Matchers::WithinAbs(2.4375, 1e-12));
}

TEST_CASE("lower-bound soundness on random small models") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        double p = 0.1 + 0.1 * static_cast<double>(seed % 9);
        ICModel m = test_util::random_small_model(seed, p);
        double exact = exact_influence(m).sigma;
        INFO("seed=" << seed << " p=" << p);
        for (LbMsgOrder order : {LbMsgOrder::arrival, LbMsgOrder::greedy}) {
            LBVector r = nb_lb(m, order);
            REQUIRE(r.sigma_minus <= exact + 1e-9);
            REQUIRE(r.sigma_minus >= static_cast<double>(m.seeds().size()) - 1e-12);
            for (double lb : r.lb) {
                REQUIRE(lb >= 0.0);
                REQUIRE(lb <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("tree exactness of the lower bound") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        GenSpec spec;
        spec.family = GraphFamily::powerlaw_tree;
        spec.n = 10;
        spec.alpha = 3.0;
        spec.rng_seed = seed;
        spec.uniform_p = 0.45;
        ICModel m = generate(spec);
        double exact = exact_influence(m).sigma;
        LBVector r = nb_lb(m);
        REQUIRE_THAT(r.sigma_minus, Catch::Matchers::WithinAbs(exact, 1e-9));
        // on trees both bounds coincide with the truth
        REQUIRE_THAT(nb_ub(m).sigma_plus, Catch::Matchers::WithinAbs(r.sigma_minus, 1e-9));
    }
}

TEST_CASE("unreachable nodes get lower bound zero") {
    ICModel m = build_ic_model(4, {{0, 1}, {3, 2}}, {0.5, 0.5}, {0});
    LBVector r = nb_lb(m);
    REQUIRE(r.lb[2] == 0.0);
    REQUIRE(r.lb[3] == 0.0);
    REQUIRE_THAT(r.sigma_minus, Catch::Matchers::WithinAbs(1.5, 1e-15));
}

TEST_CASE("greedy message order never loosens the tie to validity") {
    // greedy reorders messages by descending p*LB; result stays a valid bound
    // and on this example matches or beats arrival order
    ICModel m = test_util::triangle_tail_model(0.6);
    double arrival = nb_lb(m, LbMsgOrder::arrival).sigma_minus;
    double greedy = nb_lb(m, LbMsgOrder::greedy).sigma_minus;
    double exact = exact_influence(m).sigma;
    REQUIRE(greedy <= exact + 1e-9);
    REQUIRE(greedy >= arrival - 1e-9);
}
