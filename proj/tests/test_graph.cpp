#include "doctest.h"

#include <set>

#include "aamrp/graph.hpp"
#include "oracles.hpp"

using namespace aamrp;

TEST_SUITE("graph") {

TEST_CASE("single edge yields the single path") {
    WeightedGraph g(2);
    g.add_undirected(0, 1, 1.0, 0.01);
    const auto paths = k_shortest_paths(g, 0, 1, 3);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].nodes == std::vector<NodeId>{0, 1});
    CHECK(paths[0].cost == doctest::Approx(1.0));
}

TEST_CASE("diamond orders backup paths by cost") {
    // s=0, a=1, b=2, m=3; s-a-m costs 1+1, s-b-m costs 2+2
    WeightedGraph g(4);
    g.add_undirected(0, 1, 1.0, 0.0);
    g.add_undirected(1, 3, 1.0, 0.0);
    g.add_undirected(0, 2, 2.0, 0.0);
    g.add_undirected(2, 3, 2.0, 0.0);
    const auto paths = k_shortest_paths(g, 0, 3, 2);
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].nodes == std::vector<NodeId>{0, 1, 3});
    CHECK(paths[0].cost == doctest::Approx(2.0));
    CHECK(paths[1].nodes == std::vector<NodeId>{0, 2, 3});
    CHECK(paths[1].cost == doctest::Approx(4.0));
}

TEST_CASE("unreachable destination yields no paths") {
    WeightedGraph g(3);
    g.add_undirected(0, 1, 1.0, 0.0);
    CHECK(k_shortest_paths(g, 0, 2, 3).empty());
}

TEST_CASE("matches exhaustive enumeration on random graphs") {
    Rng rng(3);
    for (int trial = 0; trial < 80; ++trial) {
        const std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.uniform_index(6)); // <= 8
        const WeightedGraph g = oracle::random_graph(n, 0.5, rng);
        for (std::uint32_t K = 1; K <= 3; ++K) {
            auto expect = oracle::enumerate_simple_paths(g, 0, n - 1);
            if (expect.size() > K) expect.resize(K);
            const auto got = k_shortest_paths(g, 0, n - 1, K);
            REQUIRE(got.size() == expect.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].nodes == expect[i].nodes);
                CHECK(got[i].cost == doctest::Approx(expect[i].cost));
            }
        }
    }
}

TEST_CASE("output is invariant under node relabeling") {
    Rng rng(17);
    const std::uint32_t n = 7;
    const WeightedGraph g = oracle::random_graph(n, 0.5, rng);

    // relabel i -> (i + 3) % n
    auto relabel = [n](NodeId v) { return static_cast<NodeId>((v + 3) % n); };
    WeightedGraph h(n);
    for (NodeId i = 0; i < n; ++i)
        for (const auto& e : g.out[i]) h.add_edge(relabel(i), relabel(e.to), e.cost, e.delay);

    const auto a = k_shortest_paths(g, 0, n - 1, 3);
    const auto b = k_shortest_paths(h, relabel(0), relabel(n - 1), 3);
    REQUIRE(a.size() == b.size());
    // same multiset of costs; paths correspond up to the relabeling
    std::multiset<double> ca, cb;
    for (const auto& p : a) ca.insert(p.cost);
    for (const auto& p : b) cb.insert(p.cost);
    CHECK(ca == cb);
}

TEST_CASE("delay penalty applies only beyond the bound") {
    Path p;
    p.cost = 10.0;
    p.delay = 0.4;
    CHECK(apply_delay_penalty(p, 0.5, 10.0) == doctest::Approx(10.0));
    p.delay = 0.6;
    CHECK(apply_delay_penalty(p, 0.5, 10.0) == doctest::Approx(100.0));
}

} // TEST_SUITE
