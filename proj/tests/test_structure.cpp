#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "kld/construct.hpp"
#include "kld/errors.hpp"
#include "kld/structure.hpp"

using namespace kld;

namespace {

Hypergraph parity_graph(int n) { return blow_up(base_family(4, 2, 6), {n / 2, n / 2}); }

std::vector<int> random_permutation(int k, std::mt19937& rng) {
    std::vector<int> p(static_cast<size_t>(k));
    std::iota(p.begin(), p.end(), 1);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

bool walk_ok(const WalkCertificate& w, const Hypergraph& h) {
    return validate_walk(w, h.k(), edge_window_predicate(h)).ok;
}

}  // namespace

TEST_SUITE_BEGIN("structure");

TEST_CASE("exchangeability") {
    auto k6 = complete_hypergraph(6, 3);
    CHECK(is_exchangeable(k6, {1, 2, 3}, 1, 2) == 4);
    CHECK_THROWS_AS(is_exchangeable(k6, {1, 2, 3}, 1, 1), ParameterError);
    CHECK_THROWS_AS(is_exchangeable(k6, {1, 2, 3}, 1, 5), ParameterError);

    auto h = parity_graph(12);
    const auto& labels = h.labels();
    for (const auto& e : h.edges())
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                bool same = labels[static_cast<size_t>(e[static_cast<size_t>(a)])] == labels[static_cast<size_t>(e[static_cast<size_t>(b)])];
                CHECK(is_exchangeable(h, e, e[static_cast<size_t>(a)], e[static_cast<size_t>(b)]).has_value() == same);
            }

    Hypergraph single(6, 3, {{1, 2, 3}});
    CHECK_FALSE(is_exchangeable(single, {1, 2, 3}, 1, 2));
    CHECK_FALSE(is_exchangeable(single, {1, 2, 3}, 2, 3));
}

TEST_CASE("auxiliary graphs") {
    auto h = parity_graph(12);
    for (const auto& e : h.edges()) {
        auto sides = is_complete_bipartite(auxiliary_graph(h, e));
        REQUIRE(sides);
        for (int v : sides->first) CHECK(h.labels()[static_cast<size_t>(v)] == h.labels()[static_cast<size_t>(sides->first.front())]);
        for (int v : sides->second) CHECK(h.labels()[static_cast<size_t>(v)] != h.labels()[static_cast<size_t>(sides->first.front())]);
    }
    auto k6 = auxiliary_graph(complete_hypergraph(6, 3), {1, 2, 3});
    CHECK(k6.non_exchangeable_pairs.empty());
    auto sides = is_complete_bipartite(k6);
    REQUIRE(sides);
    CHECK(sides->second.empty());

    AuxiliaryGraph triangle{{1, 2, 3}, {{1, 2}, {1, 3}, {2, 3}}};
    CHECK_FALSE(is_complete_bipartite(triangle));
    Hypergraph single(6, 3, {{1, 2, 3}});
    CHECK_FALSE(is_complete_bipartite(auxiliary_graph(single, {1, 2, 3})));
}

TEST_CASE("link graphs") {
    auto h = parity_graph(12);
    auto l = link_graph(h, {2, 3});  // 1 and 7 form a non-exchangeable pair in {1,2,3,7}
    CHECK(is_connected(l));
    auto sides = bipartition(l);
    REQUIRE(sides);
    CHECK(sides->first == std::vector<int>{1, 4, 5, 6});
    CHECK(sides->second == std::vector<int>{7, 8, 9, 10, 11, 12});

    auto k6 = link_graph(complete_hypergraph(6, 3), {1});
    CHECK(k6.graph.k() == 2);
    CHECK(k6.graph.edge_count() == 10);
    CHECK(min_degree(k6) == 4);

    auto empty = link_graph(Hypergraph(6, 3, {}), {1, 2});
    CHECK(empty.graph.edge_count() == 0);
    CHECK_FALSE(is_connected(empty));
    CHECK_THROWS_AS(link_graph(complete_hypergraph(6, 3), {1, 2, 3}), ParameterError);
}

TEST_CASE("tight components and traces") {
    auto h = parity_graph(12);
    auto comps = tight_components(h);
    CHECK(comps.size() == 2);
    for (const auto& c : comps) {
        int first = 0;
        for (int v : c.front()) first += v <= 6;
        for (const auto& e : c) {
            int inside = 0;
            for (int v : e) inside += v <= 6;
            CHECK(inside == first);
        }
    }
    // Traces of different components are disjoint.
    auto t0 = trace(comps[0]);
    auto t1 = trace(comps[1]);
    std::vector<std::vector<int>> both;
    std::set_intersection(t0.begin(), t0.end(), t1.begin(), t1.end(), std::back_inserter(both));
    CHECK(both.empty());

    CHECK(tight_components(complete_hypergraph(6, 3)).size() == 1);
    CHECK(tight_components(Hypergraph(6, 3, {{1, 2, 3}, {4, 5, 6}})).size() == 2);
    CHECK(trace({{1, 2, 3}}) == std::vector<std::vector<int>>{{1, 2}, {1, 3}, {2, 3}});
}

TEST_CASE("structural partition") {
    for (int n : {8, 12}) {
        auto r = find_structural_partition(parity_graph(n));
        REQUIRE(r.certificate);
        std::vector<int> v1(static_cast<size_t>(n / 2));
        std::iota(v1.begin(), v1.end(), 1);
        CHECK(r.certificate->b == v1);
        CHECK(partition_holds(parity_graph(n), r.certificate->b));
        for (const auto& [e, c] : r.certificate->per_edge_intersections) {
            CHECK(c % 2 == 1);
            CHECK((4 - c) % 2 == 1);
        }
    }
    auto k7 = find_structural_partition(complete_hypergraph(7, 3));
    CHECK_FALSE(k7.certificate);
    CHECK(k7.failure_stage == kStageNoPair);

    auto h9 = find_structural_partition(blow_up(base_family(3, 3, 4), {3, 3, 3}));
    CHECK_FALSE(h9.certificate);
    CHECK_FALSE(h9.failure_stage.empty());
    CHECK_FALSE(h9.warnings.empty());
}

TEST_CASE("forming good walks") {
    auto k6 = complete_hypergraph(6, 3);
    auto w = forming_good_walk(k6, {1, 2, 3}, {1, 2, 3}, 1, 2, 4);
    CHECK(w.sequence == std::vector<int>{1, 2, 3, 4, 1, 3, 2, 1, 3});
    CHECK(w.length(3) == 6);
    CHECK_THROWS_AS(forming_good_walk(k6, {1, 2, 3}, {1, 2, 3}, 1, 2, 3), ParameterError);

    auto h = parity_graph(12);
    std::vector<int> e{1, 2, 3, 7};
    auto wit = is_exchangeable(h, e, 1, 2);
    REQUIRE(wit);
    auto g = forming_good_walk(h, e, {4, 3, 2, 1}, 1, 2, *wit);
    CHECK(walk_ok(g, h));
    CHECK(g.length(4) == 8);
    CHECK(std::vector<int>(g.sequence.begin(), g.sequence.begin() + 4) == std::vector<int>{7, 3, 2, 1});
    CHECK(std::vector<int>(g.sequence.end() - 4, g.sequence.end()) == std::vector<int>{7, 3, 1, 2});
    CHECK_THROWS_AS(forming_good_walk(h, e, {1, 2, 3, 4}, 1, 4, 8), ParameterError);
}

TEST_CASE("permutation walks") {
    std::mt19937 rng(5);
    auto k6 = complete_hypergraph(6, 3);
    for (int trial = 0; trial < 50; ++trial) {
        auto sigma = random_permutation(3, rng);
        auto w = realize_permutation_walk(k6, {2, 4, 6}, sigma);
        REQUIRE(w);
        CHECK(walk_ok(*w, k6));
        CHECK(w->length(3) % 3 == 0);
        CHECK(w->length(3) <= 10 * 9 - 30);
    }
    Hypergraph single(6, 3, {{1, 2, 3}});
    CHECK_FALSE(realize_permutation_walk(single, {1, 2, 3}, {2, 1, 3}));
    CHECK(realize_permutation_walk(single, {1, 2, 3}, {1, 2, 3}));

    auto h = parity_graph(12);
    auto swap = realize_permutation_walk(h, {1, 2, 3, 7}, {2, 1, 3, 4});
    REQUIRE(swap);
    CHECK(swap->length(4) == 8);
    CHECK_FALSE(realize_permutation_walk(h, {1, 2, 3, 7}, {4, 2, 3, 1}));
}

TEST_CASE("cycle certificates") {
    auto k9 = complete_hypergraph(9, 3);
    auto c = build_cycle_certificate(k9, 7, {2, 5, 8});
    REQUIRE(c);
    CHECK(c->sequence.size() == 7);
    CHECK(validate_walk(*c, 3, edge_window_predicate(k9)).ok);

    auto k8 = complete_hypergraph(8, 4);
    auto c8 = build_cycle_certificate(k8, 10, {1, 2, 3, 4});
    REQUIRE(c8);
    CHECK(validate_walk(*c8, 4, edge_window_predicate(k8)).ok);

    // Every edge of the parity graph meets V_1 in 1 or 3 vertices, never 2.
    auto h = parity_graph(12);
    CHECK_THROWS_AS(build_cycle_certificate(h, 6, {1, 2, 3, 4, 5, 6}), ParameterError);
    CHECK_FALSE(has_hom_tight_cycle(h, 6, 20000));
    CHECK_THROWS_AS(build_cycle_certificate(k9, 9, {1, 2, 3}), ParameterError);
}

TEST_CASE("local structure of blow-ups with large codegree") {
    // Property checks on small instances where the outcome is known: parity
    // blow-ups have complete bipartite auxiliary graphs and connected
    // bipartite links at every non-exchangeable pair.
    for (int n : {8, 10, 12}) {
        auto h = parity_graph(n);
        for (const auto& e : h.edges()) {
            auto aux = auxiliary_graph(h, e);
            CHECK(is_complete_bipartite(aux));
            for (auto [u, v] : aux.non_exchangeable_pairs) {
                std::vector<int> a;
                for (int x : e)
                    if (x != u && x != v) a.push_back(x);
                auto l = link_graph(h, a);
                CHECK(is_connected(l));
                CHECK(bipartition(l));
            }
        }
    }
}

TEST_SUITE_END();
