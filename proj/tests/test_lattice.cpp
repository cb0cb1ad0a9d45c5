#include <doctest.h>

#include <algorithm>
#include <set>

#include "kld/errors.hpp"
#include "kld/lattice.hpp"

using namespace kld;

TEST_SUITE_BEGIN("lattice");

TEST_CASE("enumeration order and size") {
    CHECK(enumerate_types(2, 2) == TypeList{{2, 0}, {1, 1}, {0, 2}});
    CHECK(enumerate_types(3, 3).size() == 10);
    CHECK(enumerate_types(5, 3).size() == 21);
    CHECK(enumerate_types(0, 4) == TypeList{{0, 0, 0, 0}});
    CHECK_THROWS_AS(enumerate_types(3, 0), ParameterError);

    for (int d = 1; d <= 5; ++d)
        for (int k = 0; k <= 9; ++k) {
            auto ts = enumerate_types(k, d);
            CHECK(ts.size() == lattice_size(k, d));
            CHECK(std::is_sorted(ts.begin(), ts.end(), CanonicalLess{}));
            std::set<TypeTuple> uniq(ts.begin(), ts.end());
            CHECK(uniq.size() == ts.size());
            for (const auto& x : ts) CHECK(x.total() == k);
        }
}

TEST_CASE("rank table agrees with enumeration") {
    for (int d = 1; d <= 5; ++d) {
        RankTable rt(8, d);
        for (int k = 0; k <= 8; ++k) {
            auto ts = enumerate_types(k, d);
            CHECK(rt.count(k) == ts.size());
            for (size_t i = 0; i < ts.size(); ++i) {
                CHECK(rt.rank(ts[i]) == i);
                CHECK(rt.unrank(i, k) == ts[i]);
            }
        }
    }
}

TEST_CASE("adjacency") {
    CHECK(are_adjacent({2, 1, 0}, {1, 2, 0}));
    CHECK_FALSE(are_adjacent({2, 1, 0}, {0, 3, 0}));
    CHECK_FALSE(are_adjacent({2, 1, 0}, {2, 1, 0}));
    CHECK_THROWS_AS(are_adjacent({2, 1, 0}, {2, 1}), ParameterError);
    CHECK_THROWS_AS(are_adjacent({2, 1, 0}, {2, 1, 1}), ParameterError);

    auto ts = enumerate_types(4, 3);
    for (const auto& x : ts) {
        CHECK_FALSE(are_adjacent(x, x));
        auto nb = lattice_neighbors(x);
        for (const auto& y : ts) {
            CHECK(are_adjacent(x, y) == are_adjacent(y, x));
            bool listed = std::find(nb.begin(), nb.end(), y) != nb.end();
            CHECK(listed == are_adjacent(x, y));
        }
    }
}

namespace {

// Reference components by repeated pairwise merging.
std::vector<std::set<TypeTuple>> slow_components(const TypeList& ts) {
    std::vector<std::set<TypeTuple>> comps;
    for (const auto& x : ts) comps.push_back({x});
    bool merged = true;
    while (merged) {
        merged = false;
        for (size_t a = 0; a < comps.size() && !merged; ++a)
            for (size_t b = a + 1; b < comps.size() && !merged; ++b)
                for (const auto& x : comps[a]) {
                    bool hit = std::any_of(comps[b].begin(), comps[b].end(),
                                           [&](const TypeTuple& y) { return are_adjacent(x, y); });
                    if (hit) {
                        comps[a].insert(comps[b].begin(), comps[b].end());
                        comps.erase(comps.begin() + static_cast<long>(b));
                        merged = true;
                        break;
                    }
                }
    }
    return comps;
}

}  // namespace

TEST_CASE("connected components") {
    CHECK(connected_components({}).empty());
    auto full = connected_components(enumerate_types(3, 3));
    REQUIRE(full.size() == 1);
    CHECK(full[0].size() == 10);

    auto b33 = connected_components({{2, 1, 0}, {1, 0, 2}, {0, 2, 1}});
    REQUIRE(b33.size() == 3);
    CHECK(b33[0] == TypeList{{2, 1, 0}});
    CHECK(b33[1] == TypeList{{1, 0, 2}});
    CHECK(b33[2] == TypeList{{0, 2, 1}});

    auto c = connected_components({{1, 3, 1}, {1, 4, 0}});
    REQUIRE(c.size() == 1);
    CHECK(c[0] == TypeList{{1, 4, 0}, {1, 3, 1}});

    SUBCASE("partition properties on pseudo-random subsets") {
        auto ts = enumerate_types(5, 3);
        unsigned seed = 12345;
        for (int trial = 0; trial < 60; ++trial) {
            TypeList sub;
            for (const auto& x : ts) {
                seed = seed * 1103515245u + 12345u;
                if ((seed >> 16) % 3 == 0) sub.push_back(x);
            }
            auto comps = connected_components(sub);
            auto ref = slow_components(sub);
            CHECK(comps.size() == ref.size());
            size_t covered = 0;
            for (size_t i = 0; i < comps.size(); ++i) {
                covered += comps[i].size();
                std::set<TypeTuple> s(comps[i].begin(), comps[i].end());
                CHECK(std::find(ref.begin(), ref.end(), s) != ref.end());
                if (i > 0) CHECK(CanonicalLess{}(comps[i - 1].front(), comps[i].front()));
            }
            CHECK(covered == sub.size());
        }
    }
}

TEST_CASE("edge type") {
    std::vector<int> labels = {0, 1, 1, 2};  // a=1, b=2, c=3
    CHECK(edge_type({1, 2, 3}, labels, 3) == TypeTuple{2, 1, 0});
    CHECK(edge_type({1, 2}, labels, 3) == TypeTuple{2, 0, 0});
    std::vector<int> labels2 = {0, 2, 3, 3};
    CHECK(edge_type({1, 2, 3}, labels2, 3) == TypeTuple{0, 1, 2});
    std::vector<int> partial = {0, 1, 0, 2};
    CHECK_THROWS_AS(edge_type({1, 2, 3}, partial, 3), DataError);
    CHECK_THROWS_AS(edge_type({1, 4}, labels, 3), DataError);
}

TEST_SUITE_END();
