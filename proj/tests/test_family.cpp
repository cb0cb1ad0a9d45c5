#include <doctest.h>

#include <numeric>

#include "kld/construct.hpp"
#include "kld/errors.hpp"
#include "kld/family.hpp"

using namespace kld;

namespace {

// Straightforward P1 check used as an oracle: every (k-1)-tuple is tested
// against every member.
bool naive_p1(const TypeFamily& f) {
    for (const auto& y : enumerate_types(f.k - 1, f.d)) {
        bool hit = false;
        for (const auto& x : f.types) {
            int diff = 0;
            bool below = true;
            for (int i = 0; i < f.d; ++i) {
                if (x[i] < y[i]) below = false;
                diff += x[i] - y[i];
            }
            if (below && diff == 1) hit = true;
        }
        if (!hit) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE_BEGIN("family");

TEST_CASE("derived parameters") {
    auto a = derived_parameters(3, 4);
    CHECK(a.g == 1);
    CHECK(a.q == 3);
    CHECK(a.p == 3);
    CHECK(a.t == 3);
    auto b = derived_parameters(20, 24);
    CHECK(b.g == 4);
    CHECK(b.q == 5);
    CHECK(b.p == 5);
    CHECK(b.t == 5);
    auto c = derived_parameters(15, 18);
    CHECK(c.g == 3);
    CHECK(c.q == 5);
    CHECK(c.p == 5);
    CHECK(c.t == 3);
    auto e = derived_parameters(12, 18);
    CHECK(e.g == 6);
    CHECK(e.q == 2);
    CHECK(e.t == 7);
    CHECK_THROWS_AS(derived_parameters(3, 6), ParameterError);
}

TEST_CASE("extension property") {
    CHECK(check_extension_property(base_family(3, 3, 4)).pass);

    auto single = make_family(3, 4, 3, {{3, 0, 0}});
    auto r = check_extension_property(single);
    CHECK_FALSE(r.pass);
    REQUIRE(r.witness);
    // First uncovered (k-1)-tuple in canonical order; (2,0,0) is the only one covered.
    CHECK(*r.witness == TypeTuple{1, 1, 0});

    auto f = base_family(5, 3, 7);
    std::erase(f.types, TypeTuple{0, 5, 0});
    auto r2 = check_extension_property(f);
    CHECK_FALSE(r2.pass);
    REQUIRE(r2.witness);
    CHECK(*r2.witness == TypeTuple{0, 4, 0});

    auto empty = make_family(4, 5, 3, {});
    auto r3 = check_extension_property(empty);
    CHECK_FALSE(r3.pass);
    CHECK(*r3.witness == TypeTuple{3, 0, 0});
}

TEST_CASE("extension property matches the naive oracle and is monotone") {
    auto ts = enumerate_types(4, 3);
    unsigned seed = 7;
    for (int trial = 0; trial < 200; ++trial) {
        TypeList sub;
        for (const auto& x : ts) {
            seed = seed * 1664525u + 1013904223u;
            if ((seed >> 20) % 4 != 0) sub.push_back(x);
        }
        auto f = make_family(4, 5, 3, sub);
        bool p1 = check_extension_property(f).pass;
        CHECK(p1 == naive_p1(f));
        if (p1) {
            for (const auto& x : ts) {
                auto g = make_family(4, 5, 3, f.types);
                g.types.push_back(x);
                sort_canonical(g.types);
                CHECK(check_extension_property(g).pass);
            }
        }
    }
}

TEST_CASE("component invariants") {
    auto c1 = find_component_invariant({{2, 1, 0}}, 3, 3);
    REQUIRE(c1);
    CHECK(c1->index_set == std::vector<int>{1});
    CHECK(c1->value == 2);

    auto c2 = find_component_invariant({{1, 4, 0}, {1, 3, 1}}, 3, 5);
    REQUIRE(c2);
    CHECK(c2->index_set == std::vector<int>{1});
    CHECK(c2->value == 1);

    CHECK_FALSE(find_component_invariant({{5, 0, 0}}, 3, 5));

    auto order = index_sets_in_order(3);
    CHECK(order == std::vector<std::vector<int>>{{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}});
}

TEST_CASE("verify family") {
    auto b = verify_family(base_family(3, 3, 4));
    CHECK(b.pass());
    CHECK(b.certificates.size() == 3);

    auto full = verify_family(make_family(3, 4, 3, enumerate_types(3, 3)));
    CHECK(full.p1);
    CHECK_FALSE(full.p2);
    REQUIRE(full.p2_witness);
    CHECK(full.p2_witness->size() == 10);

    auto b24 = verify_family(make_family(4, 6, 2, {{3, 1}, {1, 3}}));
    CHECK(b24.pass());
    REQUIRE(b24.certificates.size() == 2);
    CHECK(b24.certificates[0].index_set == std::vector<int>{1});
    CHECK(b24.certificates[0].value == 3);
    CHECK(b24.certificates[1].index_set == std::vector<int>{1});
    CHECK(b24.certificates[1].value == 1);

    CHECK_THROWS_AS(verify_family(base_family(3, 3, 9)), ParameterError);
}

TEST_CASE("base families pass for the whole small grid, with re-validating certificates") {
    for (int k = 3; k <= 12; ++k)
        for (int ell = k + 1; ell <= 60; ++ell) {
            if (ell % k == 0) continue;
            auto f = hls_family(k, ell);
            auto r = verify_family(f);
            CHECK_MESSAGE(r.pass(), "k=", k, " ell=", ell);
            int q = derived_parameters(k, ell).q;
            for (const auto& c : r.certificates) CHECK(certificate_holds(c, q));
        }
}

TEST_CASE("stability") {
    auto s1 = check_stability(TypeFamily{5, 7, 3, {{2, 1, 0}}});
    CHECK(s1.pass);
    REQUIRE(s1.certificates.size() == 1);
    CHECK(s1.certificates[0].index_set == std::vector<int>{2});
    CHECK(s1.certificates[0].value == 1);

    auto s2 = check_stability(make_family(5, 7, 3, {{2, 3, 0}}));
    CHECK_FALSE(s2.pass);
    CHECK(s2.witness);

    CHECK_THROWS_AS(check_stability(base_family(4, 2, 6)), ParameterError);

    SUBCASE("stability implies P2") {
        auto ts = enumerate_types(5, 3);
        unsigned seed = 99;
        for (int trial = 0; trial < 300; ++trial) {
            TypeList sub;
            for (const auto& x : ts) {
                seed = seed * 1664525u + 1013904223u;
                if ((seed >> 21) % 3 == 0) sub.push_back(x);
            }
            auto f = make_family(5, 7, 3, sub);
            if (check_stability(f).pass) CHECK(verify_family(f).p2);
        }
    }
}

TEST_SUITE_END();
