#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "kld/construct.hpp"
#include "kld/errors.hpp"
#include "kld/search.hpp"

using namespace kld;

TEST_SUITE_BEGIN("search");

TEST_CASE("depth-first search matches brute force") {
    struct Case {
        int k, ell, d;
    };
    for (Case c : {Case{3, 4, 3}, Case{3, 5, 3}, Case{4, 5, 3}, Case{4, 7, 2}, Case{5, 7, 2}, Case{4, 6, 3}}) {
        CAPTURE(c.k);
        CAPTURE(c.ell);
        CAPTURE(c.d);
        auto bf = brute_force_enumerate(c.k, c.ell, c.d);
        auto dfs = dfs_enumerate(c.k, c.ell, c.d);
        CHECK(dfs.complete());
        CHECK(dfs.count == bf.count);
        CHECK(dfs.convention == std::string("all-subsets"));
    }
    CHECK(brute_force_enumerate(3, 4, 3).count >= 1);
}

TEST_CASE("every pruning rule can be switched off without changing the count") {
    for (auto [k, ell] : {std::pair{4, 5}, std::pair{5, 7}, std::pair{3, 5}}) {
        const auto reference = dfs_enumerate(k, ell, 3).count;
        for (int rule = 0; rule < 4; ++rule) {
            SearchOptions o;
            if (rule == 0) o.prune.p1 = false;
            if (rule == 1) o.prune.complete_components = false;
            if (rule == 2) o.prune.partial_components = false;
            if (rule == 3) o.prune.propagate = false;
            CAPTURE(k);
            CAPTURE(rule);
            CHECK(dfs_enumerate(k, ell, 3, o).count == reference);
        }
    }
}

TEST_CASE("enumerated families verify") {
    SearchOptions o;
    o.keep_families = 1000;
    auto r = dfs_enumerate(6, 9, 3, o);
    CHECK(r.count == r.families.size());
    for (const auto& f : r.families) CHECK(verify_family(f).pass());
}

TEST_CASE("counts depend on ell only through gcd and q") {
    CHECK(dfs_enumerate(4, 5, 3).count == dfs_enumerate(4, 7, 3).count);
    CHECK(dfs_enumerate(5, 7, 3).count == dfs_enumerate(5, 8, 3).count);
    CHECK(dfs_enumerate(6, 9, 3).count == dfs_enumerate(6, 15, 3).count);
}

TEST_CASE("existence search") {
    auto r = dfs_exists(5, 7, 3);
    REQUIRE(r.example);
    CHECK(verify_family(*r.example).pass());
    CHECK(verify_family(local_replacement_family(5, 7).family).pass());

    auto none = dfs_exists(20, 24, 3);
    CHECK(none.complete());
    CHECK_FALSE(none.example);
}

TEST_CASE("parameter and capacity errors") {
    CHECK_THROWS_AS(dfs_enumerate(4, 8, 3), ParameterError);
    CHECK_THROWS_AS(brute_force_enumerate(6, 7, 4), CapacityError);
    CHECK_THROWS_AS(dfs_enumerate(4, 5, 7), ParameterError);
}

TEST_CASE("budget exhaustion is reported, never a silent partial count") {
    SearchOptions o;
    o.budget.max_nodes = 50;
    auto r = dfs_enumerate(15, 18, 3, o);
    CHECK_FALSE(r.complete());
}

TEST_CASE("checkpoint resume and workers give the full count") {
    const auto full = dfs_enumerate(15, 18, 3).count;
    auto path = (std::filesystem::temp_directory_path() / "kld_search_test.ckpt").string();
    std::remove(path.c_str());

    SearchOptions o;
    o.checkpoint_path = path;
    o.split_depth = 6;
    o.budget.max_nodes = 400;
    auto partial = dfs_enumerate(15, 18, 3, o);
    CHECK_FALSE(partial.complete());
    CHECK(partial.tasks_done < partial.tasks_total);

    o.budget.max_nodes = 0;
    o.resume = true;
    auto resumed = dfs_enumerate(15, 18, 3, o);
    CHECK(resumed.complete());
    CHECK(resumed.count == full);
    std::remove(path.c_str());

    SearchOptions w;
    w.workers = 3;
    w.split_depth = 5;
    CHECK(dfs_enumerate(15, 18, 3, w).count == full);
    auto ex = dfs_exists(15, 18, 3, w);
    REQUIRE(ex.example);
    CHECK(ex.example->types == dfs_exists(15, 18, 3).example->types);
}

TEST_SUITE_END();
