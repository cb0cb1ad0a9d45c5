#include <doctest.h>

#include <numeric>
#include <set>
#include <string>

#include "kld/construct.hpp"
#include "kld/errors.hpp"

using namespace kld;

namespace {

int l1(const TypeTuple& a, const TypeTuple& b) {
    int s = 0;
    for (int i = 0; i < a.dim(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

std::string gate_message(int k, int ell) {
    try {
        stable_family(k, ell);
    } catch (const ParameterError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE_BEGIN("construct");

TEST_CASE("base family") {
    CHECK(base_family(3, 3).types == TypeList{{2, 1, 0}, {1, 0, 2}, {0, 2, 1}});
    CHECK(base_family(4, 2).types == TypeList{{3, 1}, {1, 3}});

    auto b53 = base_family(5, 3);
    CHECK(b53.types.size() == 7);
    CHECK(b53.contains({0, 5, 0}));
    CHECK_FALSE(b53.contains({5, 0, 0}));

    // Independent count: triple loop over compositions of 5.
    int count = 0;
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; a + b <= 5; ++b) {
            int c = 5 - a - b;
            if ((a + 2 * b + 3 * c) % 3 == 1) ++count;
        }
    CHECK(count == 7);
}

TEST_CASE("base family grid: P1 holds and components are isolated") {
    for (int k = 3; k <= 20; ++k)
        for (int d = 2; d <= 7; ++d) {
            auto f = base_family(k, d, k + 1);
            CHECK(check_extension_property(f).pass);
            for (const auto& c : connected_components(f.types)) CHECK(c.size() == 1);
        }
}

TEST_CASE("hls family") {
    CHECK(hls_family(3, 4).types == base_family(3, 3).types);
    CHECK(hls_family(4, 6).types == TypeList{{3, 1}, {1, 3}});
    CHECK(hls_family(6, 9).types == TypeList{{5, 1}, {3, 3}, {1, 5}});
    CHECK(hls_family(6, 9).d == 2);
    CHECK_THROWS_AS(hls_family(4, 8), ParameterError);
}

TEST_CASE("replacement sets") {
    auto r1 = replacement_set({0, 5, 0});
    CHECK(r1.alpha == 3);
    CHECK(r1.types == TypeList{{1, 4, 0}});

    auto r2 = replacement_set({5, 10, 0});
    CHECK(r2.alpha == 3);
    CHECK(r2.types == TypeList{{6, 9, 0}, {4, 11, 0}});

    auto r3 = replacement_set({0, 5, 10});
    CHECK(r3.alpha == 1);
    CHECK(r3.types == TypeList{{0, 6, 9}, {0, 4, 11}});

    CHECK_THROWS_AS(replacement_set({1, 2, 2}), ParameterError);
}

TEST_CASE("local replacement family") {
    auto c = local_replacement_family(5, 7);
    CHECK(c.plan.problematic == TypeList{{0, 5, 0}});
    CHECK(c.family.types.size() == 7);
    CHECK(c.family.contains({1, 4, 0}));
    CHECK_FALSE(c.family.contains({0, 5, 0}));
    CHECK(c.family.d == 3);
    CHECK(verify_family(c.family).pass());

    auto c15 = local_replacement_family(15, 18);
    // Problematic set by direct enumeration of multiples of 5 in T_3^15.
    TypeList expected;
    for (int a = 0; a <= 15; a += 5)
        for (int b = 0; a + b <= 15; b += 5) {
            int cc = 15 - a - b;
            if ((a + 2 * b + 3 * cc) % 3 == 1) expected.push_back({a, b, cc});
        }
    sort_canonical(expected);
    CHECK(c15.plan.problematic == expected);
    CHECK(verify_family(c15.family).pass());

    auto c20 = local_replacement_family(20, 24);
    CHECK(c20.family.d == 5);
    CHECK(verify_family(c20.family).pass());

    CHECK_THROWS_AS(local_replacement_family(4, 6), ParameterError);
    CHECK_THROWS_AS(local_replacement_family(12, 15), ParameterError);
}

TEST_CASE("local replacement grid") {
    for (int k = 5; k <= 21; ++k)
        for (int ell = k + 1; ell <= 3 * k; ++ell) {
            if (ell % k == 0) continue;
            auto dp = derived_parameters(k, ell);
            if (dp.q < 5) continue;
            auto c = local_replacement_family(k, ell);
            CHECK_MESSAGE(verify_family(c.family).pass(), "k=", k, " ell=", ell);
            const auto& p = c.plan.problematic;
            for (size_t i = 0; i < p.size(); ++i) {
                for (int v : p[i].coords) CHECK(v % dp.q == 0);
                CHECK(p[i][c.plan.chosen_alpha.at(p[i]) - 1] == 0);
                for (size_t j = i + 1; j < p.size(); ++j) CHECK(l1(p[i], p[j]) >= 2 * dp.q);
            }
        }
}

TEST_CASE("stable family") {
    auto s23 = stable_construction(9, 23);
    CHECK(s23.alpha == 2);
    CHECK(s23.plan.replacements.at({2, 7, 0}) == TypeList{{3, 6, 0}, {1, 8, 0}});
    CHECK(s23.forbidden.size() == 9);
    CHECK(check_stability(s23.family).pass);

    auto s22 = stable_construction(9, 22);
    CHECK(s22.alpha == 7);
    CHECK(check_stability(s22.family).pass);

    CHECK(gate_message(9, 20) == "ℓ ≡ ±2 (mod k)");
    CHECK(gate_message(8, 19) == "3ℓ ≡ ±1 (mod k)");
    CHECK(gate_message(7, 17) == "3ℓ ≡ ±2 (mod k)");
    CHECK(gate_message(9, 21) == "gcd(k, ℓ) ≠ 1");
    CHECK(gate_message(9, 19) == "ℓ ≡ ±1 (mod k)");
}

TEST_CASE("stable family grid") {
    int built = 0;
    for (int k = 4; k <= 15; ++k)
        for (int ell = k + 1; ell <= 4 * k; ++ell) {
            try {
                check_stable_hypotheses(k, ell);
            } catch (const ParameterError&) {
                continue;
            }
            auto s = stable_construction(k, ell);
            ++built;
            CHECK_MESSAGE(check_stability(s.family).pass, "k=", k, " ell=", ell);
            CHECK(verify_family(s.family).pass());
            std::set<TypeTuple> forb(s.forbidden.begin(), s.forbidden.end());
            for (const auto& x : s.family.types) CHECK(forb.count(x) == 0);
        }
    CHECK(built > 10);
}

TEST_SUITE_END();
