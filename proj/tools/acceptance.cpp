// Acceptance checks. Each criterion prints one PASS/FAIL line with its
// measured time against a fixed limit.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "kld/construct.hpp"
#include "kld/errors.hpp"
#include "kld/hypergraph.hpp"
#include "kld/search.hpp"
#include "kld/structure.hpp"

using namespace kld;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
};

std::string params(int k, int ell) { return "(k=" + std::to_string(k) + ", ell=" + std::to_string(ell) + ")"; }

struct Verified {
    TypeFamily family;
    bool stable = false;
};

std::vector<Verified> hls_grid() {
    std::vector<Verified> out;
    for (int k = 3; k <= 12; ++k)
        for (int ell = k + 1; ell <= 40; ++ell)
            if (ell % k != 0) out.push_back({hls_family(k, ell)});
    return out;
}

const std::vector<std::pair<int, int>> kLocalCases = {{5, 7}, {5, 8}, {5, 9}, {15, 18}, {20, 24}, {21, 27}};
const std::vector<std::pair<int, int>> kStableCases = {{9, 22}, {9, 23}};

std::vector<Verified> all_verified() {
    auto out = hls_grid();
    for (auto [k, ell] : kLocalCases) out.push_back({local_replacement_family(k, ell).family});
    for (auto [k, ell] : kStableCases) out.push_back({stable_family(k, ell), true});
    return out;
}

Outcome criterion1() {
    Outcome o;
    int n = 0;
    for (const auto& v : hls_grid()) {
        ++n;
        o.require(verify_family(v.family).pass(), "hls family fails verification " + params(v.family.k, v.family.ell));
    }
    if (o.ok) o.detail = std::to_string(n) + " families verified";
    return o;
}

Outcome criterion2() {
    Outcome o;
    for (auto [k, ell] : kLocalCases)
        o.require(verify_family(local_replacement_family(k, ell).family).pass(), "fails " + params(k, ell));
    if (o.ok) o.detail = "6 families verified";
    return o;
}

Outcome criterion3() {
    Outcome o;
    for (auto [k, ell] : kStableCases) o.require(check_stability(stable_family(k, ell)).pass, "not stable " + params(k, ell));
    const std::vector<std::tuple<int, int, std::string>> gates = {
        {9, 20, "ℓ ≡ ±2 (mod k)"}, {8, 19, "3ℓ ≡ ±1 (mod k)"}, {7, 17, "3ℓ ≡ ±2 (mod k)"}};
    for (const auto& [k, ell, expected] : gates) {
        std::string got = "accepted";
        try {
            stable_family(k, ell);
        } catch (const ParameterError& e) {
            got = e.what();
        }
        o.require(got == expected, params(k, ell) + " gave '" + got + "', expected '" + expected + "'");
    }
    if (o.ok) o.detail = "2 stable families, 3 gates named correctly";
    return o;
}

Outcome criterion4() {
    Outcome o;
    int cycles = 0, minus = 0;
    for (const auto& v : all_verified()) {
        const auto& f = v.family;
        ++cycles;
        o.require(!has_type_cycle(f, f.ell), "type cycle found for " + params(f.k, f.ell));
        if (std::gcd(f.k, f.ell) > 1 || v.stable) {
            ++minus;
            o.require(!has_type_cycle_minus(f, f.ell), "type cycle minus found for " + params(f.k, f.ell));
        }
    }
    auto w = has_type_cycle_minus(base_family(3, 3, 4), 4);
    o.require(w && w->sequence == std::vector<int>{1, 1, 1, 2} && w->missing_window == 1,
              "expected the (1,1,1,2) cycle minus an edge for B_3^3 at ell=4");
    if (o.ok)
        o.detail = std::to_string(cycles) + " cycle-free, " + std::to_string(minus) + " cycle-minus-free, (1,1,1,2) found";
    return o;
}

Outcome criterion5() {
    Outcome o;
    struct Case {
        TypeFamily f;
        std::string name;
    };
    const std::vector<Case> cases = {{base_family(3, 3), "B_3^3"},
                                     {base_family(4, 2), "B_2^4"},
                                     {TypeFamily{3, 0, 3, enumerate_types(3, 3)}, "T_3^3"},
                                     {TypeFamily{4, 0, 2, enumerate_types(4, 2)}, "T_2^4"}};
    int checks = 0;
    for (const auto& c : cases)
        for (int ell = c.f.k + 1; ell <= 10; ++ell) {
            auto h = blow_up(c.f, std::vector<int>(static_cast<size_t>(c.f.d), ell));
            auto edge_ok = edge_window_predicate(h);
            auto label_ok = label_window_predicate(c.f);
            for (bool minus : {false, true}) {
                auto lab = minus ? has_type_cycle_minus(c.f, ell) : has_type_cycle(c.f, ell);
                auto ver = minus ? has_hom_tight_cycle_minus(h, ell, 20000) : has_hom_tight_cycle(h, ell, 20000);
                ++checks;
                std::string where = c.name + " ell=" + std::to_string(ell) + (minus ? " minus" : "");
                o.require(lab.has_value() == ver.has_value(), "levels disagree for " + where);
                if (lab) o.require(validate_walk(*lab, c.f.k, label_ok).ok, "bad label certificate for " + where);
                if (ver) o.require(validate_walk(*ver, c.f.k, edge_ok).ok, "bad vertex certificate for " + where);
            }
        }
    if (o.ok) o.detail = std::to_string(checks) + " label/vertex comparisons agree";
    return o;
}

Outcome criterion6() {
    Outcome o;
    auto h = blow_up(base_family(3, 3, 4), {3, 3, 3});
    o.require(min_codegree(h).value == 2, "min codegree of H_{9,3}^3 is not 2");
    const int m = 8;
    int n = 0;
    for (const auto& v : all_verified()) {
        const auto& f = v.family;
        std::vector<int> sizes(static_cast<size_t>(f.d), m);
        int value = f.k <= 4 ? min_codegree(blow_up(f, sizes)).value : blowup_min_codegree(f, sizes).value;
        ++n;
        o.require(value >= m - f.k + 1, "codegree bound fails for " + params(f.k, f.ell));
    }
    if (o.ok) o.detail = "H_{9,3}^3 codegree 2; bound holds on " + std::to_string(n) + " blow-ups";
    return o;
}

Outcome criterion7() {
    Outcome o;
    std::ostringstream counts;
    for (auto [k, ell] : std::vector<std::pair<int, int>>{{3, 4}, {4, 5}, {5, 7}}) {
        auto bf = brute_force_enumerate(k, ell, 3);
        auto dfs = dfs_enumerate(k, ell, 3);
        o.require(dfs.complete() && dfs.count == bf.count, "dfs and brute force differ for " + params(k, ell));
        counts << params(k, ell) << "=" << dfs.count << " ";
    }
    for (auto [a, b] : std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>{
             {{3, 4}, {3, 5}}, {{4, 5}, {4, 7}}, {{5, 7}, {5, 8}}, {{5, 7}, {5, 9}}}) {
        o.require(dfs_enumerate(a.first, a.second, 3).count == dfs_enumerate(b.first, b.second, 3).count,
                  "count changes between " + params(a.first, a.second) + " and " + params(b.first, b.second));
    }
    if (o.ok) o.detail = "counts " + counts.str() + "match brute force and are ell-invariant";
    return o;
}

Outcome criterion8() {
    Outcome o;
    auto r = dfs_exists(20, 24, 3);
    o.require(r.complete(), "search did not complete");
    o.require(!r.example, "a family was found");
    std::ostringstream d;
    d << "none, " << r.explored_nodes << " nodes";
    auto stretch = dfs_exists(28, 32, 3);
    d << "; k=28 stretch: " << (stretch.complete() ? (stretch.example ? "found" : "none") : "incomplete") << " in "
      << stretch.elapsed_seconds << " s";
    if (o.ok) o.detail = d.str();
    return o;
}

Outcome criterion9() {
    Outcome o;
    SearchOptions opt;
    opt.keep_families = 100000;
    auto r = dfs_enumerate(15, 18, 3, opt);
    o.require(r.complete(), "enumeration did not complete");
    o.require(r.families.size() == r.count, "not every family was retained for re-verification");
    for (const auto& f : r.families) o.require(verify_family(f).pass(), "an enumerated family fails verification");
    std::ostringstream d;
    d << "count " << r.count << " (" << r.convention << "), reference 432: " << (r.count == 432 ? "match" : "mismatch")
      << "; all re-verified";
    if (o.ok) o.detail = d.str();
    return o;
}

Outcome criterion10() {
    Outcome o;
    for (int n : {8, 12}) {
        auto h = blow_up(base_family(4, 2, 6), {n / 2, n / 2});
        auto p = find_structural_partition(h);
        o.require(p.certificate.has_value(), "no partition for H_{" + std::to_string(n) + ",2}^4: " + p.failure_stage);
        if (!p.certificate) continue;
        for (const auto& [e, c] : p.certificate->per_edge_intersections)
            o.require(c % 2 == 1 && (4 - c) % 2 == 1, "even intersection");
        int b = static_cast<int>(p.certificate->b.size());
        o.require(3 * b >= n && 3 * b <= 2 * n, "size bounds violated");
        o.require(partition_holds(h, p.certificate->b), "independent partition check fails");
    }
    auto k7 = find_structural_partition(complete_hypergraph(7, 3));
    o.require(!k7.certificate && k7.failure_stage == kStageNoPair, "K_7^3 did not stop at '" + std::string(kStageNoPair) + "'");
    if (o.ok) o.detail = "odd partitions for n=8,12; K_7^3 stops at '" + std::string(kStageNoPair) + "'";
    return o;
}

Outcome criterion11() {
    Outcome o;
    std::mt19937 rng(11);
    int forming = 0, realized = 0;
    for (const auto& h : {complete_hypergraph(6, 3), blow_up(base_family(4, 2, 6), {6, 6})}) {
        const int k = h.k();
        const auto& edges = h.edges();
        auto ok = edge_window_predicate(h);
        auto random_edge = [&]() {
            auto e = edges[rng() % edges.size()];
            std::shuffle(e.begin(), e.end(), rng);
            return e;
        };
        for (int trial = 0; trial < 1000; ++trial) {
            auto e = random_edge();
            std::vector<int> sigma(static_cast<size_t>(k));
            std::iota(sigma.begin(), sigma.end(), 1);
            std::shuffle(sigma.begin(), sigma.end(), rng);
            std::vector<std::pair<int, int>> pairs;
            for (int i = 1; i <= k; ++i)
                for (int j = i + 1; j <= k; ++j)
                    if (is_exchangeable(h, e, e[static_cast<size_t>(i - 1)], e[static_cast<size_t>(j - 1)])) pairs.emplace_back(i, j);
            if (pairs.empty()) continue;
            auto [i, j] = pairs[rng() % pairs.size()];
            int w = *is_exchangeable(h, e, e[static_cast<size_t>(i - 1)], e[static_cast<size_t>(j - 1)]);
            auto walk = forming_good_walk(h, e, sigma, i, j, w);
            ++forming;
            o.require(walk.length(k) == 2 * k && validate_walk(walk, k, ok).ok, "bad forming walk");
            std::vector<int> start, end;
            for (int p = 0; p < k; ++p) {
                int s = sigma[static_cast<size_t>(p)];
                start.push_back(e[static_cast<size_t>(s - 1)]);
                int t = s == i ? j : s == j ? i : s;
                end.push_back(e[static_cast<size_t>(t - 1)]);
            }
            o.require(std::equal(start.begin(), start.end(), walk.sequence.begin()), "forming walk starts wrong");
            o.require(std::equal(end.begin(), end.end(), walk.sequence.end() - k), "forming walk ends wrong");
        }
        for (int trial = 0; trial < 1000; ++trial) {
            auto e = random_edge();
            // Permute positions only within classes of mutually reachable
            // vertices, so a routing always exists.
            std::vector<int> cls(static_cast<size_t>(k));
            std::iota(cls.begin(), cls.end(), 0);
            for (int a = 0; a < k; ++a)
                for (int b = a + 1; b < k; ++b)
                    if (is_exchangeable(h, e, e[static_cast<size_t>(a)], e[static_cast<size_t>(b)]))
                        for (int& c : cls)
                            if (c == cls[static_cast<size_t>(b)]) c = cls[static_cast<size_t>(a)];
            std::vector<int> sigma(static_cast<size_t>(k));
            std::iota(sigma.begin(), sigma.end(), 1);
            for (int c = 0; c < k; ++c) {
                std::vector<int> pos;
                for (int p = 0; p < k; ++p)
                    if (cls[static_cast<size_t>(p)] == c) pos.push_back(p);
                std::vector<int> vals;
                for (int p : pos) vals.push_back(p + 1);
                std::shuffle(vals.begin(), vals.end(), rng);
                for (size_t t = 0; t < pos.size(); ++t) sigma[static_cast<size_t>(pos[t])] = vals[t];
            }
            auto walk = realize_permutation_walk(h, e, sigma);
            ++realized;
            o.require(walk.has_value(), "no permutation walk");
            if (!walk) continue;
            o.require(validate_walk(*walk, k, ok).ok, "invalid permutation walk");
            o.require(walk->length(k) <= 10 * k * k - 10 * k, "permutation walk too long");
            o.require(walk->length(k) % k == 0, "permutation walk length not divisible by k");
        }
    }
    auto k9 = complete_hypergraph(9, 3);
    auto ok9 = edge_window_predicate(k9);
    int cycles = 0;
    for (int a = 1; a <= 9; ++a)
        for (int b = a + 1; b <= 9; ++b)
            for (int c = b + 1; c <= 9; ++c) {
                auto w = build_cycle_certificate(k9, 7, {a, b, c});
                ++cycles;
                o.require(w && w->sequence.size() == 7 && validate_walk(*w, 3, ok9).ok, "no C^3_7 certificate in K_9^3");
            }
    if (o.ok)
        o.detail = std::to_string(forming) + " forming walks, " + std::to_string(realized) + " permutation walks, " +
                   std::to_string(cycles) + " cycle certificates";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    std::vector<int> only;
    bool include_long = false;
    app.add_option("--only", only, "Run just these criteria")->delimiter(',');
    app.add_flag("--long", include_long, "Also run long-running criteria");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "hls validity grid", 5, criterion1},
        {2, "local-replacement validity", 10, criterion2},
        {3, "stable families and hypothesis gates", 1, criterion3},
        {4, "freeness oracles", 30, criterion4},
        {5, "vertex/label transfer", 120, criterion5},
        {6, "codegree values", 60, criterion6},
        {7, "search oracle equivalence", 1800, criterion7},
        {8, "nonexistence for k=20, ell=24, d=3", 12 * 3600, criterion8},
        {9, "count for k=15, ell=18, d=3", 12 * 3600, criterion9},
        {10, "structural pipeline", 10, criterion10},
        {11, "walk machinery", 60, criterion11},
    };
    const std::set<int> long_running = {8};

    int failures = 0;
    for (const auto& c : criteria) {
        bool selected = only.empty() ? (include_long || !long_running.count(c.id))
                                     : std::find(only.begin(), only.end(), c.id) != only.end();
        if (!selected) continue;
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = secs <= c.limit_seconds;
        bool pass = out.ok && in_time;
        if (out.ok && !in_time) out.detail += " (over the time limit)";
        std::printf("[%s] %2d %s: %s [%.2f s, limit %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    out.detail.c_str(), secs, c.limit_seconds);
        std::fflush(stdout);
        failures += !pass;
    }
    return failures == 0 ? 0 : 1;
}
