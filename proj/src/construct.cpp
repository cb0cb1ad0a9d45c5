#include "kld/construct.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "kld/errors.hpp"

namespace kld {

namespace {

long long mod(long long a, long long m) { return ((a % m) + m) % m; }

bool congruent_pm(long long a, long long r, long long k) { return mod(a - r, k) == 0 || mod(a + r, k) == 0; }

bool nonnegative(const TypeTuple& x) {
    return std::all_of(x.coords.begin(), x.coords.end(), [](int c) { return c >= 0; });
}

TypeTuple shifted(const TypeTuple& x, int from, int to) {
    TypeTuple y = x;
    --y[from];
    ++y[to];
    return y;
}

TypeList permutations_of(std::vector<int> v) {
    TypeList out;
    std::sort(v.begin(), v.end());
    do {
        out.emplace_back(v);
    } while (std::next_permutation(v.begin(), v.end()));
    sort_canonical(out);
    return out;
}

}  // namespace

TypeFamily base_family(int k, int d, int ell) {
    if (d < 2) throw ParameterError("base family needs d >= 2");
    if (k < 0) throw ParameterError("k must be non-negative");
    TypeList out;
    std::vector<int> cur(static_cast<size_t>(d), 0);
    // Same descending recursion as enumerate_types, keeping only the residue class.
    std::function<void(int, int, int)> rec = [&](int pos, int remaining, int weight) {
        if (pos == d - 1) {
            cur[static_cast<size_t>(pos)] = remaining;
            if (mod(weight + static_cast<long long>(d) * remaining, d) == 1 % d) out.emplace_back(cur);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            cur[static_cast<size_t>(pos)] = v;
            rec(pos + 1, remaining - v, static_cast<int>((weight + static_cast<long long>(pos + 1) * v) % d));
        }
    };
    rec(0, k, 0);
    return TypeFamily{k, ell, d, std::move(out)};
}

TypeFamily hls_family(int k, int ell) {
    DerivedParameters dp = derived_parameters(k, ell);
    return base_family(k, dp.p, ell);
}

ReplacementSet replacement_set(const TypeTuple& x) {
    const int d = x.dim();
    int alpha = -1;
    for (int i = d - 1; i >= 0; --i)
        if (x[i] == 0) {
            alpha = i;
            break;
        }
    if (alpha < 0) throw ParameterError("tuple " + x.str() + " has no zero coordinate");

    auto prev = [d](int i) { return (i + d - 1) % d; };
    auto next = [d](int i) { return (i + 1) % d; };
    TypeList out;
    for (int i = 0; i < d; ++i) {
        if (i == alpha || i == next(alpha)) continue;
        TypeTuple y = shifted(x, i, prev(i));
        if (nonnegative(y)) out.push_back(std::move(y));
    }
    TypeTuple y = shifted(x, next(alpha), prev(alpha));
    if (nonnegative(y)) out.push_back(std::move(y));
    sort_canonical(out);
    return ReplacementSet{out, alpha + 1};
}

ConstructedFamily local_replacement_family(int k, int ell) {
    DerivedParameters dp = derived_parameters(k, ell);
    if (dp.q < 5) throw ParameterError("construction requires k/gcd(k, ell) >= 5");
    TypeFamily base = base_family(k, dp.t, ell);

    ReplacementPlan plan;
    std::set<TypeTuple> result;
    for (const auto& x : base.types) {
        bool bad = std::all_of(x.coords.begin(), x.coords.end(), [&](int c) { return c % dp.q == 0; });
        if (bad) {
            plan.problematic.push_back(x);
        } else {
            result.insert(x);
        }
    }
    for (const auto& x : plan.problematic) {
        ReplacementSet r = replacement_set(x);
        plan.replacements[x] = r.types;
        plan.chosen_alpha[x] = r.alpha;
        result.insert(r.types.begin(), r.types.end());
    }
    TypeList types(result.begin(), result.end());
    sort_canonical(types);
    return ConstructedFamily{TypeFamily{k, ell, dp.t, std::move(types)}, std::move(plan)};
}

void check_stable_hypotheses(int k, int ell) {
    if (k < 3) throw ParameterError("stable construction needs k >= 3");
    if (std::gcd(k, ell) != 1) throw ParameterError("gcd(k, ℓ) ≠ 1");
    if (mod(ell, k) == 0) throw ParameterError("ℓ ≡ 0 (mod k)");
    if (congruent_pm(ell, 1, k)) throw ParameterError("ℓ ≡ ±1 (mod k)");
    if (congruent_pm(ell, 2, k)) throw ParameterError("ℓ ≡ ±2 (mod k)");
    if (congruent_pm(3LL * ell, 1, k)) throw ParameterError("3ℓ ≡ ±1 (mod k)");
    if (congruent_pm(3LL * ell, 2, k)) throw ParameterError("3ℓ ≡ ±2 (mod k)");
}

StableConstruction stable_construction(int k, int ell) {
    check_stable_hypotheses(k, ell);
    StableConstruction sc;
    for (int a = 1; a < k; ++a)
        if (mod(static_cast<long long>(ell) * a, k) == 1) {
            sc.alpha = a;
            break;
        }
    if (sc.alpha == 0) throw ConsistencyError("no inverse of ell modulo k");

    TypeList mono = permutations_of({k, 0, 0});
    TypeList split = permutations_of({sc.alpha, k - sc.alpha, 0});
    std::set<TypeTuple> forbidden(mono.begin(), mono.end());
    forbidden.insert(split.begin(), split.end());
    sc.forbidden.assign(forbidden.begin(), forbidden.end());
    sort_canonical(sc.forbidden);

    TypeFamily base = base_family(k, 3, ell);
    std::set<TypeTuple> result;
    for (const auto& x : base.types) {
        if (forbidden.count(x)) {
            sc.plan.problematic.push_back(x);
        } else {
            result.insert(x);
        }
    }
    for (const auto& x : sc.plan.problematic) {
        bool is_mono = std::find(mono.begin(), mono.end(), x) != mono.end();
        bool is_split = std::find(split.begin(), split.end(), x) != split.end();
        if (is_mono && is_split) throw ConsistencyError("tuple " + x.str() + " matches two replacement rules");
        TypeList repl;
        if (is_mono) {
            int i = static_cast<int>(std::find(x.coords.begin(), x.coords.end(), k) - x.coords.begin());
            repl.push_back(shifted(x, i, (i + 1) % 3));
        } else {
            int a = -1;
            int b = -1;
            for (int i = 0; i < 3; ++i) {
                if (x[i] == 0) continue;
                (a < 0 ? a : b) = i;
            }
            repl.push_back(shifted(x, a, b));
            repl.push_back(shifted(x, b, a));
        }
        sort_canonical(repl);
        sc.plan.replacements[x] = repl;
        result.insert(repl.begin(), repl.end());
    }
    TypeList types(result.begin(), result.end());
    sort_canonical(types);
    sc.family = TypeFamily{k, ell, 3, std::move(types)};
    return sc;
}

}  // namespace kld
