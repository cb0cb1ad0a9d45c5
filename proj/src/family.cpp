#include "kld/family.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>

#include "kld/errors.hpp"

namespace kld {

int smallest_prime_factor(int n) {
    if (n < 2) throw ParameterError("no prime factor of " + std::to_string(n));
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

DerivedParameters derived_parameters(int k, int ell) {
    if (k < 1 || ell < 1) throw ParameterError("k and ell must be positive");
    if (ell % k == 0)
        throw ParameterError("k divides ell, so q = 1; no family can exist since 1 divides every v_C");
    DerivedParameters dp;
    dp.g = std::gcd(k, ell);
    dp.q = k / dp.g;
    dp.p = smallest_prime_factor(dp.q);
    dp.t = std::max(3, dp.g);
    if (dp.t % 2 == 0) ++dp.t;
    return dp;
}

bool TypeFamily::contains(const TypeTuple& x) const {
    return std::binary_search(types.begin(), types.end(), x, CanonicalLess{});
}

TypeFamily make_family(int k, int ell, int d, TypeList types) {
    if (d < 1) throw ParameterError("d must be at least 1");
    for (const auto& x : types) {
        if (x.dim() != d) throw DataError("tuple " + x.str() + " does not have " + std::to_string(d) + " coordinates");
        if (x.total() != k) throw DataError("tuple " + x.str() + " does not sum to " + std::to_string(k));
        for (int c : x.coords)
            if (c < 0) throw DataError("tuple " + x.str() + " has a negative coordinate");
    }
    sort_canonical(types);
    return TypeFamily{k, ell, d, std::move(types)};
}

std::vector<std::vector<int>> index_sets_in_order(int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int start, int size) {
        if (static_cast<int>(cur.size()) == size) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= d; ++i) {
            cur.push_back(i);
            rec(i + 1, size);
            cur.pop_back();
        }
    };
    for (int size = 1; size <= d; ++size) rec(1, size);
    return out;
}

namespace {

const std::vector<std::vector<int>>& cached_index_sets(int d) {
    static std::mutex mu;
    static std::map<int, std::vector<std::vector<int>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, index_sets_in_order(d)).first;
    return it->second;
}

}  // namespace

int index_sum(const TypeTuple& x, const std::vector<int>& index_set) {
    int s = 0;
    for (int i : index_set) s += x[i - 1];
    return s;
}

ExtensionResult check_extension_property(const TypeFamily& f) {
    if (f.k < 1) return {true, std::nullopt};
    RankTable ranks(f.k, f.d);
    std::vector<char> covered(static_cast<size_t>(ranks.count(f.k - 1)), 0);
    for (const auto& x : f.types) {
        TypeTuple y = x;
        for (int j = 0; j < f.d; ++j) {
            if (y[j] == 0) continue;
            --y[j];
            covered[static_cast<size_t>(ranks.rank(y))] = 1;
            ++y[j];
        }
    }
    for (size_t r = 0; r < covered.size(); ++r)
        if (!covered[r]) return {false, ranks.unrank(r, f.k - 1)};
    return {true, std::nullopt};
}

namespace {

std::optional<ComponentCertificate> scan(const TypeList& component, int d,
                                         const std::function<bool(int)>& value_ok) {
    if (component.empty()) return std::nullopt;
    for (const auto& I : cached_index_sets(d)) {
        int v = index_sum(component.front(), I);
        bool constant = std::all_of(component.begin(), component.end(),
                                    [&](const TypeTuple& x) { return index_sum(x, I) == v; });
        if (constant && value_ok(v)) return ComponentCertificate{component, I, v};
    }
    return std::nullopt;
}

bool mod_is(long long a, long long r, long long m) { return ((a - r) % m + m) % m == 0; }

}  // namespace

std::optional<ComponentCertificate> find_component_invariant(const TypeList& component, int d, int q) {
    return scan(component, d, [q](int v) { return v % q != 0; });
}

VerificationReport verify_family(const TypeFamily& f) {
    DerivedParameters dp = derived_parameters(f.k, f.ell);
    VerificationReport r;
    auto ext = check_extension_property(f);
    r.p1 = ext.pass;
    r.p1_witness = ext.witness;
    r.p2 = true;
    for (const auto& comp : connected_components(f.types)) {
        auto cert = find_component_invariant(comp, f.d, dp.q);
        if (cert) {
            r.certificates.push_back(std::move(*cert));
        } else if (r.p2) {
            r.p2 = false;
            r.p2_witness = comp;
        }
    }
    return r;
}

StabilityReport check_stability(const TypeFamily& f) {
    DerivedParameters dp = derived_parameters(f.k, f.ell);
    if (dp.g != 1) throw ParameterError("stability requires gcd(k, ell) = 1");
    const long long k = f.k;
    const long long ell = f.ell;
    auto ok = [&](int v) {
        if (v % dp.q == 0) return false;
        long long lv = ell * v;
        return !mod_is(lv, 1, k) && !mod_is(lv, -1, k);
    };
    StabilityReport r;
    r.pass = true;
    for (const auto& comp : connected_components(f.types)) {
        auto cert = scan(comp, f.d, ok);
        if (cert) {
            r.certificates.push_back(std::move(*cert));
        } else if (r.pass) {
            r.pass = false;
            r.witness = comp;
        }
    }
    return r;
}

bool certificate_holds(const ComponentCertificate& c, int q) {
    if (c.index_set.empty() || c.component.empty() || q == 0) return false;
    if (c.value % q == 0) return false;
    return std::all_of(c.component.begin(), c.component.end(),
                       [&](const TypeTuple& x) { return index_sum(x, c.index_set) == c.value; });
}

}  // namespace kld
