#include "kld/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "kld/errors.hpp"

namespace kld {

int TypeTuple::total() const { return std::accumulate(coords.begin(), coords.end(), 0); }

std::string TypeTuple::str() const {
    std::string s = "(";
    for (size_t i = 0; i < coords.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(coords[i]);
    }
    return s + ")";
}

void sort_canonical(TypeList& types) {
    if (std::adjacent_find(types.begin(), types.end(), [](const TypeTuple& a, const TypeTuple& b) {
            return !CanonicalLess{}(a, b);
        }) == types.end())
        return;
    std::sort(types.begin(), types.end(), CanonicalLess{});
    types.erase(std::unique(types.begin(), types.end()), types.end());
}

namespace {

void fill(int pos, int remaining, std::vector<int>& cur, TypeList& out) {
    int d = static_cast<int>(cur.size());
    if (pos == d - 1) {
        cur[pos] = remaining;
        out.emplace_back(cur);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur[pos] = v;
        fill(pos + 1, remaining - v, cur, out);
    }
}

}  // namespace

TypeList enumerate_types(int k, int d) {
    if (d <= 0) throw ParameterError("d must be at least 1");
    if (k < 0) throw ParameterError("k must be non-negative");
    TypeList out;
    std::vector<int> cur(static_cast<size_t>(d), 0);
    fill(0, k, cur, out);
    return out;
}

std::uint64_t binomial(int n, int r) {
    if (r < 0 || n < 0 || r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t b = 1;
    for (int i = 1; i <= r; ++i) b = b * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
    return b;
}

std::uint64_t lattice_size(int k, int d) { return binomial(k + d - 1, d - 1); }

bool are_adjacent(const TypeTuple& x, const TypeTuple& y) {
    if (x.dim() != y.dim()) throw ParameterError("tuples have different dimensions");
    if (x.total() != y.total()) throw ParameterError("tuples have different sums");
    int dist = 0;
    for (int i = 0; i < x.dim(); ++i) dist += std::abs(x[i] - y[i]);
    return dist == 2;
}

TypeList lattice_neighbors(const TypeTuple& x) {
    TypeList out;
    for (int i = 0; i < x.dim(); ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < x.dim(); ++j) {
            if (j == i) continue;
            TypeTuple y = x;
            --y[i];
            ++y[j];
            out.push_back(std::move(y));
        }
    }
    sort_canonical(out);
    return out;
}

std::vector<TypeList> connected_components(const TypeList& types) {
    TypeList sorted = types;
    sort_canonical(sorted);
    if (sorted.empty()) return {};
    const int d = sorted.front().dim();
    const int k = sorted.front().total();
    for (const auto& x : sorted)
        if (x.dim() != d || x.total() != k) throw ParameterError("tuples come from different lattices");

    // Two tuples are adjacent exactly when they cover a common (k-1)-tuple.
    RankTable ranks(k, d);
    std::vector<int> parent(sorted.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[static_cast<size_t>(a)] != a) a = parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
        return a;
    };
    const std::uint64_t below = k > 0 ? ranks.count(k - 1) : 0;
    const bool dense = below <= (std::uint64_t{1} << 24);
    std::vector<int> first_dense(dense ? static_cast<size_t>(below) : 0, -1);
    std::unordered_map<std::uint64_t, int> first_sparse;
    auto first_cover = [&](std::uint64_t r, int m) -> int {
        if (dense) {
            int& slot = first_dense[static_cast<size_t>(r)];
            if (slot < 0) slot = m;
            return slot;
        }
        return first_sparse.emplace(r, m).first->second;
    };
    for (size_t m = 0; m < sorted.size(); ++m) {
        TypeTuple y = sorted[m];
        for (int j = 0; j < d; ++j) {
            if (y[j] == 0) continue;
            --y[j];
            int other = first_cover(ranks.rank(y), static_cast<int>(m));
            if (other != static_cast<int>(m)) {
                int a = find(other);
                int b = find(static_cast<int>(m));
                if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
            }
            ++y[j];
        }
    }
    // Roots are the smallest member index, so components appear in order of
    // their first member.
    std::vector<TypeList> out;
    std::vector<int> slot(sorted.size(), -1);
    for (size_t m = 0; m < sorted.size(); ++m) {
        int r = find(static_cast<int>(m));
        if (slot[static_cast<size_t>(r)] < 0) {
            slot[static_cast<size_t>(r)] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[static_cast<size_t>(slot[static_cast<size_t>(r)])].push_back(sorted[m]);
    }
    return out;
}

TypeTuple edge_type(const std::vector<int>& edge, const std::vector<int>& labels, int d) {
    TypeTuple t(std::vector<int>(static_cast<size_t>(d), 0));
    for (int v : edge) {
        if (v <= 0 || v >= static_cast<int>(labels.size()) || labels[static_cast<size_t>(v)] == 0)
            throw DataError("vertex " + std::to_string(v) + " has no part label");
        int lab = labels[static_cast<size_t>(v)];
        if (lab < 1 || lab > d)
            throw DataError("vertex " + std::to_string(v) + " has label " + std::to_string(lab) + " outside 1.." +
                            std::to_string(d));
        ++t[lab - 1];
    }
    return t;
}

RankTable::RankTable(int max_total, int d) : max_total_(max_total), d_(d) {
    if (d < 1) throw ParameterError("d must be at least 1");
    table_.assign(static_cast<size_t>(d + 1), std::vector<std::uint64_t>(static_cast<size_t>(max_total + 1), 0));
    for (int parts = 1; parts <= d; ++parts)
        for (int total = 0; total <= max_total; ++total)
            table_[static_cast<size_t>(parts)][static_cast<size_t>(total)] = lattice_size(total, parts);
}

std::uint64_t RankTable::compositions(int total, int parts) const {
    if (total < 0) return 0;
    return table_[static_cast<size_t>(parts)][static_cast<size_t>(total)];
}

std::uint64_t RankTable::rank(const int* coords) const {
    int rem = 0;
    for (int i = 0; i < d_; ++i) rem += coords[i];
    std::uint64_t r = 0;
    // Tuples with a larger value at position i come first; by the hockey-stick
    // identity there are compositions(rem - c - 1, d - i) of them.
    for (int i = 0; i + 1 < d_; ++i) {
        r += compositions(rem - coords[i] - 1, d_ - i);
        rem -= coords[i];
    }
    return r;
}

TypeTuple RankTable::unrank(std::uint64_t r, int total) const {
    TypeTuple x(std::vector<int>(static_cast<size_t>(d_), 0));
    int rem = total;
    for (int i = 0; i + 1 < d_; ++i) {
        int v = rem;
        while (true) {
            std::uint64_t block = compositions(rem - v, d_ - i - 1);
            if (r < block) break;
            r -= block;
            --v;
        }
        x[i] = v;
        rem -= v;
    }
    x[d_ - 1] = rem;
    return x;
}

TypeIndex::TypeIndex(int k, int d) : k_(k), d_(d), types_(enumerate_types(k, d)), ranks_(k, d) {}

int TypeIndex::find(const TypeTuple& x) const {
    if (x.dim() != d_ || x.total() != k_) return -1;
    for (int c : x.coords)
        if (c < 0) return -1;
    return static_cast<int>(ranks_.rank(x));
}

}  // namespace kld
