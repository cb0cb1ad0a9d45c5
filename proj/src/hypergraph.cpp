#include "kld/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>

#include "kld/errors.hpp"

namespace kld {

// ---------------------------------------------------------------------------
// Hypergraph storage

Hypergraph::Hypergraph(int n, int k, std::vector<std::vector<int>> edges, std::vector<int> labels, int d)
    : n_(n), k_(k), d_(d), labels_(std::move(labels)) {
    if (n < 0 || k < 1) throw ParameterError("hypergraph needs n >= 0 and k >= 1");
    long double total = 1;
    for (int i = 0; i < k; ++i) total = total * (n - i) / (i + 1);
    if (total > 9.0e18L) throw CapacityError("too many potential edges to index");
    choose_.assign(static_cast<size_t>(n + 1), std::vector<std::uint64_t>(static_cast<size_t>(k + 1), 0));
    for (int a = 0; a <= n; ++a) {
        choose_[static_cast<size_t>(a)][0] = 1;
        for (int b = 1; b <= std::min(a, k); ++b)
            choose_[static_cast<size_t>(a)][static_cast<size_t>(b)] =
                choose_[static_cast<size_t>(a - 1)][static_cast<size_t>(b - 1)] +
                (b <= a - 1 ? choose_[static_cast<size_t>(a - 1)][static_cast<size_t>(b)] : 0);
    }
    for (auto& e : edges) {
        std::sort(e.begin(), e.end());
        if (static_cast<int>(e.size()) != k) throw DataError("edge does not have " + std::to_string(k) + " vertices");
        if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw DataError("edge repeats a vertex");
        if (e.front() < 1 || e.back() > n) throw DataError("edge vertex outside 1.." + std::to_string(n));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    index_.reserve(edges_.size() * 2);
    for (const auto& e : edges_) index_.insert(rank(e));

    if (!labels_.empty()) {
        if (static_cast<int>(labels_.size()) != n + 1) throw DataError("partition must label every vertex");
        if (d_ < 1) throw DataError("partition needs a positive number of parts");
        for (int v = 1; v <= n; ++v)
            if (labels_[static_cast<size_t>(v)] < 1 || labels_[static_cast<size_t>(v)] > d_)
                throw DataError("vertex " + std::to_string(v) + " has no valid part label");
    }
}

std::vector<int> Hypergraph::part_sizes() const {
    std::vector<int> sizes(static_cast<size_t>(d_), 0);
    for (int v = 1; v <= n_ && !labels_.empty(); ++v) ++sizes[static_cast<size_t>(labels_[static_cast<size_t>(v)] - 1)];
    return sizes;
}

std::uint64_t Hypergraph::rank(const std::vector<int>& e) const {
    std::uint64_t r = 0;
    for (size_t i = 0; i < e.size(); ++i) r += choose_[static_cast<size_t>(e[i] - 1)][i + 1];
    return r;
}

bool Hypergraph::has_edge(const std::vector<int>& e) const {
    if (static_cast<int>(e.size()) != k_) return false;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] < 1 || e[i] > n_) return false;
        if (i && e[i] <= e[i - 1]) return false;
    }
    return index_.count(rank(e)) > 0;
}

bool Hypergraph::is_edge(std::vector<int> vertices) const {
    std::sort(vertices.begin(), vertices.end());
    return has_edge(vertices);
}

std::vector<int> nearly_equal_sizes(int n, int d) {
    if (d < 1 || n < 0) throw ParameterError("need n >= 0 and d >= 1");
    std::vector<int> sizes(static_cast<size_t>(d), n / d);
    for (int i = 0; i < n % d; ++i) ++sizes[static_cast<size_t>(i)];
    return sizes;
}

namespace {

void combinations(int lo, int count, int r, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (r == 0) {
        out.push_back(cur);
        return;
    }
    for (int v = lo; v <= lo + count - r; ++v) {
        cur.push_back(v);
        combinations(v + 1, count - (v + 1 - lo), r - 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> all_subsets(int first, int count, int r) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    if (r <= count) combinations(first, count, r, cur, out);
    return out;
}

}  // namespace

Hypergraph blow_up(const TypeFamily& f, const std::vector<int>& part_sizes, std::size_t edge_cap) {
    const int d = static_cast<int>(part_sizes.size());
    if (d != f.d) throw ParameterError("need one part size per coordinate");
    for (int s : part_sizes)
        if (s < 1) throw ParameterError("part sizes must be positive");
    const int n = std::accumulate(part_sizes.begin(), part_sizes.end(), 0);
    if (n < f.k) throw ParameterError("blow-up has fewer than k vertices");

    std::vector<int> labels(static_cast<size_t>(n + 1), 0);
    std::vector<int> first(static_cast<size_t>(d), 1);
    for (int i = 0, v = 1; i < d; ++i) {
        first[static_cast<size_t>(i)] = v;
        for (int j = 0; j < part_sizes[static_cast<size_t>(i)]; ++j) labels[static_cast<size_t>(v++)] = i + 1;
    }

    long double expected = 0;
    for (const auto& x : f.types) {
        long double prod = 1;
        for (int i = 0; i < d; ++i) prod *= static_cast<long double>(binomial(part_sizes[static_cast<size_t>(i)], x[i]));
        expected += prod;
    }
    if (expected > static_cast<long double>(edge_cap)) throw CapacityError("blow-up would exceed the edge cap");

    std::vector<std::vector<int>> edges;
    edges.reserve(static_cast<size_t>(expected));
    for (const auto& x : f.types) {
        std::vector<std::vector<std::vector<int>>> choices(static_cast<size_t>(d));
        bool possible = true;
        for (int i = 0; i < d; ++i) {
            choices[static_cast<size_t>(i)] = all_subsets(first[static_cast<size_t>(i)], part_sizes[static_cast<size_t>(i)], x[i]);
            if (choices[static_cast<size_t>(i)].empty()) possible = false;
        }
        if (!possible) continue;
        std::vector<int> cur;
        std::function<void(int)> rec = [&](int part) {
            if (part == d) {
                edges.push_back(cur);
                return;
            }
            for (const auto& c : choices[static_cast<size_t>(part)]) {
                cur.insert(cur.end(), c.begin(), c.end());
                rec(part + 1);
                cur.resize(cur.size() - c.size());
            }
        };
        rec(0);
    }
    return Hypergraph(n, f.k, std::move(edges), std::move(labels), d);
}

Hypergraph complete_hypergraph(int n, int k) { return Hypergraph(n, k, all_subsets(1, n, k)); }

// ---------------------------------------------------------------------------
// Codegree

CodegreeResult min_codegree(const Hypergraph& h) {
    const int n = h.n();
    const int r = h.k() - 1;
    if (r < 0 || n < r) throw ParameterError("min codegree needs n >= k - 1");
    const std::uint64_t total = binomial(n, r);
    if (total > 50'000'000ULL) throw CapacityError("too many (k-1)-sets for codegree counting");

    std::vector<std::vector<std::uint64_t>> ch(static_cast<size_t>(n + 1), std::vector<std::uint64_t>(static_cast<size_t>(r + 2), 0));
    for (int a = 0; a <= n; ++a) {
        ch[static_cast<size_t>(a)][0] = 1;
        for (int b = 1; b <= std::min(a, r + 1); ++b)
            ch[static_cast<size_t>(a)][static_cast<size_t>(b)] = ch[static_cast<size_t>(a - 1)][static_cast<size_t>(b - 1)] +
                                                                 (b <= a - 1 ? ch[static_cast<size_t>(a - 1)][static_cast<size_t>(b)] : 0);
    }
    auto rank = [&](const std::vector<int>& s) {
        std::uint64_t v = 0;
        for (size_t i = 0; i < s.size(); ++i) v += ch[static_cast<size_t>(s[i] - 1)][i + 1];
        return v;
    };

    std::vector<int> count(static_cast<size_t>(total), 0);
    std::vector<int> sub(static_cast<size_t>(r));
    for (const auto& e : h.edges()) {
        for (int skip = 0; skip <= r; ++skip) {
            for (int i = 0, j = 0; i <= r; ++i)
                if (i != skip) sub[static_cast<size_t>(j++)] = e[static_cast<size_t>(i)];
            ++count[static_cast<size_t>(rank(sub))];
        }
    }

    CodegreeResult best;
    best.value = std::numeric_limits<int>::max();
    std::vector<int> s(static_cast<size_t>(r));
    std::iota(s.begin(), s.end(), 1);
    while (true) {
        int c = count[static_cast<size_t>(rank(s))];
        if (c < best.value) {
            best.value = c;
            best.witness = s;
            if (c == 0) break;
        }
        int i = r - 1;
        while (i >= 0 && s[static_cast<size_t>(i)] == n - r + i + 1) --i;
        if (i < 0) break;
        ++s[static_cast<size_t>(i)];
        for (int j = i + 1; j < r; ++j) s[static_cast<size_t>(j)] = s[static_cast<size_t>(j - 1)] + 1;
    }
    return best;
}

CodegreeResult blowup_min_codegree(const TypeFamily& f, const std::vector<int>& part_sizes) {
    const int d = f.d;
    if (static_cast<int>(part_sizes.size()) != d) throw ParameterError("need one part size per coordinate");
    CodegreeResult best;
    best.value = std::numeric_limits<int>::max();
    for (const auto& y : enumerate_types(f.k - 1, d)) {
        bool fits = true;
        for (int j = 0; j < d; ++j)
            if (y[j] > part_sizes[static_cast<size_t>(j)]) fits = false;
        if (!fits) continue;
        int value = 0;
        TypeTuple x = y;
        for (int j = 0; j < d; ++j) {
            ++x[j];
            if (f.contains(x)) value += part_sizes[static_cast<size_t>(j)] - y[j];
            --x[j];
        }
        if (value < best.value) {
            best.value = value;
            best.witness.clear();
            for (int j = 0, base = 1; j < d; base += part_sizes[static_cast<size_t>(j)], ++j)
                for (int c = 0; c < y[j]; ++c) best.witness.push_back(base + c);
        }
    }
    if (best.value == std::numeric_limits<int>::max()) throw ParameterError("parts too small to hold k - 1 vertices");
    return best;
}

WindowPredicate label_window_predicate(const TypeFamily& f) {
    return [&f](const std::vector<int>& w) {
        TypeTuple t(std::vector<int>(static_cast<size_t>(f.d), 0));
        for (int lab : w) {
            if (lab < 1 || lab > f.d) return false;
            ++t[lab - 1];
        }
        return f.contains(t);
    };
}

WindowPredicate edge_window_predicate(const Hypergraph& h) {
    return [&h](const std::vector<int>& w) { return h.is_edge(w); };
}

// ---------------------------------------------------------------------------
// Exact-length closed walks on window state graphs

namespace {

// Ordered (k-1)-tuples over symbols 1..m; an arc appends one symbol when the
// resulting k-window is accepted. States are numbered in lexicographic order,
// so the smallest successor is the one with the smallest id.
struct StateSpace {
    int k = 0;
    std::vector<std::vector<int>> states;
    std::vector<std::vector<int>> succ;
};

StateSpace build_states(int m, int k, bool distinct, std::size_t cap, const WindowPredicate& ok) {
    long double estimate = 1;
    for (int i = 0; i < k - 1; ++i) estimate *= distinct ? (m - i) : m;
    if (estimate > static_cast<long double>(cap))
        throw CapacityError("state space of " + std::to_string(static_cast<unsigned long long>(estimate)) +
                            " exceeds the cap of " + std::to_string(cap) + "; use the label-level oracle");
    StateSpace s;
    s.k = k;
    std::unordered_map<std::uint64_t, int> id;
    auto code = [m](const std::vector<int>& t, size_t from, size_t to) {
        std::uint64_t c = 0;
        for (size_t i = from; i < to; ++i) c = c * static_cast<std::uint64_t>(m + 1) + static_cast<std::uint64_t>(t[i]);
        return c;
    };
    std::vector<int> cur;
    std::vector<char> used(static_cast<size_t>(m + 1), 0);
    std::function<void()> rec = [&]() {
        if (static_cast<int>(cur.size()) == k - 1) {
            id.emplace(code(cur, 0, cur.size()), static_cast<int>(s.states.size()));
            s.states.push_back(cur);
            return;
        }
        for (int c = 1; c <= m; ++c) {
            if (distinct && used[static_cast<size_t>(c)]) continue;
            used[static_cast<size_t>(c)] = 1;
            cur.push_back(c);
            rec();
            cur.pop_back();
            used[static_cast<size_t>(c)] = 0;
        }
    };
    rec();
    s.succ.resize(s.states.size());
    std::vector<int> window(static_cast<size_t>(k));
    for (size_t u = 0; u < s.states.size(); ++u) {
        std::copy(s.states[u].begin(), s.states[u].end(), window.begin());
        for (int c = 1; c <= m; ++c) {
            window[static_cast<size_t>(k - 1)] = c;
            if (!ok(window)) continue;
            auto it = id.find(code(window, 1, window.size()));
            if (it != id.end()) s.succ[u].push_back(it->second);
        }
        std::sort(s.succ[u].begin(), s.succ[u].end());
    }
    return s;
}

class BitMatrix {
public:
    explicit BitMatrix(size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}
    size_t size() const { return n_; }
    bool get(size_t i, size_t j) const { return (bits_[i * words_ + j / 64] >> (j % 64)) & 1; }
    void set(size_t i, size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }
    std::uint64_t* row(size_t i) { return bits_.data() + i * words_; }
    const std::uint64_t* row(size_t i) const { return bits_.data() + i * words_; }
    size_t words() const { return words_; }

    template <class F>
    void for_each_in_row(size_t i, F f) const {
        const std::uint64_t* r = row(i);
        for (size_t w = 0; w < words_; ++w) {
            std::uint64_t b = r[w];
            while (b) {
                f(w * 64 + static_cast<size_t>(__builtin_ctzll(b)));
                b &= b - 1;
            }
        }
    }

private:
    size_t n_;
    size_t words_;
    std::vector<std::uint64_t> bits_;
};

BitMatrix adjacency(const StateSpace& s) {
    BitMatrix a(s.states.size());
    for (size_t u = 0; u < s.succ.size(); ++u)
        for (int v : s.succ[u]) a.set(u, static_cast<size_t>(v));
    return a;
}

BitMatrix multiply(const BitMatrix& p, const BitMatrix& q) {
    BitMatrix r(p.size());
    for (size_t i = 0; i < p.size(); ++i) {
        std::uint64_t* out = r.row(i);
        p.for_each_in_row(i, [&](size_t j) {
            const std::uint64_t* in = q.row(j);
            for (size_t w = 0; w < q.words(); ++w) out[w] |= in[w];
        });
    }
    return r;
}

// A^len over the boolean semiring. Short lengths use repeated left
// multiplication by the sparse arc lists; long ones use binary exponentiation.
BitMatrix reach_exactly(const StateSpace& s, int len) {
    BitMatrix a = adjacency(s);
    if (len <= 64) {
        BitMatrix m = a;
        for (int t = 1; t < len; ++t) {
            BitMatrix next(m.size());
            for (size_t i = 0; i < s.succ.size(); ++i) {
                std::uint64_t* out = next.row(i);
                for (int j : s.succ[i]) {
                    const std::uint64_t* in = m.row(static_cast<size_t>(j));
                    for (size_t w = 0; w < m.words(); ++w) out[w] |= in[w];
                }
            }
            m = std::move(next);
        }
        return m;
    }
    std::optional<BitMatrix> result;
    BitMatrix base = a;
    for (int e = len; e > 0; e >>= 1) {
        if (e & 1) result = result ? multiply(*result, base) : base;
        if (e > 1) base = multiply(base, base);
    }
    return *result;
}

// The lexicographically smallest path of exactly len arcs from src to dst,
// assuming one exists.
std::vector<int> extract_path(const StateSpace& s, int src, int dst, int len) {
    const size_t n = s.states.size();
    std::vector<std::vector<char>> layer(static_cast<size_t>(len + 1), std::vector<char>(n, 0));
    layer[0][static_cast<size_t>(dst)] = 1;
    for (int r = 1; r <= len; ++r)
        for (size_t u = 0; u < n; ++u)
            for (int v : s.succ[u])
                if (layer[static_cast<size_t>(r - 1)][static_cast<size_t>(v)]) {
                    layer[static_cast<size_t>(r)][u] = 1;
                    break;
                }
    if (!layer[static_cast<size_t>(len)][static_cast<size_t>(src)]) throw ConsistencyError("path extraction failed");
    std::vector<int> path{src};
    int u = src;
    for (int t = 0; t < len; ++t) {
        int next = -1;
        for (int v : s.succ[static_cast<size_t>(u)])
            if (layer[static_cast<size_t>(len - t - 1)][static_cast<size_t>(v)]) {
                next = v;
                break;
            }
        u = next;
        path.push_back(u);
    }
    return path;
}

std::optional<WalkCertificate> closed_walk(const StateSpace& s, int ell) {
    BitMatrix r = reach_exactly(s, ell);
    for (size_t u = 0; u < s.states.size(); ++u) {
        if (!r.get(u, u)) continue;
        auto path = extract_path(s, static_cast<int>(u), static_cast<int>(u), ell);
        WalkCertificate w;
        w.kind = WalkKind::Cycle;
        for (int t = 0; t < ell; ++t) w.sequence.push_back(s.states[static_cast<size_t>(path[static_cast<size_t>(t)])][0]);
        return w;
    }
    return std::nullopt;
}

// Puts the single failing window (if any) first.
WalkCertificate normalize_minus(std::vector<int> seq, int k, const WindowPredicate& ok) {
    const int ell = static_cast<int>(seq.size());
    int missing = -1;
    for (int i = 0; i < ell; ++i)
        if (!ok(window_at(seq, i, k, true))) {
            if (missing >= 0) throw ConsistencyError("more than one window fails");
            missing = i;
        }
    WalkCertificate w;
    w.kind = WalkKind::CycleMinus;
    if (missing >= 0) {
        w.sequence = rotate_cyclic(seq, missing);
        w.missing_window = 1;
    } else {
        w.sequence = std::move(seq);
    }
    return w;
}

std::optional<WalkCertificate> closed_walk_minus(const StateSpace& s, int ell, const WindowPredicate& ok) {
    const int k = s.k;
    const int len = ell - k + 1;
    BitMatrix r = reach_exactly(s, len);
    std::vector<int> joined(static_cast<size_t>(2 * k - 2));
    std::vector<int> window(static_cast<size_t>(k));
    for (size_t a = 0; a < s.states.size(); ++a) {
        int found = -1;
        r.for_each_in_row(a, [&](size_t b) {
            if (found >= 0) return;
            std::copy(s.states[b].begin(), s.states[b].end(), joined.begin());
            std::copy(s.states[a].begin(), s.states[a].end(), joined.begin() + (k - 1));
            int bad = 0;
            for (int j = 0; j <= k - 2 && bad <= 1; ++j) {
                std::copy(joined.begin() + j, joined.begin() + j + k, window.begin());
                if (!ok(window)) ++bad;
            }
            if (bad <= 1) found = static_cast<int>(b);
        });
        if (found < 0) continue;
        auto path = extract_path(s, static_cast<int>(a), found, len);
        std::vector<int> seq = s.states[a];
        for (size_t t = 1; t < path.size(); ++t) seq.push_back(s.states[static_cast<size_t>(path[t])].back());
        return normalize_minus(std::move(seq), k, ok);
    }
    return std::nullopt;
}

void require_valid(const std::optional<WalkCertificate>& w, int k, const WindowPredicate& ok) {
    if (!w) return;
    auto check = validate_walk(*w, k, ok);
    if (!check) throw ConsistencyError("produced an invalid certificate: " + check.reason);
}

// ---------------------------------------------------------------------------
// Label level, component by component

// Positions of a cyclic sequence forced to carry equal labels when every
// required window has the same type: consecutive required windows i, i+1 share
// a type exactly when positions i and i+k agree.
std::vector<int> equal_label_classes(int k, int ell, bool minus) {
    std::vector<int> parent(static_cast<size_t>(ell));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        return parent[static_cast<size_t>(a)] == a ? a : parent[static_cast<size_t>(a)] = find(parent[static_cast<size_t>(a)]);
    };
    int lo = minus ? 1 : 0;
    int hi = minus ? ell - 2 : ell - 1;
    for (int i = lo; i <= hi; ++i) {
        int a = find(i);
        int b = find((i + k) % ell);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
    std::vector<int> cls(static_cast<size_t>(ell));
    for (int i = 0; i < ell; ++i) cls[static_cast<size_t>(i)] = find(i);
    return cls;
}

std::optional<std::vector<int>> solve_singleton(const TypeTuple& x, int k, int ell, bool minus,
                                                const std::vector<int>& cls) {
    const int d = x.dim();
    const int ref = minus ? 1 : 0;
    std::vector<int> pieces;
    std::unordered_map<int, int> weight;
    for (int i = 0; i < k; ++i) {
        int c = cls[static_cast<size_t>((ref + i) % ell)];
        if (weight[c]++ == 0) pieces.push_back(c);
    }
    std::vector<int> remaining = x.coords;
    std::unordered_map<int, int> label;
    std::function<bool(size_t)> assign = [&](size_t p) {
        if (p == pieces.size()) return true;
        int w = weight[pieces[p]];
        for (int a = 0; a < d; ++a) {
            if (remaining[static_cast<size_t>(a)] < w) continue;
            remaining[static_cast<size_t>(a)] -= w;
            label[pieces[p]] = a + 1;
            if (assign(p + 1)) return true;
            remaining[static_cast<size_t>(a)] += w;
        }
        return false;
    };
    if (!assign(0)) return std::nullopt;
    std::vector<int> seq(static_cast<size_t>(ell));
    for (int i = 0; i < ell; ++i) {
        auto it = label.find(cls[static_cast<size_t>(i)]);
        seq[static_cast<size_t>(i)] = it == label.end() ? 1 : it->second;
    }
    return seq;
}

// Backtracking over positions 0..ell-1 with label-symmetry breaking. Every
// cyclic window of length `window`, except the one starting at `skip`, must
// have a type in `allowed`; a partially assigned one must stay below some
// member. A nonempty `target` fixes the total label counts.
class ComponentSearch {
public:
    ComponentSearch(const TypeList& allowed, int window, int ell, int skip, std::vector<int> target,
                    std::uint64_t node_cap)
        : allowed_(allowed), k_(window), ell_(ell), skip_(skip), d_(allowed.front().dim()),
          target_(std::move(target)), node_cap_(node_cap) {
        prefix_.assign(static_cast<size_t>(d_), std::vector<int>(static_cast<size_t>(ell + 1), 0));
        seq_.assign(static_cast<size_t>(ell), 0);
        class_prev_.assign(static_cast<size_t>(d_), -1);
        auto tgt = [&](int a) { return target_.empty() ? 0 : target_[static_cast<size_t>(a)]; };
        for (int a = 0; a < d_; ++a) {
            bool present = target_.empty()
                               ? std::any_of(allowed.begin(), allowed.end(), [&](const TypeTuple& x) { return x[a] > 0; })
                               : tgt(a) > 0;
            if (present) labels_.push_back(a);
            for (int b = a - 1; b >= 0; --b) {
                bool same = tgt(a) == tgt(b) &&
                            std::all_of(allowed.begin(), allowed.end(), [&](const TypeTuple& x) { return x[a] == x[b]; });
                if (same) {
                    class_prev_[static_cast<size_t>(a)] = b;
                    break;
                }
            }
        }
        used_.assign(static_cast<size_t>(d_), 0);
        counts_.assign(static_cast<size_t>(d_), 0);
    }

    std::optional<std::vector<int>> run() {
        if (place(0)) {
            std::vector<int> out(seq_.size());
            for (size_t i = 0; i < seq_.size(); ++i) out[i] = seq_[i] + 1;
            return out;
        }
        return std::nullopt;
    }

private:
    bool place(int j) {
        if (j == ell_) return true;
        if (++nodes_ > node_cap_) throw CapacityError("label-level search exceeded its node cap");
        for (int a : labels_) {
            int prev = class_prev_[static_cast<size_t>(a)];
            if (prev >= 0 && !used_[static_cast<size_t>(prev)]) continue;
            if (!target_.empty() &&
                prefix_[static_cast<size_t>(a)][static_cast<size_t>(j)] >= target_[static_cast<size_t>(a)])
                continue;
            seq_[static_cast<size_t>(j)] = a;
            for (int b = 0; b < d_; ++b)
                prefix_[static_cast<size_t>(b)][static_cast<size_t>(j + 1)] =
                    prefix_[static_cast<size_t>(b)][static_cast<size_t>(j)] + (b == a ? 1 : 0);
            if (!consistent(j)) continue;
            char was = used_[static_cast<size_t>(a)];
            used_[static_cast<size_t>(a)] = 1;
            if (place(j + 1)) return true;
            used_[static_cast<size_t>(a)] = was;
        }
        return false;
    }

    // Count of label b among assigned positions in [lo, hi].
    int assigned(int b, int lo, int hi, int j) const {
        hi = std::min(hi, j);
        if (hi < lo) return 0;
        return prefix_[static_cast<size_t>(b)][static_cast<size_t>(hi + 1)] - prefix_[static_cast<size_t>(b)][static_cast<size_t>(lo)];
    }

    bool consistent(int j) {
        for (int back = 0; back < k_; ++back) {
            int s = ((j - back) % ell_ + ell_) % ell_;
            if (s == skip_) continue;
            int end = s + k_ - 1;
            bool complete;
            if (end < ell_) {
                complete = end <= j;
                for (int b = 0; b < d_; ++b) counts_[static_cast<size_t>(b)] = assigned(b, s, end, j);
            } else {
                complete = j == ell_ - 1;
                for (int b = 0; b < d_; ++b)
                    counts_[static_cast<size_t>(b)] = assigned(b, s, ell_ - 1, j) + assigned(b, 0, end - ell_, j);
            }
            bool fits = false;
            for (const auto& x : allowed_) {
                bool ok = true;
                for (int b = 0; b < d_ && ok; ++b)
                    ok = complete ? counts_[static_cast<size_t>(b)] == x[b] : counts_[static_cast<size_t>(b)] <= x[b];
                if (ok) {
                    fits = true;
                    break;
                }
            }
            if (!fits) return false;
        }
        return true;
    }

    const TypeList& allowed_;
    int k_;
    int ell_;
    int skip_;
    int d_;
    std::vector<int> target_;
    std::uint64_t node_cap_;
    std::uint64_t nodes_ = 0;
    std::vector<int> labels_;
    std::vector<int> class_prev_;
    std::vector<char> used_;
    std::vector<int> seq_;
    std::vector<int> counts_;
    std::vector<std::vector<int>> prefix_;
};

constexpr std::uint64_t kComponentNodeCap = 2'000'000'000ULL;

// When ell < 2k a k-window is the complement of the (ell-k)-window that
// follows it, so fix the total label counts c and search the short windows
// against the types c - x instead.
std::optional<std::vector<int>> search_component(const TypeList& comp, int k, int ell, bool minus) {
    if (2 * k <= ell) return ComponentSearch(comp, k, ell, minus ? 0 : -1, {}, kComponentNodeCap).run();
    const int w = ell - k;
    const int d = comp.front().dim();
    std::set<std::vector<int>> targets;
    for (const auto& x : comp)
        for (const auto& v : enumerate_types(w, d)) {
            std::vector<int> c(static_cast<size_t>(d));
            for (int a = 0; a < d; ++a) c[static_cast<size_t>(a)] = x[a] + v[a];
            targets.insert(std::move(c));
        }
    for (const auto& c : targets) {
        TypeList complements;
        for (const auto& x : comp) {
            std::vector<int> y(static_cast<size_t>(d));
            bool ok = true;
            for (int a = 0; a < d && ok; ++a) {
                y[static_cast<size_t>(a)] = c[static_cast<size_t>(a)] - x[a];
                ok = y[static_cast<size_t>(a)] >= 0;
            }
            if (ok) complements.push_back(TypeTuple{std::move(y)});
        }
        if (complements.empty()) continue;
        // The window starting at i is complementary to the one starting at i+k.
        auto seq = ComponentSearch(complements, w, ell, minus ? k % ell : -1, c, kComponentNodeCap).run();
        if (seq) return seq;
    }
    return std::nullopt;
}

std::optional<WalkCertificate> type_cycle(const TypeFamily& f, int ell, bool minus) {
    if (ell <= f.k) throw ParameterError("cycle length must exceed k");
    const int k = f.k;
    auto cls = equal_label_classes(k, ell, minus);
    auto ok = label_window_predicate(f);
    for (const auto& comp : connected_components(f.types)) {
        std::optional<std::vector<int>> seq;
        if (comp.size() == 1) {
            seq = solve_singleton(comp.front(), k, ell, minus, cls);
        } else {
            seq = search_component(comp, k, ell, minus);
        }
        if (!seq) continue;
        std::optional<WalkCertificate> w;
        if (minus) {
            w = normalize_minus(std::move(*seq), k, ok);
        } else {
            w = WalkCertificate{std::move(*seq), WalkKind::Cycle, std::nullopt};
        }
        require_valid(w, k, ok);
        return w;
    }
    return std::nullopt;
}

}  // namespace

std::optional<WalkCertificate> has_type_cycle(const TypeFamily& f, int ell) { return type_cycle(f, ell, false); }

std::optional<WalkCertificate> has_type_cycle_minus(const TypeFamily& f, int ell) { return type_cycle(f, ell, true); }

std::optional<WalkCertificate> type_cycle_by_states(const TypeFamily& f, int ell, bool minus, std::size_t state_cap) {
    if (ell <= f.k) throw ParameterError("cycle length must exceed k");
    auto ok = label_window_predicate(f);
    StateSpace s = build_states(f.d, f.k, false, state_cap, ok);
    auto w = minus ? closed_walk_minus(s, ell, ok) : closed_walk(s, ell);
    require_valid(w, f.k, ok);
    return w;
}

std::optional<WalkCertificate> has_hom_tight_cycle(const Hypergraph& h, int ell, std::size_t state_cap) {
    if (ell <= h.k()) throw ParameterError("cycle length must exceed k");
    auto ok = edge_window_predicate(h);
    StateSpace s = build_states(h.n(), h.k(), true, state_cap, ok);
    auto w = closed_walk(s, ell);
    require_valid(w, h.k(), ok);
    return w;
}

std::optional<WalkCertificate> has_hom_tight_cycle_minus(const Hypergraph& h, int ell, std::size_t state_cap) {
    if (ell <= h.k()) throw ParameterError("cycle length must exceed k");
    auto ok = edge_window_predicate(h);
    StateSpace s = build_states(h.n(), h.k(), true, state_cap, ok);
    auto w = closed_walk_minus(s, ell, ok);
    require_valid(w, h.k(), ok);
    return w;
}

}  // namespace kld
