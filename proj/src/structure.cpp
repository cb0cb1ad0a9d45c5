#include "kld/structure.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "kld/errors.hpp"

namespace kld {

namespace {

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::vector<int> replaced(std::vector<int> e, int from, int to) {
    std::replace(e.begin(), e.end(), from, to);
    return e;
}

void require_permutation(const std::vector<int>& sigma, int k) {
    if (static_cast<int>(sigma.size()) != k) throw ParameterError("permutation must have k entries");
    std::vector<int> sorted = sigma;
    std::sort(sorted.begin(), sorted.end());
    for (int p = 0; p < k; ++p)
        if (sorted[static_cast<size_t>(p)] != p + 1) throw ParameterError("not a permutation of 1..k");
}

void require_valid(const WalkCertificate& w, const Hypergraph& h) {
    auto check = validate_walk(w, h.k(), edge_window_predicate(h));
    if (!check) throw ConsistencyError("assembled walk fails validation: " + check.reason);
}

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) { return parent[static_cast<size_t>(a)] == a ? a : parent[static_cast<size_t>(a)] = find(parent[static_cast<size_t>(a)]); }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
};

}  // namespace

std::optional<int> is_exchangeable(const Hypergraph& h, const std::vector<int>& e, int u, int v) {
    if (u == v) throw ParameterError("exchangeability needs two distinct vertices");
    if (!contains(e, u) || !contains(e, v)) throw ParameterError("both vertices must lie in the edge");
    for (int w = 1; w <= h.n(); ++w) {
        if (contains(e, w)) continue;
        if (h.is_edge(replaced(e, u, w)) && h.is_edge(replaced(e, v, w))) return w;
    }
    return std::nullopt;
}

AuxiliaryGraph auxiliary_graph(const Hypergraph& h, const std::vector<int>& e) {
    AuxiliaryGraph g;
    g.edge = e;
    std::sort(g.edge.begin(), g.edge.end());
    for (size_t a = 0; a < g.edge.size(); ++a)
        for (size_t b = a + 1; b < g.edge.size(); ++b)
            if (!is_exchangeable(h, g.edge, g.edge[a], g.edge[b])) g.non_exchangeable_pairs.emplace_back(g.edge[a], g.edge[b]);
    return g;
}

std::optional<Bipartition> is_complete_bipartite(const AuxiliaryGraph& g) {
    if (g.non_exchangeable_pairs.empty()) return Bipartition{g.edge, {}};
    std::set<std::pair<int, int>> adj(g.non_exchangeable_pairs.begin(), g.non_exchangeable_pairs.end());
    auto adjacent = [&](int a, int b) { return adj.count({std::min(a, b), std::max(a, b)}) > 0; };
    const int x = g.non_exchangeable_pairs.front().first;
    std::vector<int> same, other;
    for (int v : g.edge) (v == x || !adjacent(x, v) ? same : other).push_back(v);
    for (size_t a = 0; a < g.edge.size(); ++a)
        for (size_t b = a + 1; b < g.edge.size(); ++b) {
            int u = g.edge[a], v = g.edge[b];
            bool across = contains(same, u) != contains(same, v);
            if (across != adjacent(u, v)) return std::nullopt;
        }
    if (contains(other, g.edge.front())) std::swap(same, other);
    return Bipartition{same, other};
}

LinkGraph link_graph(const Hypergraph& h, const std::vector<int>& a) {
    std::vector<int> s = a;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw ParameterError("link set repeats a vertex");
    if (static_cast<int>(s.size()) > h.k() - 1) throw ParameterError("link set must have at most k - 1 vertices");
    for (int v : s)
        if (v < 1 || v > h.n()) throw ParameterError("link set vertex out of range");
    std::vector<std::vector<int>> edges;
    for (const auto& e : h.edges()) {
        if (!std::includes(e.begin(), e.end(), s.begin(), s.end())) continue;
        std::vector<int> rest;
        std::set_difference(e.begin(), e.end(), s.begin(), s.end(), std::back_inserter(rest));
        edges.push_back(std::move(rest));
    }
    LinkGraph l{{}, Hypergraph(h.n(), h.k() - static_cast<int>(s.size()), std::move(edges))};
    for (int v = 1; v <= h.n(); ++v)
        if (!std::binary_search(s.begin(), s.end(), v)) l.vertices.push_back(v);
    return l;
}

bool is_connected(const LinkGraph& l) {
    if (l.vertices.empty()) return true;
    Dsu dsu(static_cast<size_t>(l.graph.n() + 1));
    for (const auto& e : l.graph.edges())
        for (size_t i = 1; i < e.size(); ++i) dsu.unite(e[0], e[i]);
    int root = dsu.find(l.vertices.front());
    return std::all_of(l.vertices.begin(), l.vertices.end(), [&](int v) { return dsu.find(v) == root; });
}

std::optional<Bipartition> bipartition(const LinkGraph& l) {
    if (l.graph.k() != 2) throw ParameterError("bipartition needs a 2-uniform link");
    const int n = l.graph.n();
    std::vector<std::vector<int>> adj(static_cast<size_t>(n + 1));
    for (const auto& e : l.graph.edges()) {
        adj[static_cast<size_t>(e[0])].push_back(e[1]);
        adj[static_cast<size_t>(e[1])].push_back(e[0]);
    }
    std::vector<int> colour(static_cast<size_t>(n + 1), -1);
    for (int s : l.vertices) {
        if (colour[static_cast<size_t>(s)] >= 0) continue;
        colour[static_cast<size_t>(s)] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[static_cast<size_t>(u)]) {
                if (colour[static_cast<size_t>(v)] < 0) {
                    colour[static_cast<size_t>(v)] = 1 - colour[static_cast<size_t>(u)];
                    q.push(v);
                } else if (colour[static_cast<size_t>(v)] == colour[static_cast<size_t>(u)]) {
                    return std::nullopt;
                }
            }
        }
    }
    Bipartition sides;
    for (int v : l.vertices) (colour[static_cast<size_t>(v)] == 0 ? sides.first : sides.second).push_back(v);
    return sides;
}

int min_degree(const LinkGraph& l) {
    std::vector<int> deg(static_cast<size_t>(l.graph.n() + 1), 0);
    for (const auto& e : l.graph.edges())
        for (int v : e) ++deg[static_cast<size_t>(v)];
    int best = std::numeric_limits<int>::max();
    for (int v : l.vertices) best = std::min(best, deg[static_cast<size_t>(v)]);
    return l.vertices.empty() ? 0 : best;
}

std::vector<std::vector<std::vector<int>>> tight_components(const Hypergraph& h) {
    const auto& edges = h.edges();
    Dsu dsu(edges.size());
    std::map<std::vector<int>, int> first_holder;
    for (size_t i = 0; i < edges.size(); ++i) {
        for (size_t skip = 0; skip < edges[i].size(); ++skip) {
            std::vector<int> s;
            for (size_t j = 0; j < edges[i].size(); ++j)
                if (j != skip) s.push_back(edges[i][j]);
            auto [it, fresh] = first_holder.emplace(std::move(s), static_cast<int>(i));
            if (!fresh) dsu.unite(it->second, static_cast<int>(i));
        }
    }
    std::map<int, size_t> slot;
    std::vector<std::vector<std::vector<int>>> out;
    for (size_t i = 0; i < edges.size(); ++i) {
        int r = dsu.find(static_cast<int>(i));
        auto [it, fresh] = slot.emplace(r, out.size());
        if (fresh) out.emplace_back();
        out[it->second].push_back(edges[i]);
    }
    return out;
}

std::vector<std::vector<int>> trace(const std::vector<std::vector<int>>& component) {
    std::set<std::vector<int>> sets;
    for (const auto& e : component)
        for (size_t skip = 0; skip < e.size(); ++skip) {
            std::vector<int> s;
            for (size_t j = 0; j < e.size(); ++j)
                if (j != skip) s.push_back(e[j]);
            sets.insert(std::move(s));
        }
    return {sets.begin(), sets.end()};
}

namespace {

int intersection_size(const std::vector<int>& e, const std::vector<int>& sorted_b) {
    int c = 0;
    for (int v : e) c += std::binary_search(sorted_b.begin(), sorted_b.end(), v);
    return c;
}

bool size_ok(int n, int b) { return 3 * b >= n && 3 * b <= 2 * n; }

}  // namespace

bool partition_holds(const Hypergraph& h, const std::vector<int>& b) {
    std::vector<int> s = b;
    std::sort(s.begin(), s.end());
    if (!size_ok(h.n(), static_cast<int>(s.size()))) return false;
    for (const auto& e : h.edges()) {
        int c = intersection_size(e, s);
        if (c % 2 == 0 || (h.k() - c) % 2 == 0) return false;
    }
    return true;
}

PartitionResult find_structural_partition(const Hypergraph& h, int ell) {
    PartitionResult r;
    const int n = h.n();
    const int k = h.k();
    if (n >= k - 1 && k >= 2) {
        int delta = min_codegree(h).value;
        if (3 * delta <= n)
            r.warnings.push_back("minimum codegree " + std::to_string(delta) + " does not exceed n/3 = " +
                                 std::to_string(n) + "/3; the structural hypothesis fails");
    }
    if (ell > 0 && ell % k == 0) r.warnings.push_back("k divides ell; odd partitions are not guaranteed");
    if (ell > 0 && ell < 20 * k * k) r.warnings.push_back("ell is below 20k^2; conclusions are observations only");

    std::vector<int> edge;
    int u = 0, v = 0;
    for (const auto& e : h.edges()) {
        for (size_t a = 0; a < e.size() && !u; ++a)
            for (size_t b = a + 1; b < e.size() && !u; ++b)
                if (!is_exchangeable(h, e, e[a], e[b])) {
                    u = e[a];
                    v = e[b];
                }
        if (u) {
            edge = e;
            break;
        }
    }
    if (!u) {
        r.failure_stage = kStageNoPair;
        return r;
    }

    auto sides = is_complete_bipartite(auxiliary_graph(h, edge));
    if (!sides) {
        r.failure_stage = kStageAuxiliary;
        return r;
    }
    const std::vector<int>& eu = contains(sides->first, u) ? sides->first : sides->second;

    std::vector<int> a;
    for (int x : edge)
        if (x != u && x != v) a.push_back(x);
    LinkGraph link = link_graph(h, a);
    std::optional<Bipartition> link_sides;
    if (is_connected(link)) link_sides = bipartition(link);
    if (!link_sides) {
        r.failure_stage = kStageLink;
        return r;
    }
    const std::vector<int>& p = contains(link_sides->first, u) ? link_sides->first : link_sides->second;

    std::vector<int> b = eu;
    b.insert(b.end(), p.begin(), p.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());

    PartitionCertificate cert;
    cert.b = b;
    for (const auto& e : h.edges()) {
        int c = intersection_size(e, b);
        if (c % 2 == 0 || (k - c) % 2 == 0) {
            r.failure_stage = kStageParity;
            return r;
        }
        cert.per_edge_intersections.emplace_back(e, c);
    }
    if (!size_ok(n, static_cast<int>(b.size()))) {
        r.failure_stage = kStageSize;
        return r;
    }
    r.certificate = std::move(cert);
    return r;
}

WalkCertificate forming_good_walk(const Hypergraph& h, const std::vector<int>& e, const std::vector<int>& sigma, int i,
                                  int j, int w) {
    const int k = h.k();
    if (static_cast<int>(e.size()) != k || !h.is_edge(e)) throw ParameterError("ordered edge is not an edge");
    require_permutation(sigma, k);
    if (i == j || i < 1 || j < 1 || i > k || j > k) throw ParameterError("need two distinct positions in 1..k");
    const int vi = e[static_cast<size_t>(i - 1)];
    const int vj = e[static_cast<size_t>(j - 1)];
    if (contains(e, w) || !h.is_edge(replaced(e, vi, w)) || !h.is_edge(replaced(e, vj, w)))
        throw ParameterError("vertex " + std::to_string(w) + " does not witness exchangeability of " +
                             std::to_string(vi) + " and " + std::to_string(vj));

    std::vector<int> first(static_cast<size_t>(k));
    int pa = 0, pb = 0;
    for (int p = 0; p < k; ++p) {
        first[static_cast<size_t>(p)] = e[static_cast<size_t>(sigma[static_cast<size_t>(p)] - 1)];
        if (sigma[static_cast<size_t>(p)] == i) pa = p;
        if (sigma[static_cast<size_t>(p)] == j) pb = p;
    }
    const int lo = std::min(pa, pb);
    const int hi = std::max(pa, pb);
    std::vector<int> middle = first;
    middle[static_cast<size_t>(lo)] = w;
    middle[static_cast<size_t>(hi)] = first[static_cast<size_t>(lo)];
    std::vector<int> last = first;
    std::swap(last[static_cast<size_t>(lo)], last[static_cast<size_t>(hi)]);

    WalkCertificate walk;
    walk.kind = WalkKind::OpenWalk;
    walk.sequence = first;
    walk.sequence.insert(walk.sequence.end(), middle.begin(), middle.end());
    walk.sequence.insert(walk.sequence.end(), last.begin(), last.end());
    require_valid(walk, h);
    return walk;
}

namespace {

// Applies the vertex swap (a b) to the current arrangement pi, appending the
// corresponding walk.
void apply_swap(const Hypergraph& h, const std::vector<int>& e, std::vector<int>& pi, int a, int b, int w,
                std::vector<int>& seq) {
    auto step = forming_good_walk(h, e, pi, a, b, w);
    seq.insert(seq.end(), step.sequence.begin() + h.k(), step.sequence.end());
    for (int& x : pi) {
        if (x == a)
            x = b;
        else if (x == b)
            x = a;
    }
}

// Witness table for pairs of positions of e; 0 where not exchangeable.
std::vector<std::vector<int>> witness_table(const Hypergraph& h, const std::vector<int>& e) {
    const int k = h.k();
    std::vector<std::vector<int>> wit(static_cast<size_t>(k + 1), std::vector<int>(static_cast<size_t>(k + 1), 0));
    for (int a = 1; a <= k; ++a)
        for (int b = a + 1; b <= k; ++b)
            if (auto w = is_exchangeable(h, e, e[static_cast<size_t>(a - 1)], e[static_cast<size_t>(b - 1)]))
                wit[static_cast<size_t>(a)][static_cast<size_t>(b)] = wit[static_cast<size_t>(b)][static_cast<size_t>(a)] = *w;
    return wit;
}

std::vector<int> shortest_path(const std::vector<std::vector<int>>& wit, int from, int to) {
    const int k = static_cast<int>(wit.size()) - 1;
    std::vector<int> prev(static_cast<size_t>(k + 1), -1);
    std::queue<int> q;
    q.push(from);
    prev[static_cast<size_t>(from)] = from;
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        if (x == to) break;
        for (int y = 1; y <= k; ++y)
            if (wit[static_cast<size_t>(x)][static_cast<size_t>(y)] && prev[static_cast<size_t>(y)] < 0) {
                prev[static_cast<size_t>(y)] = x;
                q.push(y);
            }
    }
    if (prev[static_cast<size_t>(to)] < 0) return {};
    std::vector<int> path{to};
    while (path.back() != from) path.push_back(prev[static_cast<size_t>(path.back())]);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

std::optional<WalkCertificate> realize_permutation_walk(const Hypergraph& h, const std::vector<int>& e,
                                                        const std::vector<int>& sigma) {
    const int k = h.k();
    require_permutation(sigma, k);
    if (static_cast<int>(e.size()) != k || !h.is_edge(e)) return std::nullopt;
    auto wit = witness_table(h, e);

    std::vector<int> pi(static_cast<size_t>(k));
    std::iota(pi.begin(), pi.end(), 1);
    std::vector<int> seq = e;
    for (int p = 0; p < k; ++p) {
        int a = pi[static_cast<size_t>(p)];
        int b = sigma[static_cast<size_t>(p)];
        if (a == b) continue;
        auto path = shortest_path(wit, a, b);
        if (path.empty() || path.size() > 4) return std::nullopt;
        std::vector<std::pair<int, int>> swaps;
        if (path.size() == 2) {
            swaps = {{a, b}};
        } else if (path.size() == 3) {
            int x = path[1];
            swaps = {{a, x}, {x, b}, {a, x}};
        } else {
            int x = path[1], y = path[2];
            swaps = {{a, x}, {x, y}, {y, b}, {x, y}, {a, x}};
        }
        for (auto [s, t] : swaps) apply_swap(h, e, pi, s, t, wit[static_cast<size_t>(s)][static_cast<size_t>(t)], seq);
    }
    if (pi != sigma) throw ConsistencyError("transposition routing did not reach the target permutation");
    WalkCertificate walk{std::move(seq), WalkKind::OpenWalk, std::nullopt};
    require_valid(walk, h);
    return walk;
}

namespace {

// Exact-length closed walk inside the sub-hypergraph induced on the vertices
// a too-long walk already uses.
std::optional<WalkCertificate> close_within(const Hypergraph& h, const std::vector<int>& walk, int ell) {
    std::vector<int> used = walk;
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    auto local = [&](int v) { return static_cast<int>(std::lower_bound(used.begin(), used.end(), v) - used.begin()) + 1; };
    std::vector<std::vector<int>> edges;
    for (const auto& e : h.edges())
        if (std::all_of(e.begin(), e.end(), [&](int v) { return std::binary_search(used.begin(), used.end(), v); })) {
            std::vector<int> m;
            for (int v : e) m.push_back(local(v));
            edges.push_back(std::move(m));
        }
    Hypergraph sub(static_cast<int>(used.size()), h.k(), std::move(edges));
    auto found = has_hom_tight_cycle(sub, ell, 200'000);
    if (!found) return std::nullopt;
    for (int& v : found->sequence) v = used[static_cast<size_t>(v - 1)];
    require_valid(*found, h);
    return found;
}

}  // namespace

std::optional<WalkCertificate> build_cycle_certificate(const Hypergraph& h, int ell, const std::vector<int>& b) {
    const int k = h.k();
    if (ell <= k) throw ParameterError("cycle length must exceed k");
    if (ell % k == 0) throw ParameterError("k divides ell");
    std::vector<int> bs = b;
    std::sort(bs.begin(), bs.end());
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    const int t = ell % k;
    const int g = std::gcd(k, t);
    const int s = k / g;

    const std::vector<int>* chosen = nullptr;
    for (const auto& e : h.edges())
        if (intersection_size(e, bs) == s) {
            chosen = &e;
            break;
        }
    if (!chosen) throw ParameterError("no edge meets B in exactly " + std::to_string(s) + " vertices");

    // Vertices of B at the positions divisible by g.
    std::vector<int> inside, outside;
    for (int v : *chosen) (std::binary_search(bs.begin(), bs.end(), v) ? inside : outside).push_back(v);
    std::vector<int> e(static_cast<size_t>(k));
    for (int p = 1, bi = 0, oi = 0; p <= k; ++p)
        e[static_cast<size_t>(p - 1)] = p % g == 0 ? inside[static_cast<size_t>(bi++)] : outside[static_cast<size_t>(oi++)];

    std::vector<int> sigma(static_cast<size_t>(k));
    for (int p = 1; p <= k; ++p) sigma[static_cast<size_t>(p - 1)] = (p - 1 + k - t) % k + 1;

    auto wit = witness_table(h, e);
    std::vector<int> pi(static_cast<size_t>(k));
    std::iota(pi.begin(), pi.end(), 1);
    std::vector<int> seq = e;
    for (int p = 0; p < k; ++p) {
        int a = pi[static_cast<size_t>(p)];
        int c = sigma[static_cast<size_t>(p)];
        if (a == c) continue;
        int w = wit[static_cast<size_t>(a)][static_cast<size_t>(c)];
        if (!w) return std::nullopt;
        apply_swap(h, e, pi, a, c, w, seq);
    }
    for (int p = k - t; p < k; ++p) seq.push_back(e[static_cast<size_t>(p)]);

    // seq is now a closed walk from e to e whose length is t mod k. Cut
    // repeated ordered windows a multiple of k apart until it fits.
    auto length = [&]() { return static_cast<int>(seq.size()) - k; };
    while (length() > ell) {
        int best_p = -1, best_gap = 0;
        for (int p = 0; p <= length(); ++p)
            for (int q = length(); q > p + best_gap; --q) {
                if ((q - p) % k != 0) continue;
                if (std::equal(seq.begin() + p, seq.begin() + p + k, seq.begin() + q)) {
                    best_p = p;
                    best_gap = q - p;
                    break;
                }
            }
        if (best_p < 0 || best_gap >= length()) return close_within(h, seq, ell);
        seq.erase(seq.begin() + best_p, seq.begin() + best_p + best_gap);
    }
    while (length() < ell) seq.insert(seq.end(), e.begin(), e.end());
    seq.resize(static_cast<size_t>(ell));
    WalkCertificate cycle{std::move(seq), WalkKind::Cycle, std::nullopt};
    require_valid(cycle, h);
    return cycle;
}

}  // namespace kld
