#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "kld/family.hpp"
#include "kld/walk.hpp"

namespace kld {

// A k-uniform hypergraph on vertices 1..n. Edges are stored sorted, each as an
// ascending vertex list. An optional partition gives every vertex a part label.
class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(int n, int k, std::vector<std::vector<int>> edges, std::vector<int> labels = {}, int d = 0);

    int n() const { return n_; }
    int k() const { return k_; }
    int d() const { return d_; }
    const std::vector<std::vector<int>>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }
    bool has_partition() const { return !labels_.empty(); }
    // labels()[v] is the part of vertex v; index 0 unused.
    const std::vector<int>& labels() const { return labels_; }
    std::vector<int> part_sizes() const;

    // Expects an ascending list of k vertices.
    bool has_edge(const std::vector<int>& sorted_edge) const;
    // Any order; false when vertices repeat.
    bool is_edge(std::vector<int> vertices) const;

private:
    std::uint64_t rank(const std::vector<int>& sorted_edge) const;

    int n_ = 0;
    int k_ = 0;
    int d_ = 0;
    std::vector<std::vector<int>> edges_;
    std::vector<int> labels_;
    std::vector<std::vector<std::uint64_t>> choose_;
    std::unordered_set<std::uint64_t> index_;
};

std::vector<int> nearly_equal_sizes(int n, int d);

Hypergraph blow_up(const TypeFamily& f, const std::vector<int>& part_sizes,
                   std::size_t edge_cap = 20'000'000);

Hypergraph complete_hypergraph(int n, int k);

struct CodegreeResult {
    int value = 0;
    std::vector<int> witness;  // a (k-1)-set attaining the minimum
};

CodegreeResult min_codegree(const Hypergraph& h);

// Minimum codegree of blow_up(f, sizes) computed from types alone, without
// building the hypergraph.
CodegreeResult blowup_min_codegree(const TypeFamily& f, const std::vector<int>& part_sizes);

WindowPredicate label_window_predicate(const TypeFamily& f);
WindowPredicate edge_window_predicate(const Hypergraph& h);

// Label level. Windows of a cyclic label sequence that all lie in the family
// have types inside a single component, so each component is searched on its
// own: singleton components reduce to assigning labels to the classes of
// positions forced equal, larger ones are searched position by position.
std::optional<WalkCertificate> has_type_cycle(const TypeFamily& f, int ell);
std::optional<WalkCertificate> has_type_cycle_minus(const TypeFamily& f, int ell);

// Label level by exact-length closed walks on all d^(k-1) label states.
// Independent of the component reasoning above; throws CapacityError beyond
// state_cap states.
std::optional<WalkCertificate> type_cycle_by_states(const TypeFamily& f, int ell, bool minus,
                                                    std::size_t state_cap = 200'000);

// Vertex level, on the consecution digraph of ordered (k-1)-tuples of
// distinct vertices.
std::optional<WalkCertificate> has_hom_tight_cycle(const Hypergraph& h, int ell, std::size_t state_cap = 5000);
std::optional<WalkCertificate> has_hom_tight_cycle_minus(const Hypergraph& h, int ell,
                                                         std::size_t state_cap = 5000);

}  // namespace kld
