#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kld/hypergraph.hpp"
#include "kld/walk.hpp"

namespace kld {

// Smallest w outside e such that e - u + w and e - v + w are both edges.
std::optional<int> is_exchangeable(const Hypergraph& h, const std::vector<int>& e, int u, int v);

struct AuxiliaryGraph {
    std::vector<int> edge;  // sorted
    std::vector<std::pair<int, int>> non_exchangeable_pairs;
};

AuxiliaryGraph auxiliary_graph(const Hypergraph& h, const std::vector<int>& e);

using Bipartition = std::pair<std::vector<int>, std::vector<int>>;

// The two sides when the non-exchangeable pairs form a complete bipartite
// graph spanning the edge; the side holding the smallest vertex comes first,
// and the second side is empty when there are no pairs at all.
std::optional<Bipartition> is_complete_bipartite(const AuxiliaryGraph& g);

struct LinkGraph {
    std::vector<int> vertices;  // V minus A
    Hypergraph graph;           // (k - |A|)-uniform, original vertex ids
};

LinkGraph link_graph(const Hypergraph& h, const std::vector<int>& a);

bool is_connected(const LinkGraph& l);
// Only meaningful for 2-uniform links. Components are two-coloured starting
// from their smallest vertex; the first side holds colour 0.
std::optional<Bipartition> bipartition(const LinkGraph& l);
int min_degree(const LinkGraph& l);

// Classes of edges under "share k - 1 vertices", each listed in edge order,
// ordered by first edge.
std::vector<std::vector<std::vector<int>>> tight_components(const Hypergraph& h);

// All (k-1)-subsets of edges in the component, sorted.
std::vector<std::vector<int>> trace(const std::vector<std::vector<int>>& component);

struct PartitionCertificate {
    std::vector<int> b;  // sorted
    std::vector<std::pair<std::vector<int>, int>> per_edge_intersections;
};

struct PartitionResult {
    std::optional<PartitionCertificate> certificate;
    std::string failure_stage;  // empty on success
    std::vector<std::string> warnings;
};

inline constexpr const char* kStageNoPair = "no non-exchangeable pair";
inline constexpr const char* kStageAuxiliary = "auxiliary graph not complete bipartite";
inline constexpr const char* kStageLink = "link not connected-bipartite";
inline constexpr const char* kStageParity = "global parity violated";
inline constexpr const char* kStageSize = "size bounds violated";

PartitionResult find_structural_partition(const Hypergraph& h, int ell = 0);

// Checks the odd-intersection conclusion and the size bounds for a given B.
bool partition_holds(const Hypergraph& h, const std::vector<int>& b);

// e is an ordered edge (v_1..v_k); sigma is a permutation of 1..k acting by
// sigma(e) = (v_sigma(1), ..., v_sigma(k)). Returns the 3k-vertex walk from
// sigma(e) to ((i j) o sigma)(e) through w.
WalkCertificate forming_good_walk(const Hypergraph& h, const std::vector<int>& e, const std::vector<int>& sigma, int i,
                                  int j, int w);

// A walk from e to sigma(e) built from swaps of exchangeable vertices, each
// non-exchangeable swap routed along a path of length at most 3.
std::optional<WalkCertificate> realize_permutation_walk(const Hypergraph& h, const std::vector<int>& e,
                                                        const std::vector<int>& sigma);

// A homomorphic tight cycle of length ell assembled from an edge meeting b in
// exactly k / gcd(k, ell) vertices.
std::optional<WalkCertificate> build_cycle_certificate(const Hypergraph& h, int ell, const std::vector<int>& b);

}  // namespace kld
