#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kld/family.hpp"

namespace kld {

enum class SearchMode { Enumerate, Exists };
enum class SearchStatus { Complete, Incomplete };

std::string to_string(SearchMode mode);
std::string to_string(SearchStatus status);

// Every subset satisfying P1 and P2 is counted; no symmetry quotient and no
// maximality condition.
inline constexpr const char* kCountingConvention = "all-subsets";

// Pruning rules of the depth-first search. The leaf check always runs, so any
// combination gives the same answer; switching rules off only costs time.
struct PruneOptions {
    bool p1 = true;                   // a (k-1)-tuple lost all its possible covers
    bool complete_components = true;  // a closed component has no invariant
    bool partial_components = true;   // included tuples already admit no invariant
    bool propagate = true;            // force tuples implied by the two rules above
};

struct SearchBudget {
    std::uint64_t max_nodes = 0;  // 0 means unlimited
    double max_seconds = 0;       // 0 means unlimited
};

struct SearchOptions {
    PruneOptions prune;
    SearchBudget budget;
    int workers = 1;
    // Number of branching decisions fixed per task; -1 picks a default.
    int split_depth = -1;
    std::string checkpoint_path;  // empty disables checkpointing
    bool resume = false;
    // Enumerate mode: keep up to this many families in the result.
    std::size_t keep_families = 0;
};

struct SearchResult {
    SearchMode mode = SearchMode::Enumerate;
    SearchStatus status = SearchStatus::Complete;
    std::uint64_t count = 0;
    std::optional<TypeFamily> example;
    std::vector<TypeFamily> families;
    std::uint64_t explored_nodes = 0;
    double elapsed_seconds = 0;
    std::string convention = kCountingConvention;
    std::size_t tasks_total = 0;
    std::size_t tasks_done = 0;

    bool complete() const { return status == SearchStatus::Complete; }
};

// Tests every subset of T_d^k. Needs at most 25 lattice points.
SearchResult brute_force_enumerate(int k, int ell, int d, std::size_t keep_families = 0);

SearchResult dfs_enumerate(int k, int ell, int d, const SearchOptions& options = {});
SearchResult dfs_exists(int k, int ell, int d, const SearchOptions& options = {});

}  // namespace kld
