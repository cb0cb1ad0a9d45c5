#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace kld {

// A point of the lattice T_d^k: d non-negative counts summing to k.
struct TypeTuple {
    std::vector<int> coords;

    TypeTuple() = default;
    explicit TypeTuple(std::vector<int> c) : coords(std::move(c)) {}
    TypeTuple(std::initializer_list<int> c) : coords(c) {}

    int dim() const { return static_cast<int>(coords.size()); }
    int total() const;
    int operator[](int i) const { return coords[static_cast<size_t>(i)]; }
    int& operator[](int i) { return coords[static_cast<size_t>(i)]; }

    auto operator<=>(const TypeTuple&) const = default;
    bool operator==(const TypeTuple&) const = default;

    std::string str() const;
};

// Canonical order used everywhere: lexicographically descending coordinates.
struct CanonicalLess {
    bool operator()(const TypeTuple& a, const TypeTuple& b) const { return a.coords > b.coords; }
};

using TypeList = std::vector<TypeTuple>;

void sort_canonical(TypeList& types);

// All of T_d^k in canonical order.
TypeList enumerate_types(int k, int d);

std::uint64_t binomial(int n, int r);
std::uint64_t lattice_size(int k, int d);

bool are_adjacent(const TypeTuple& x, const TypeTuple& y);

// Every tuple of the form x - e_i + e_j (i != j) with non-negative coordinates,
// in canonical order.
TypeList lattice_neighbors(const TypeTuple& x);

// Maximal adjacency-connected subsets, each sorted canonically, ordered by
// their first member.
std::vector<TypeList> connected_components(const TypeList& types);

// Type of a concrete edge. labels[v] is the part (1..d) of vertex v; index 0
// is unused, and a label of 0 means "unlabeled".
TypeTuple edge_type(const std::vector<int>& edge, const std::vector<int>& labels, int d);

// Position of a tuple within enumerate_types(total, d), computed in O(d).
// Works for any total up to max_total.
class RankTable {
public:
    RankTable(int max_total, int d);

    int d() const { return d_; }
    std::uint64_t count(int total) const { return compositions(total, d_); }
    std::uint64_t rank(const int* coords) const;
    std::uint64_t rank(const TypeTuple& x) const { return rank(x.coords.data()); }
    TypeTuple unrank(std::uint64_t r, int total) const;

private:
    std::uint64_t compositions(int total, int parts) const;

    int max_total_;
    int d_;
    std::vector<std::vector<std::uint64_t>> table_;  // table_[parts][total]
};

// Dense index of a lattice: position of each tuple in enumerate_types(k, d).
class TypeIndex {
public:
    TypeIndex(int k, int d);

    int k() const { return k_; }
    int d() const { return d_; }
    int size() const { return static_cast<int>(types_.size()); }
    const TypeList& types() const { return types_; }
    const TypeTuple& at(int i) const { return types_[static_cast<size_t>(i)]; }
    const RankTable& ranks() const { return ranks_; }
    // -1 when the tuple is not in the lattice.
    int find(const TypeTuple& x) const;

private:
    int k_;
    int d_;
    TypeList types_;
    RankTable ranks_;
};

}  // namespace kld
