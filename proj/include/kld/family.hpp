#pragma once

#include <optional>
#include <vector>

#include "kld/lattice.hpp"

namespace kld {

struct DerivedParameters {
    int g = 0;  // gcd(k, ell)
    int q = 0;  // k / g
    int p = 0;  // smallest prime factor of q
    int t = 0;  // smallest odd integer >= max(3, g)
};

DerivedParameters derived_parameters(int k, int ell);

int smallest_prime_factor(int n);

struct TypeFamily {
    int k = 0;
    int ell = 0;
    int d = 0;
    TypeList types;  // canonical order, no duplicates

    bool contains(const TypeTuple& x) const;
};

// Builds a family, sorting the tuples and checking that each lies in T_d^k.
TypeFamily make_family(int k, int ell, int d, TypeList types);

struct ComponentCertificate {
    TypeList component;
    std::vector<int> index_set;  // 1-based coordinates
    int value = 0;
};

struct ExtensionResult {
    bool pass = false;
    std::optional<TypeTuple> witness;
};

struct VerificationReport {
    bool p1 = false;
    std::optional<TypeTuple> p1_witness;
    bool p2 = false;
    std::optional<TypeList> p2_witness;
    std::vector<ComponentCertificate> certificates;

    bool pass() const { return p1 && p2; }
};

struct StabilityReport {
    bool pass = false;
    std::optional<TypeList> witness;
    std::vector<ComponentCertificate> certificates;
};

// Nonempty subsets of 1..d, by size and then lexicographically.
std::vector<std::vector<int>> index_sets_in_order(int d);

int index_sum(const TypeTuple& x, const std::vector<int>& index_set);

ExtensionResult check_extension_property(const TypeFamily& f);

std::optional<ComponentCertificate> find_component_invariant(const TypeList& component, int d, int q);

VerificationReport verify_family(const TypeFamily& f);

StabilityReport check_stability(const TypeFamily& f);

// Independent re-check of a certificate: constant index sum and q not dividing it.
bool certificate_holds(const ComponentCertificate& c, int q);

}  // namespace kld
