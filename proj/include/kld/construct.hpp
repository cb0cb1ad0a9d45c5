#pragma once

#include <map>

#include "kld/family.hpp"

namespace kld {

struct ReplacementPlan {
    TypeList problematic;
    std::map<TypeTuple, TypeList> replacements;
    std::map<TypeTuple, int> chosen_alpha;  // 1-based zero index used per problematic tuple
};

struct ReplacementSet {
    TypeList types;
    int alpha = 0;
};

struct ConstructedFamily {
    TypeFamily family;
    ReplacementPlan plan;
};

struct StableConstruction {
    TypeFamily family;
    int alpha = 0;
    TypeList forbidden;  // Perm(k,0,0) and Perm(alpha,k-alpha,0)
    ReplacementPlan plan;
};

// Tuples of T_d^k with sum_j j*x_j = 1 (mod d). Carries ell through unchanged.
TypeFamily base_family(int k, int d, int ell = 0);

TypeFamily hls_family(int k, int ell);

// Uses the largest zero coordinate of x as alpha.
ReplacementSet replacement_set(const TypeTuple& x);

ConstructedFamily local_replacement_family(int k, int ell);

// Throws ParameterError naming the first violated congruence.
void check_stable_hypotheses(int k, int ell);

StableConstruction stable_construction(int k, int ell);

inline TypeFamily stable_family(int k, int ell) { return stable_construction(k, ell).family; }

}  // namespace kld
