#pragma once

#include <optional>

#include "designs/hypergraph.hpp"

namespace designs {

struct DivisibilityViolation {
    int subset_size = 0;
    std::vector<VertexId> subset;
    long long degree = 0;
    long long modulus = 0;
};

struct DivisibilityReport {
    bool divisible = true;
    std::optional<DivisibilityViolation> first_violation;
};

// Exact binomial coefficient; q capped at 64 so everything fits in long long.
long long binomial(int n, int k);

// lcm of binomial(q-i, r-i) over i in [0, r).
long long modulus_m(int q, int r);

// Checks binomial(q-i, r-i) | degree(S) for all i-sets S, i in [0, r).
// Only i-sets inside some edge are enumerated (others have degree 0); the
// first violation in (i, S)-lexicographic order is reported.
DivisibilityReport is_divisible(const MultiHypergraph& g, int q);

// Link of a divisible graph must be divisible with both parameters reduced
// by |S|; used as a cross-check oracle.
DivisibilityReport check_link_divisibility(const MultiHypergraph& l, int q,
                                           const std::vector<VertexId>& s);

}  // namespace designs
