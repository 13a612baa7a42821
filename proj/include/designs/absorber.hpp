#pragma once

#include <cstdint>
#include <optional>

#include "designs/exact_cover.hpp"
#include "designs/hypergraph.hpp"

namespace designs {

// An absorber for l: vertex set of l independent in the added edges, and
// both a and l ∪ a carry clique-decomposition certificates.
struct Absorber {
    MultiHypergraph world;  // l ∪ a; new vertices appended after l's universe
    IidSet l_iids, a_iids;
    int l_vertex_count = 0;
    int new_vertex_count = 0;
    Decomposition q1;  // decomposes a
    Decomposition q2;  // decomposes l ∪ a
};

enum class AbsorberStatus { Found, Indeterminate };

struct AbsorberResult {
    AbsorberStatus status = AbsorberStatus::Indeterminate;
    std::optional<Absorber> absorber;
    std::uint64_t nodes_used = 0;
};

struct AbsorberConfig {
    int vertex_budget = 96;
    std::uint64_t node_budget = 2'000'000;
    std::uint64_t trivial_node_budget = 200'000;
};

// Requires l divisible (throws otherwise).  Tries, in order: the empty
// absorber (l itself decomposable), a closed-trail construction specific to
// triangle decompositions of simple graphs, and a bounded paired exact-cover
// search with iterative deepening over the number of new vertices.
AbsorberResult search_absorber(const MultiHypergraph& l, int q, const AbsorberConfig& cfg = {});

// Composition producing a decomposition of l ∪ a in which every block meets
// V(l) in at most r vertices, with equality only on edge supports of l.
AbsorberResult better_absorber(const MultiHypergraph& l, int q, const AbsorberConfig& cfg = {});

// Certificates valid, V(l) independent in a, universes consistent.
bool audit_absorber(const Absorber& a, int q);

// The block-intersection property delivered by better_absorber.
bool audit_block_intersections(const Absorber& a, int q);

}  // namespace designs
