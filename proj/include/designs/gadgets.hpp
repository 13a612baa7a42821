#pragma once

#include <cstdint>

#include "designs/hypergraph.hpp"

namespace designs {

enum class GadgetKind { AntiEdge, FakeEdge, PartialClique };

// A rooted vertex gadget.  The edge graph lives on the root's universe
// extended by new_verts; for anti/fake edges the degree of every subset of
// the root is congruent to -1/+1 modulo the corresponding divisibility
// modulus.
struct Gadget {
    GadgetKind kind = GadgetKind::AntiEdge;
    std::vector<VertexId> root;
    std::vector<VertexId> new_verts;
    MultiHypergraph edges;
};

// binom(S ∪ new, r) minus S itself, on q-r new vertices.
Gadget anti_edge(const std::vector<VertexId>& root, int q, int universe_n);

// One layer of q-r hub vertices plus an anti-edge on every non-root
// r-subset of root ∪ hubs, each with its own new vertices.
Gadget fake_edge(const std::vector<VertexId>& root, int q, int universe_n);

// Degree congruences d(S') ≡ -1 (anti) / +1 (fake) for every S' ⊆ root.
bool check_gadget_congruences(const Gadget& g, int q);

// M(q,r) vertex-fresh copies over the same root form a divisible graph.
bool m_copies_divisible(GadgetKind kind, const std::vector<VertexId>& root, int q,
                        int universe_n);

// --- edge-disjoint rooted partial cliques ----------------------------------

struct EmbedRequest {
    std::vector<VertexId> root;  // r <= |root| <= config.max_root
    int extra_verts = 0;         // block spans root plus this many new vertices
};

struct EmbeddedBlock {
    std::vector<VertexId> root;
    std::vector<VertexId> new_verts;
    IidSet edges;  // host instances: binom(root ∪ new, r) \ binom(root, r)
};

struct EmbedConfig {
    double c = 64;        // audit constant for the total-degree bound
    int max_root = 24;
    long long counter_cap_override = 0;  // 0 = derive from c
    int preference_offset = 0;           // rotates the candidate ordering
};

struct EmbeddingPlan {
    std::vector<EmbeddedBlock> blocks;
    IidSet total_edges;
    long long total_max_degree = 0;   // Δ of the union of blocks
    long long request_max_degree = 0; // Δ_{r-1} of the request multiset
};

// Deterministic greedy embedding of pairwise edge-disjoint partial cliques
// into host, one per request, rooted as requested, using only instances in
// `available`.  Candidate vertex sets are scanned in lexicographic order
// subject to per-(root-subset, new-subset) load counters; the final degree
// bound Δ(T) <= c * Δ_{r-1}(requests) is asserted.  Throws EmbeddingFailure
// naming the first request that cannot be placed.
EmbeddingPlan embed_partial_cliques(const MultiHypergraph& host, const IidSet& available,
                                    const std::vector<EmbedRequest>& requests,
                                    const EmbedConfig& config = {});

}  // namespace designs
