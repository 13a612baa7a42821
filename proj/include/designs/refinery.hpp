#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "designs/absorber.hpp"
#include "designs/hypergraph.hpp"
#include "designs/rmh.hpp"

namespace designs {

// A refiner of x: edge-disjoint r, a family of bounded divisible members of
// x ∪ r with at most one x-instance each, and a refinement function mapping
// every divisible subgraph l of x to pairwise disjoint members covering
// (l ∪ r) \ remainder inside l ∪ r.
struct Refiner {
    MultiHypergraph world;  // exactly x ∪ r
    IidSet x, r;
    std::vector<IidSet> family;
    IidSet remainder;  // subset of x ∪ r (possibly empty)
    double refined_bound = 0;
    std::function<std::vector<std::size_t>(const IidSet&)> refine;
    std::vector<std::string> warnings;  // soft audit notes
};

// Same shape with empty remainder and every member a clique; the chosen
// members partition l ∪ a exactly.
struct OmniAbsorber {
    MultiHypergraph world;  // exactly x ∪ a
    IidSet x, a;
    std::vector<IidSet> family;
    double refined_bound = 0;
    std::function<std::vector<std::size_t>(const IidSet&)> decompose;
    std::vector<std::string> warnings;
};

struct VerifyOptions {
    std::size_t exhaustive_cap = 16;  // e(x) above this switches to sampling
    int samples = 200;
    std::uint64_t seed = 1;
};

struct VerifyOutcome {
    bool ok = true;
    std::string message;
    IidSet witness;  // failing l, when any
};

VerifyOutcome verify_refiner(const Refiner& rf, int q, const VerifyOptions& opts = {});
VerifyOutcome verify_omni_absorber(const OmniAbsorber& oa, int q, const VerifyOptions& opts = {});

// Refinement degrees of the family.
long long refinement_degree(const MultiHypergraph& world, const std::vector<IidSet>& family,
                            const std::vector<VertexId>& s);
long long family_max_degree(const MultiHypergraph& world, const std::vector<IidSet>& family);

// Largest per-instance family membership (the refinedness counter).
long long family_edge_membership(const MultiHypergraph& world,
                                 const std::vector<IidSet>& family);

// Divisible-subgraph enumeration (popcount-then-lex order) and sampling.
std::vector<IidSet> divisible_subsets(const MultiHypergraph& world, const IidSet& x, int q,
                                      std::size_t cap);
std::vector<IidSet> sample_divisible_subsets(const MultiHypergraph& world, const IidSet& x,
                                             int q, int count, std::uint64_t seed);

// --- constructions ---------------------------------------------------------

// Serial composition: r2 refines r1's remainder; the composed refinement
// function feeds r1's leftover into r2.
Refiner concat(const Refiner& r1, const Refiner& r2);

// Per-support multiplicity reduction: m(q,r) parallel instances per input
// instance, robust matchings per support, remainder of multiplicity
// m(q,r)-1.  2*m(q,r)-refined.
Refiner multiplicity_reduction(const MultiHypergraph& x, int q);

// 1-uniform omni-absorber: robust matching layer whose fresh singletons are
// embedded injectively into y, avoiding co-edge collisions.
OmniAbsorber build_singleton_omni(const MultiHypergraph& x, int q,
                                  const std::vector<VertexId>& y);

struct PartitionResult {
    std::vector<std::vector<VertexId>> parts;
    bool precondition_ok = true;
    int attempts = 0;
    long long worst_part_size = 0;
    long long worst_link_load = 0;
};

// Random equipartition with per-part and per-link load guarantees verified
// by recomputation; resampled until the bounds hold.
PartitionResult quasirandom_partition(const MultiHypergraph& x, int k, std::uint64_t seed,
                                      int retries);

// q-bounded hypergraph for the independent-set scan.
struct BoundedHypergraph {
    int n = 0;
    std::vector<std::vector<VertexId>> edges;  // sizes in [1, q]
};

struct TuranResult {
    std::optional<std::vector<VertexId>> qset;
    double alpha = 0;  // density certificate; a free q-set must exist below 1
};

TuranResult turan_free_qset(const BoundedHypergraph& z, int q);

struct SpecialSetsConfig {
    double c = 64;
};

// One (q-r)-set per r-multi-subset of part indices, inside y and away from
// the named parts, pairwise intersections <= r-2, with load caps.
std::map<std::vector<int>, std::vector<VertexId>> special_sets(
    const MultiHypergraph& x, const std::vector<std::vector<VertexId>>& parts,
    const std::vector<VertexId>& y, int q, const SpecialSetsConfig& cfg = {});

struct RefineryConfig {
    double c = 64;
    int terminal_support = 40;        // remainder support size for the terminal family
    std::size_t terminal_edge_cap = 16;
    std::size_t divisible_enum_cap = 1u << 20;
    std::uint64_t seed = 1;
    int retries = 100;
    int k_divisor = 0;                // 0: k = floor(sqrt(v)); else v^{1-1/r}/k_divisor
    AbsorberConfig absorber;
};

// Private clique completions focused through special sets, then
// multiplicity reduction; remainder degree shrinks.
Refiner edge_sparsify(const MultiHypergraph& x, const std::vector<VertexId>& y, int q,
                      const RefineryConfig& cfg = {});

// Local refiner of a star at s (r = 2): lifts a 1-uniform omni-absorber of
// the link and completes its members to cliques via parallel stacks.
Refiner local_refiner_r2(const MultiHypergraph& x, VertexId s,
                         const std::vector<VertexId>& embed_verts, int q,
                         const RefineryConfig& cfg = {});

// Local refiners are contracts over the link: every l whose link at s is
// divisible must refine.  Exhaustive check.
VerifyOutcome verify_local_refiner(const Refiner& rf, VertexId s, int q,
                                   const VerifyOptions& opts = {});

// Two-step vortex refinement (r = 2) pushing the remainder inside y, then
// multiplicity normalization.
Refiner refine_down_r2(const MultiHypergraph& x, const std::vector<VertexId>& y, int q,
                       const RefineryConfig& cfg = {});

// Full multi-refiner: refine down until the remainder support is small, then
// the explicit terminal family (parallel stacks plus the divisible-subgraph
// members).
Refiner build_multi_refiner(const MultiHypergraph& x, const std::vector<VertexId>& y, int q,
                            const RefineryConfig& cfg = {});

// Replace every multi-instance of the refiner by a divisibility gadget
// embedded in an edge-disjoint partial clique of the host; members map
// through and stay divisible.
Refiner substitute_fake_edges(const MultiHypergraph& host, const IidSet& x_iids,
                              const Refiner& multi, int q, const RefineryConfig& cfg = {});

// Omni-absorber for a simple x inside a dense host (r = 2, q = 3): per-edge
// completion and presence gadgets, per-member private absorbers embedded
// through partial cliques, decomposition table over all divisible subsets.
OmniAbsorber build_omni_absorber(const MultiHypergraph& host, const IidSet& x_iids, int q,
                                 const RefineryConfig& cfg = {});

}  // namespace designs
