#pragma once

#include <cstdint>
#include <optional>

#include "designs/divisibility.hpp"
#include "designs/hypergraph.hpp"

namespace designs {

// Vertices of the design hypergraph are the edge instances of the base
// graph; hyperedges are the q-cliques (q-sets whose every r-subset is a
// support of the base).
struct DesignHypergraph {
    std::vector<std::vector<VertexId>> clique_nodes;
    std::map<Iid, std::vector<std::size_t>> incidence;
};

DesignHypergraph design_hypergraph(const MultiHypergraph& g, int q);

struct Decomposition {
    std::vector<std::vector<VertexId>> cliques;
    std::map<Iid, std::size_t> assignment;  // instance -> clique index
};

enum class SolveStatus { Found, Infeasible, Indeterminate };

struct SolveResult {
    SolveStatus status = SolveStatus::Indeterminate;
    std::optional<Decomposition> decomposition;
    std::uint64_t nodes_used = 0;
    std::optional<DivisibilityReport> divisibility;  // set when pre-screen failed
};

constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

// Exact cover of all edge instances by q-cliques.  Parallel instances are
// distinct cover items; a clique covers at most one instance per support.
// Search is deterministic: minimum-remaining-candidates column choice, ties
// by lowest instance id, non-decreasing row order within a column.
SolveResult find_decomposition(const MultiHypergraph& g, int q,
                               std::uint64_t node_budget = kDefaultNodeBudget);

struct CountResult {
    std::uint64_t count = 0;
    bool lower_bound_only = false;  // cap or budget reached
    std::uint64_t nodes_used = 0;
};

CountResult count_decompositions(const MultiHypergraph& g, int q, std::uint64_t cap,
                                 std::uint64_t node_budget = kDefaultNodeBudget);

// Pairwise edge-disjoint cliques covering every required instance, using
// only instances of g.
SolveResult find_packing_covering(const MultiHypergraph& g, int q, const IidSet& required,
                                  std::uint64_t node_budget = kDefaultNodeBudget);

// Partition-exactness of d over target plus clique validity of every block.
bool verify_decomposition(const MultiHypergraph& g, int q, const Decomposition& d,
                          const IidSet& target);

}  // namespace designs
