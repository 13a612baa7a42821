#pragma once

#include <functional>

#include "designs/hypergraph.hpp"

namespace designs {

// Robustly matchable q-uniform hypergraph on positions 1..(q+1)m.  The
// input vertices sit at positions (q+1)i; for every subset L of them a
// closed-form matching covers (L ∪ R) \ X' within L ∪ R, where R is the
// complement of the inputs and X' the first q-1 positions.
struct RmhInstance {
    int q = 0;
    int m = 0;
    std::vector<int> x_positions;       // (q+1)*i for i in [1, m]
    std::vector<int> xprime_positions;  // 1..q-1 (empty when m == 0)
    std::vector<std::vector<int>> edges;  // sorted position q-sets, deduplicated

    int vertex_count() const { return (q + 1) * m; }
    bool is_input(int pos) const { return pos % (q + 1) == 0; }
};

RmhInstance build_rmh(int q, int m);

// Matching M_L for L given as a sorted list of input positions.  Every
// returned block is an edge of the instance; blocks are pairwise disjoint
// and (L ∪ R) \ X' ⊆ V(M_L) ⊆ L ∪ R.  Throws Error if the block formula
// ever produces a non-edge (must never happen; exercised in tests).
std::vector<std::vector<int>> rmh_matching(const RmhInstance& inst,
                                           const std::vector<int>& l_positions);

// Brute force over all 2^m subsets L; m capped because of the exponent.
bool verify_rmh(const RmhInstance& inst, int m_cap = 14);

long long rmh_max_degree(const RmhInstance& inst);

}  // namespace designs
