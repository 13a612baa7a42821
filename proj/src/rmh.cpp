#include "designs/rmh.hpp"

#include <algorithm>
#include <set>

namespace designs {

RmhInstance build_rmh(int q, int m) {
    if (q < 1 || m < 0) throw Error("build_rmh requires q >= 1, m >= 0");
    RmhInstance inst;
    inst.q = q;
    inst.m = m;
    if (m == 0) return inst;
    for (int i = 1; i <= m; ++i) inst.x_positions.push_back((q + 1) * i);
    for (int i = 1; i <= q - 1; ++i) inst.xprime_positions.push_back(i);

    const int v = (q + 1) * m;
    std::set<std::vector<int>> edges;
    // q consecutive positions
    for (int i = 1; i + q - 1 <= v; ++i) {
        std::vector<int> e;
        for (int j = 0; j < q; ++j) e.push_back(i + j);
        edges.insert(std::move(e));
    }
    // q+1 consecutive positions minus the one divisible by q+1
    for (int i = 1; i + q <= v; ++i) {
        if (i % (q + 1) == 0) continue;
        std::vector<int> e;
        for (int j = 0; j <= q; ++j)
            if ((i + j) % (q + 1) != 0) e.push_back(i + j);
        edges.insert(std::move(e));
    }
    inst.edges.assign(edges.begin(), edges.end());
    return inst;
}

std::vector<std::vector<int>> rmh_matching(const RmhInstance& inst,
                                           const std::vector<int>& l_positions) {
    for (int pos : l_positions)
        if (!inst.is_input(pos) || pos < 1 || pos > inst.vertex_count())
            throw Error("rmh_matching: L must consist of input positions");

    // L ∪ R sorted ascending.
    std::vector<int> pool;
    for (int pos = 1; pos <= inst.vertex_count(); ++pos)
        if (!inst.is_input(pos)) pool.push_back(pos);
    pool.insert(pool.end(), l_positions.begin(), l_positions.end());
    std::sort(pool.begin(), pool.end());

    const int n = static_cast<int>(pool.size());
    const int q = inst.q;
    std::vector<std::vector<int>> matching;
    for (int i = 0; q * (i + 1) <= n; ++i) {
        std::vector<int> block;
        for (int j = 0; j < q; ++j) block.push_back(pool[n - 1 - q * i - j]);
        std::sort(block.begin(), block.end());
        if (!std::binary_search(inst.edges.begin(), inst.edges.end(), block))
            throw Error("rmh_matching: block formula produced a non-edge");
        matching.push_back(std::move(block));
    }
    return matching;
}

bool verify_rmh(const RmhInstance& inst, int m_cap) {
    if (inst.m > m_cap) throw Error("verify_rmh: m exceeds brute-force cap");
    const int m = inst.m;
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
        std::vector<int> l;
        for (int i = 0; i < m; ++i)
            if (mask & (1ULL << i)) l.push_back(inst.x_positions[i]);
        std::vector<std::vector<int>> matching;
        try {
            matching = rmh_matching(inst, l);
        } catch (const Error&) {
            return false;
        }
        // pairwise disjoint
        std::set<int> seen;
        for (const auto& block : matching)
            for (int pos : block)
                if (!seen.insert(pos).second) return false;
        // V(M_L) ⊆ L ∪ R
        std::set<int> allowed(l.begin(), l.end());
        for (int pos = 1; pos <= inst.vertex_count(); ++pos)
            if (!inst.is_input(pos)) allowed.insert(pos);
        for (int pos : seen)
            if (!allowed.count(pos)) return false;
        // (L ∪ R) \ X' ⊆ V(M_L)
        std::set<int> xprime(inst.xprime_positions.begin(), inst.xprime_positions.end());
        for (int pos : allowed)
            if (!xprime.count(pos) && !seen.count(pos)) return false;
    }
    return true;
}

long long rmh_max_degree(const RmhInstance& inst) {
    std::map<int, long long> deg;
    for (const auto& e : inst.edges)
        for (int pos : e) ++deg[pos];
    long long best = 0;
    for (auto& [_, d] : deg) best = std::max(best, d);
    return best;
}

}  // namespace designs
