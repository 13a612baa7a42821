#include "designs/divisibility.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace designs {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (n > 64) throw Error("binomial: n capped at 64");
    static std::vector<std::vector<long long>> table;  // Pascal rows, built once
    if (table.empty()) {
        table.resize(65);
        for (int i = 0; i <= 64; ++i) {
            table[i].resize(i + 1, 1);
            for (int j = 1; j < i; ++j) table[i][j] = table[i - 1][j - 1] + table[i - 1][j];
        }
    }
    return table[n][k];
}

long long modulus_m(int q, int r) {
    if (!(q > r && r >= 1)) throw Error("modulus_m requires q > r >= 1");
    long long m = 1;
    for (int i = 0; i < r; ++i) m = std::lcm(m, binomial(q - i, r - i));
    return m;
}

DivisibilityReport is_divisible(const MultiHypergraph& g, int q) {
    const int r = g.uniformity();
    if (q <= r) throw Error("is_divisible requires q > r");
    DivisibilityReport report;
    for (int i = 0; i < r; ++i) {
        const long long mod = binomial(q - i, r - i);
        std::set<std::vector<VertexId>> candidates;
        for (const auto& e : g.instances())
            for (auto& sub : k_subsets(e.verts, i)) candidates.insert(sub);
        std::map<std::vector<VertexId>, long long> deg;
        for (const auto& e : g.instances())
            for (auto& sub : k_subsets(e.verts, i)) ++deg[sub];
        for (const auto& s : candidates) {
            long long d = deg[s];
            if (d % mod != 0) {
                report.divisible = false;
                report.first_violation = DivisibilityViolation{i, s, d, mod};
                return report;
            }
        }
    }
    return report;
}

DivisibilityReport check_link_divisibility(const MultiHypergraph& l, int q,
                                           const std::vector<VertexId>& s) {
    const int i = static_cast<int>(s.size());
    if (i < 1 || i >= l.uniformity()) throw Error("link set size must be in [1, r)");
    return is_divisible(link(l, s), q - i);
}

}  // namespace designs
