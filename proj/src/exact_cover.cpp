#include "designs/exact_cover.hpp"

#include <algorithm>
#include <functional>

namespace designs {

namespace {

// Enumerates all q-sets whose every r-subset is a support of g, in
// lexicographic order.
std::vector<std::vector<VertexId>> enumerate_cliques(const MultiHypergraph& g, int q) {
    const int r = g.uniformity();
    const auto& index = g.support_index();
    std::vector<VertexId> verts = support_vertices(g);
    std::vector<std::vector<VertexId>> out;
    std::vector<VertexId> current;

    std::function<void(std::size_t)> extend = [&](std::size_t from) {
        if (static_cast<int>(current.size()) == q) {
            out.push_back(current);
            return;
        }
        for (std::size_t i = from; i < verts.size(); ++i) {
            VertexId v = verts[i];
            bool ok = true;
            if (static_cast<int>(current.size()) + 1 >= r) {
                for (auto& sub : k_subsets(current, r - 1)) {
                    sub.push_back(v);  // current is sorted and v is larger
                    if (!index.count(sub)) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) continue;
            current.push_back(v);
            extend(i + 1);
            current.pop_back();
        }
    };
    extend(0);
    return out;
}

struct CoverProblem {
    std::vector<std::vector<VertexId>> supports;   // column id -> support
    std::map<std::vector<VertexId>, int> col_of;   // support -> column id
    std::vector<int> lo;                           // required cover count
    std::vector<int> hi;                           // allowed cover count
    std::vector<Iid> lowest_iid;                   // tie-break key per column
    std::vector<std::vector<VertexId>> cliques;    // row id -> vertex set
    std::vector<std::vector<int>> row_cols;        // row id -> column ids
    std::vector<std::vector<int>> cols_rows;       // column id -> row ids
};

void build_problem(const MultiHypergraph& g, int q, CoverProblem& p) {
    const int r = g.uniformity();
    for (const auto& [support, iids] : g.support_index()) {
        p.col_of[support] = static_cast<int>(p.supports.size());
        p.supports.push_back(support);
        p.hi.push_back(static_cast<int>(iids.size()));
        p.lowest_iid.push_back(iids.front());
    }
    p.lo = p.hi;
    p.cliques = enumerate_cliques(g, q);
    p.row_cols.resize(p.cliques.size());
    p.cols_rows.resize(p.supports.size());
    for (std::size_t row = 0; row < p.cliques.size(); ++row) {
        for (auto& sub : k_subsets(p.cliques[row], r)) {
            int c = p.col_of.at(sub);
            p.row_cols[row].push_back(c);
            p.cols_rows[c].push_back(static_cast<int>(row));
        }
    }
}

struct Searcher {
    CoverProblem& p;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    bool out_of_budget = false;
    std::vector<int> covered;
    std::vector<int> chosen_rows;

    Searcher(CoverProblem& problem, std::uint64_t node_budget)
        : p(problem), budget(node_budget), covered(problem.supports.size(), 0) {}

    bool row_usable(int row) const {
        for (int c : p.row_cols[row])
            if (covered[c] >= p.hi[c]) return false;
        return true;
    }

    // Column with unmet lower bound, minimizing usable-row count; ties by
    // lowest instance id.
    int pick_column() const {
        int best = -1;
        long long best_count = -1;
        for (std::size_t c = 0; c < p.supports.size(); ++c) {
            if (covered[c] >= p.lo[c]) continue;
            long long count = 0;
            for (int row : p.cols_rows[c])
                if (row_usable(row)) ++count;
            if (best < 0 || count < best_count ||
                (count == best_count && p.lowest_iid[c] < p.lowest_iid[best])) {
                best = static_cast<int>(c);
                best_count = count;
            }
        }
        return best;
    }

    // Stays on one column until its lower bound is met, choosing rows in
    // non-decreasing order so every solution is enumerated exactly once.
    // on_solution returns true to stop the whole search.
    bool dfs(int sticky_col, int min_row, const std::function<bool()>& on_solution) {
        if (++nodes > budget) {
            out_of_budget = true;
            return true;
        }
        int col = (sticky_col >= 0 && covered[sticky_col] < p.lo[sticky_col]) ? sticky_col : -1;
        if (col < 0) {
            col = pick_column();
            min_row = 0;
        }
        if (col < 0) return on_solution();
        for (std::size_t k = 0; k < p.cols_rows[col].size(); ++k) {
            int row = p.cols_rows[col][k];
            if (row < min_row || !row_usable(row)) continue;
            for (int c : p.row_cols[row]) ++covered[c];
            chosen_rows.push_back(row);
            bool stop = dfs(col, row, on_solution);
            chosen_rows.pop_back();
            for (int c : p.row_cols[row]) --covered[c];
            if (stop) return true;
        }
        return false;
    }
};

// Deterministic instance assignment: per support, blocks covering it are
// matched to instance ids in ascending order, required instances first.
Decomposition assign_instances(const MultiHypergraph& g, const CoverProblem& p,
                               const std::vector<int>& rows, const IidSet* required) {
    Decomposition d;
    std::map<int, std::vector<std::size_t>> blocks_on_col;
    for (int row : rows) {
        std::size_t block = d.cliques.size();
        d.cliques.push_back(p.cliques[row]);
        for (int c : p.row_cols[row]) blocks_on_col[c].push_back(block);
    }
    for (const auto& [support, iids] : g.support_index()) {
        auto it = blocks_on_col.find(p.col_of.at(support));
        if (it == blocks_on_col.end()) continue;
        IidSet ordered;
        if (required) {
            for (Iid iid : iids)
                if (iid_contains(*required, iid)) ordered.push_back(iid);
            for (Iid iid : iids)
                if (!iid_contains(*required, iid)) ordered.push_back(iid);
        } else {
            ordered = iids;
        }
        for (std::size_t i = 0; i < it->second.size(); ++i)
            d.assignment[ordered[i]] = it->second[i];
    }
    return d;
}

}  // namespace

DesignHypergraph design_hypergraph(const MultiHypergraph& g, int q) {
    if (max_multiplicity(g) > 1) throw Error("design_hypergraph requires a simple graph");
    DesignHypergraph d;
    d.clique_nodes = enumerate_cliques(g, q);
    const int r = g.uniformity();
    for (std::size_t i = 0; i < d.clique_nodes.size(); ++i) {
        for (auto& sub : k_subsets(d.clique_nodes[i], r)) {
            auto it = g.support_index().find(sub);
            d.incidence[it->second.front()].push_back(i);
        }
    }
    for (const auto& e : g.instances())
        d.incidence.try_emplace(e.iid);
    return d;
}

SolveResult find_decomposition(const MultiHypergraph& g, int q, std::uint64_t node_budget) {
    SolveResult result;
    if (g.edge_count() == 0) {
        result.status = SolveStatus::Found;
        result.decomposition = Decomposition{};
        return result;
    }
    auto report = is_divisible(g, q);
    if (!report.divisible) {
        result.status = SolveStatus::Infeasible;
        result.divisibility = report;
        return result;
    }
    CoverProblem p;
    build_problem(g, q, p);
    Searcher s{p, node_budget};
    std::vector<int> solution;
    bool found = false;
    s.dfs(-1, 0, [&] {
        solution = s.chosen_rows;
        found = true;
        return true;
    });
    result.nodes_used = s.nodes;
    if (found) {
        result.status = SolveStatus::Found;
        result.decomposition = assign_instances(g, p, solution, nullptr);
    } else {
        result.status = s.out_of_budget ? SolveStatus::Indeterminate : SolveStatus::Infeasible;
    }
    return result;
}

CountResult count_decompositions(const MultiHypergraph& g, int q, std::uint64_t cap,
                                 std::uint64_t node_budget) {
    CountResult result;
    if (g.edge_count() == 0) {
        result.count = 1;
        return result;
    }
    if (!is_divisible(g, q).divisible) return result;
    CoverProblem p;
    build_problem(g, q, p);
    Searcher s{p, node_budget};
    s.dfs(-1, 0, [&] {
        ++result.count;
        return result.count >= cap;
    });
    result.nodes_used = s.nodes;
    result.lower_bound_only = s.out_of_budget || result.count >= cap;
    return result;
}

SolveResult find_packing_covering(const MultiHypergraph& g, int q, const IidSet& required,
                                  std::uint64_t node_budget) {
    SolveResult result;
    for (Iid iid : required)
        if (!g.has_instance(iid)) throw Error("required instance not in graph");
    if (required.empty()) {
        result.status = SolveStatus::Found;
        result.decomposition = Decomposition{};
        return result;
    }
    CoverProblem p;
    build_problem(g, q, p);
    // Only required instances demand coverage; everything else is optional
    // within its multiplicity.
    std::map<std::vector<VertexId>, int> req_count;
    for (Iid iid : required) ++req_count[g.instance(iid).verts];
    for (std::size_t c = 0; c < p.supports.size(); ++c) {
        auto it = req_count.find(p.supports[c]);
        p.lo[c] = it == req_count.end() ? 0 : it->second;
    }
    Searcher s{p, node_budget};
    std::vector<int> solution;
    bool found = false;
    s.dfs(-1, 0, [&] {
        solution = s.chosen_rows;
        found = true;
        return true;
    });
    result.nodes_used = s.nodes;
    if (found) {
        result.status = SolveStatus::Found;
        result.decomposition = assign_instances(g, p, solution, &required);
    } else {
        result.status = s.out_of_budget ? SolveStatus::Indeterminate : SolveStatus::Infeasible;
    }
    return result;
}

bool verify_decomposition(const MultiHypergraph& g, int q, const Decomposition& d,
                          const IidSet& target) {
    const int r = g.uniformity();
    // Every target instance assigned exactly once, nothing else assigned.
    if (d.assignment.size() != target.size()) return false;
    for (Iid iid : target)
        if (!d.assignment.count(iid)) return false;
    // Each block receives exactly its r-subsets, one instance per support.
    std::vector<std::map<std::vector<VertexId>, int>> received(d.cliques.size());
    for (const auto& [iid, block] : d.assignment) {
        if (block >= d.cliques.size()) return false;
        if (!g.has_instance(iid)) return false;
        ++received[block][g.instance(iid).verts];
    }
    for (std::size_t b = 0; b < d.cliques.size(); ++b) {
        const auto& clique = d.cliques[b];
        if (static_cast<int>(clique.size()) != q) return false;
        if (!std::is_sorted(clique.begin(), clique.end())) return false;
        if (std::adjacent_find(clique.begin(), clique.end()) != clique.end()) return false;
        auto subs = k_subsets(clique, r);
        if (received[b].size() != subs.size()) return false;
        for (auto& sub : subs) {
            auto it = received[b].find(sub);
            if (it == received[b].end() || it->second != 1) return false;
        }
    }
    return true;
}

}  // namespace designs
