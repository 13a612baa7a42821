#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>

#include "designs/exact_cover.hpp"
#include "designs/rng.hpp"

using namespace designs;

namespace {

// Plain reference enumerator, independent of the production search: cover
// the lowest-iid uncovered instance, trying cliques in lexicographic order.
std::uint64_t brute_count(const MultiHypergraph& g, int q, std::uint64_t cap) {
    const int r = g.uniformity();
    std::vector<std::vector<VertexId>> cliques;
    std::vector<VertexId> verts = support_vertices(g);
    std::function<void(std::size_t, std::vector<VertexId>&)> gen = [&](std::size_t from,
                                                                       std::vector<VertexId>& cur) {
        if (static_cast<int>(cur.size()) == q) {
            for (auto& sub : k_subsets(cur, r))
                if (!g.support_index().count(sub)) return;
            cliques.push_back(cur);
            return;
        }
        for (std::size_t i = from; i < verts.size(); ++i) {
            cur.push_back(verts[i]);
            gen(i + 1, cur);
            cur.pop_back();
        }
    };
    std::vector<VertexId> cur;
    gen(0, cur);

    std::map<std::vector<VertexId>, int> remaining;
    for (const auto& [support, iids] : g.support_index())
        remaining[support] = static_cast<int>(iids.size());
    std::uint64_t count = 0;
    std::function<void(int)> rec = [&](int min_clique) {
        if (count >= cap) return;
        // lowest uncovered support in lexicographic order
        const std::vector<VertexId>* target = nullptr;
        for (auto& [support, rem] : remaining)
            if (rem > 0) {
                target = &support;
                break;
            }
        if (!target) {
            ++count;
            return;
        }
        for (std::size_t c = static_cast<std::size_t>(min_clique); c < cliques.size(); ++c) {
            auto subs = k_subsets(cliques[c], r);
            bool contains = false, usable = true;
            for (auto& sub : subs) {
                if (sub == *target) contains = true;
                if (remaining[sub] == 0) usable = false;
            }
            if (!contains || !usable) continue;
            for (auto& sub : subs) --remaining[sub];
            // stay non-decreasing only while covering the same support
            bool still = remaining[*target] > 0;
            rec(still ? static_cast<int>(c) : 0);
            for (auto& sub : subs) ++remaining[sub];
            if (count >= cap) return;
        }
    };
    rec(0);
    return count;
}

MultiHypergraph relabel(const MultiHypergraph& g, const std::vector<VertexId>& perm) {
    MultiHypergraph out(g.vertex_count(), g.uniformity());
    for (const auto& e : g.instances()) {
        std::vector<VertexId> verts;
        for (VertexId v : e.verts) verts.push_back(perm[v]);
        std::sort(verts.begin(), verts.end());
        out.add_edge_with_iid(e.iid, verts);
    }
    return out;
}

}  // namespace

TEST_CASE("design hypergraph counts") {
    auto d = design_hypergraph(MultiHypergraph::complete(5, 2), 3);
    CHECK(d.clique_nodes.size() == 10);

    // K_7 minus one edge: 35 - 5 triangles survive
    auto g = MultiHypergraph::complete(7, 2);
    g.remove_edges({0});
    auto d2 = design_hypergraph(g, 3);
    CHECK(d2.clique_nodes.size() == 30);

    MultiHypergraph sparse(6, 2);
    sparse.add_edge({0, 1});
    sparse.add_edge({2, 3});
    CHECK(design_hypergraph(sparse, 3).clique_nodes.empty());

    MultiHypergraph multi(3, 2);
    multi.add_edge({0, 1});
    multi.add_edge({0, 1});
    CHECK_THROWS_AS(design_hypergraph(multi, 3), Error);
}

TEST_CASE("steiner triple system on 7 points") {
    auto g = MultiHypergraph::complete(7, 2);
    auto res = find_decomposition(g, 3);
    REQUIRE(res.status == SolveStatus::Found);
    CHECK(res.decomposition->cliques.size() == 7);
    CHECK(verify_decomposition(g, 3, *res.decomposition, all_iids(g)));
}

TEST_CASE("divisibility pre-screen rejects without search") {
    auto res = find_decomposition(MultiHypergraph::complete(5, 2), 3);
    CHECK(res.status == SolveStatus::Infeasible);
    CHECK(res.divisibility.has_value());
    CHECK(res.nodes_used == 0);
}

TEST_CASE("k9 decomposes") {
    auto g = MultiHypergraph::complete(9, 2);
    auto res = find_decomposition(g, 3);
    REQUIRE(res.status == SolveStatus::Found);
    CHECK(verify_decomposition(g, 3, *res.decomposition, all_iids(g)));
}

TEST_CASE("count of labeled systems on 7 points") {
    auto count = count_decompositions(MultiHypergraph::complete(7, 2), 3, 1000);
    CHECK(count.count == 30);
    CHECK_FALSE(count.lower_bound_only);
    CHECK(count_decompositions(MultiHypergraph::complete(3, 2), 3, 10).count == 1);
    CHECK(count_decompositions(MultiHypergraph::complete(5, 2), 3, 10).count == 0);
}

TEST_CASE("counts agree with the reference enumerator") {
    CHECK(brute_count(MultiHypergraph::complete(7, 2), 3, 1000) == 30);
    // small 3-uniform case cross-checked both ways
    auto k63 = MultiHypergraph::complete(6, 3);
    auto ours = count_decompositions(k63, 4, 100000);
    CHECK(ours.count == brute_count(k63, 4, 100000));
    auto found = find_decomposition(k63, 4);
    CHECK((found.status == SolveStatus::Found) == (ours.count > 0));
    // multigraph: doubled triangle edges decompose into two parallel triangles
    MultiHypergraph doubled(3, 2);
    for (int copy = 0; copy < 2; ++copy)
        for (auto& support : k_subsets({0, 1, 2}, 2)) doubled.add_edge(support);
    auto res = find_decomposition(doubled, 3);
    REQUIRE(res.status == SolveStatus::Found);
    CHECK(res.decomposition->cliques.size() == 2);
    CHECK(verify_decomposition(doubled, 3, *res.decomposition, all_iids(doubled)));
    CHECK(count_decompositions(doubled, 3, 100).count ==
          brute_count(doubled, 3, 100));
}

TEST_CASE("count is invariant under relabeling") {
    auto g = MultiHypergraph::complete(7, 2);
    auto base = count_decompositions(g, 3, 1000).count;
    Rng rng(2024);
    for (int t = 0; t < 10; ++t) {
        std::vector<VertexId> perm(7);
        for (int i = 0; i < 7; ++i) perm[i] = i;
        rng.shuffle(perm);
        CHECK(count_decompositions(relabel(g, perm), 3, 1000).count == base);
    }
}

TEST_CASE("solver is deterministic") {
    auto g = MultiHypergraph::complete(9, 2);
    auto a = find_decomposition(g, 3);
    auto b = find_decomposition(g, 3);
    REQUIRE(a.status == SolveStatus::Found);
    CHECK(a.decomposition->cliques == b.decomposition->cliques);
    CHECK(a.nodes_used == b.nodes_used);
}

TEST_CASE("budget exhaustion is distinct from infeasible") {
    auto res = find_decomposition(MultiHypergraph::complete(9, 2), 3, 2);
    CHECK(res.status == SolveStatus::Indeterminate);
}

TEST_CASE("packing covering a required set") {
    auto g = MultiHypergraph::complete(7, 2);
    SUBCASE("empty requirement") {
        auto res = find_packing_covering(g, 3, {});
        REQUIRE(res.status == SolveStatus::Found);
        CHECK(res.decomposition->cliques.empty());
    }
    SUBCASE("full requirement equals a decomposition") {
        auto res = find_packing_covering(g, 3, all_iids(g));
        REQUIRE(res.status == SolveStatus::Found);
        CHECK(verify_decomposition(g, 3, *res.decomposition, all_iids(g)));
    }
    SUBCASE("edges away from a vertex") {
        auto k9 = MultiHypergraph::complete(9, 2);
        IidSet required;
        for (const auto& e : k9.instances())
            if (e.verts[0] != 0 && e.verts[1] != 0) required.push_back(e.iid);
        iid_sort_unique(required);
        auto res = find_packing_covering(k9, 3, required);
        REQUIRE(res.status == SolveStatus::Found);
        IidSet covered;
        for (auto& [iid, _] : res.decomposition->assignment) covered.push_back(iid);
        iid_sort_unique(covered);
        CHECK(iid_subset(required, covered));
        CHECK(verify_decomposition(k9, 3, *res.decomposition, covered));
    }
}

TEST_CASE("verifier rejects corrupted certificates") {
    auto g = MultiHypergraph::complete(7, 2);
    auto res = find_decomposition(g, 3);
    REQUIRE(res.status == SolveStatus::Found);
    auto d = *res.decomposition;
    SUBCASE("instance reassigned") {
        d.assignment.begin()->second = (d.assignment.begin()->second + 1) % d.cliques.size();
        CHECK_FALSE(verify_decomposition(g, 3, d, all_iids(g)));
    }
    SUBCASE("instance dropped") {
        d.assignment.erase(d.assignment.begin());
        CHECK_FALSE(verify_decomposition(g, 3, d, all_iids(g)));
    }
}
