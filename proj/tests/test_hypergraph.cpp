#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "designs/hypergraph.hpp"
#include "designs/json_io.hpp"
#include "designs/rng.hpp"

using namespace designs;

namespace {

MultiHypergraph random_graph(int n, int r, int edges, Rng& rng) {
    MultiHypergraph g(n, r);
    for (int i = 0; i < edges; ++i) {
        std::vector<VertexId> verts;
        while (static_cast<int>(verts.size()) < r) {
            VertexId v = static_cast<VertexId>(rng.below(n));
            if (std::find(verts.begin(), verts.end(), v) == verts.end()) verts.push_back(v);
        }
        std::sort(verts.begin(), verts.end());
        g.add_edge(verts);
    }
    return g;
}

}  // namespace

TEST_CASE("complete graph sizes") {
    CHECK(MultiHypergraph::complete(7, 2).edge_count() == 21);
    CHECK(MultiHypergraph::complete(4, 3).edge_count() == 4);
    CHECK(MultiHypergraph::complete(5, 1).edge_count() == 5);
}

TEST_CASE("link of a complete hypergraph") {
    auto k43 = MultiHypergraph::complete(4, 3);
    auto lk = link(k43, {0});
    CHECK(lk.uniformity() == 2);
    CHECK(lk.edge_count() == 3);  // triangle on {1,2,3}
    for (const auto& e : lk.instances()) {
        CHECK(e.verts.size() == 2);
        for (VertexId v : e.verts) CHECK(v != 0);
    }
    // instances remember their source
    for (const auto& e : lk.instances()) {
        auto src = k43.instance(e.iid).verts;
        CHECK(std::includes(src.begin(), src.end(), e.verts.begin(), e.verts.end()));
    }
}

TEST_CASE("link at an (r-1)-set gives singletons") {
    auto g = MultiHypergraph::complete(6, 3);
    auto lk = link(g, {1, 4});
    CHECK(lk.uniformity() == 1);
    CHECK(lk.edge_count() == 4);  // n - r + 1
}

TEST_CASE("link preserves parallel instances") {
    MultiHypergraph g(3, 2);
    g.add_edge({0, 1});
    g.add_edge({0, 1});
    g.add_edge({0, 1});
    auto lk = link(g, {0});
    CHECK(lk.edge_count() == 3);
    for (const auto& e : lk.instances()) CHECK(e.verts == std::vector<VertexId>{1});
}

TEST_CASE("degrees and multiplicities") {
    auto k7 = MultiHypergraph::complete(7, 2);
    CHECK(degree(k7, {3}) == 6);
    CHECK(max_degree(k7, 1) == 6);
    CHECK(max_degree(MultiHypergraph(5, 2), 1) == 0);

    MultiHypergraph x(5, 3);
    x.add_edge({0, 1, 2});
    x.add_edge({0, 1, 3});
    x.add_edge({0, 1, 4});
    CHECK(degree(x, {0, 1}) == 3);
    CHECK(multiplicity(k7, {0, 1}) == 1);
    CHECK(multiplicity(k7, {0, 5}) == 1);
    MultiHypergraph m(2, 2);
    m.add_edge({0, 1});
    m.add_edge({0, 1});
    CHECK(multiplicity(m, {0, 1}) == 2);
    CHECK(multiplicity(m, {0, 1}) == max_multiplicity(m));
}

TEST_CASE("join inverts link on its image") {
    auto g = MultiHypergraph::complete(4, 3);
    auto star = join({0}, link(g, {0}));
    CHECK(star.uniformity() == 3);
    CHECK(star.edge_count() == 3);
    for (const auto& e : star.instances()) {
        CHECK(e.verts.size() == 3);
        CHECK(e.verts[0] == 0);
        CHECK(g.has_instance(e.iid));
        CHECK(g.instance(e.iid).verts == e.verts);
    }
    // empty set joins to the identity
    auto same = join({}, g);
    CHECK(same == g);
    // singleton join
    MultiHypergraph l(6, 1);
    l.add_edge({1});
    l.add_edge({2});
    auto joined = join({5}, l);
    CHECK(joined.edge_count() == 2);
    CHECK(joined.instances()[0].verts == std::vector<VertexId>{1, 5});
    // overlap rejected
    MultiHypergraph bad(6, 1);
    bad.add_edge({5});
    CHECK_THROWS_AS(join({5}, bad), InvalidJoinError);
}

TEST_CASE("flatness") {
    MultiHypergraph x(4, 3);
    x.add_edge({0, 1, 2});
    CHECK(is_flat(x, {0, 1}, 1));
    CHECK_FALSE(is_flat(x, {0, 1}, 0));
    CHECK(is_flat(x, {}, 3));  // r-flat always
    MultiHypergraph inside(4, 2);
    inside.add_edge({0, 1});
    CHECK(is_flat(inside, {0, 1}, 0));
    // monotone in i
    for (int i = 0; i < 3; ++i)
        if (is_flat(x, {2, 3}, i)) CHECK(is_flat(x, {2, 3}, i + 1));
}

TEST_CASE("union keeps instances and rejects collisions") {
    MultiHypergraph a(4, 2), b(4, 2);
    a.add_edge({0, 1});
    b.add_edge_with_iid(7, {2, 3});
    auto u = union_of(a, b);
    CHECK(u.edge_count() == 2);
    CHECK(are_edge_disjoint(a, b));
    MultiHypergraph c(4, 2);
    c.add_edge_with_iid(0, {1, 2});
    CHECK_FALSE(are_edge_disjoint(a, c));
    CHECK_THROWS_AS(union_of(a, c), IidCollisionError);
}

TEST_CASE("serialization round trip") {
    Rng rng(42);
    for (int t = 0; t < 25; ++t) {
        int r = 1 + static_cast<int>(rng.below(3));
        MultiHypergraph g = random_graph(4 + static_cast<int>(rng.below(5)), r,
                                         static_cast<int>(rng.below(12)), rng);
        auto text = serialize_jsonl(g);
        auto back = parse_jsonl(text);
        CHECK(back == g);
        CHECK(serialize_jsonl(back) == text);
    }
}

TEST_CASE("degree equals containment count over random graphs") {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        MultiHypergraph g = random_graph(7, 3, 15, rng);
        for (int k = 0; k <= 2; ++k) {
            long long total = 0;
            for (const auto& [support, iids] : g.support_index()) total += iids.size();
            CHECK(total == static_cast<long long>(g.edge_count()));
        }
        // sum of multiplicities equals the edge count
        long long sum = 0;
        for (const auto& [support, iids] : g.support_index())
            sum += multiplicity(g, support) > 0 ? multiplicity(g, support) : 0;
        CHECK(sum == static_cast<long long>(g.edge_count()));
    }
}

TEST_CASE("subgraph keeps ids") {
    auto g = MultiHypergraph::complete(5, 2);
    IidSet keep{0, 3, 7};
    auto s = subgraph(g, keep);
    CHECK(s.edge_count() == 3);
    for (Iid iid : keep) CHECK(s.instance(iid).verts == g.instance(iid).verts);
}
