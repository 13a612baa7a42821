#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "designs/absorber.hpp"
#include "designs/divisibility.hpp"

using namespace designs;

namespace {

MultiHypergraph cycle(int n) {
    MultiHypergraph g(n, 2);
    for (int i = 0; i < n; ++i) {
        int a = i, b = (i + 1) % n;
        g.add_edge({std::min(a, b), std::max(a, b)});
    }
    return g;
}

}  // namespace

TEST_CASE("empty input gets the empty absorber") {
    auto res = search_absorber(MultiHypergraph(4, 2), 3);
    REQUIRE(res.status == AbsorberStatus::Found);
    CHECK(res.absorber->a_iids.empty());
    CHECK(audit_absorber(*res.absorber, 3));
}

TEST_CASE("non-divisible input is rejected") {
    MultiHypergraph g(4, 2);
    g.add_edge({0, 1});
    CHECK_THROWS_AS(search_absorber(g, 3), Error);
    CHECK_THROWS_AS(better_absorber(g, 3), Error);
}

TEST_CASE("a triangle absorbs itself") {
    auto res = search_absorber(MultiHypergraph::complete(3, 2), 3);
    REQUIRE(res.status == AbsorberStatus::Found);
    CHECK(res.absorber->new_vertex_count == 0);
    CHECK(res.absorber->new_vertex_count <= 12);
    CHECK(audit_absorber(*res.absorber, 3));
}

TEST_CASE("six-cycle needs real absorption") {
    auto res = search_absorber(cycle(6), 3);
    REQUIRE(res.status == AbsorberStatus::Found);
    CHECK(res.absorber->new_vertex_count > 0);
    CHECK(res.absorber->new_vertex_count <= 12);
    CHECK(audit_absorber(*res.absorber, 3));
}

TEST_CASE("nine-cycle and disjoint unions") {
    auto res = search_absorber(cycle(9), 3);
    REQUIRE(res.status == AbsorberStatus::Found);
    CHECK(audit_absorber(*res.absorber, 3));

    // two components with residues 1 and 2 mod 3
    MultiHypergraph g(9, 2);
    for (int i = 0; i < 4; ++i) {
        int a = i, b = (i + 1) % 4;
        g.add_edge({std::min(a, b), std::max(a, b)});
    }
    for (int i = 0; i < 5; ++i) {
        int a = 4 + i, b = 4 + (i + 1) % 5;
        g.add_edge({std::min(a, b), std::max(a, b)});
    }
    REQUIRE(is_divisible(g, 3).divisible);
    auto res2 = search_absorber(g, 3);
    REQUIRE(res2.status == AbsorberStatus::Found);
    CHECK(audit_absorber(*res2.absorber, 3));
}

TEST_CASE("three pentagons use honorary padding") {
    MultiHypergraph g(15, 2);
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 5; ++i) {
            int a = 5 * c + i, b = 5 * c + (i + 1) % 5;
            g.add_edge({std::min(a, b), std::max(a, b)});
        }
    REQUIRE(is_divisible(g, 3).divisible);
    auto res = search_absorber(g, 3);
    REQUIRE(res.status == AbsorberStatus::Found);
    CHECK(audit_absorber(*res.absorber, 3));
}

TEST_CASE("theta-bundle shape from the gadget world") {
    // six internally disjoint u-v paths of length 4: the smallest divisible
    // subgraph of a presence-gadget stack is the whole bundle
    MultiHypergraph g(26, 2);
    for (int i = 0; i < 6; ++i) {
        int y1 = 2 + 3 * i, x = 3 + 3 * i, y2 = 4 + 3 * i;
        g.add_edge({0, y1});
        g.add_edge({y1, x});
        g.add_edge({x, y2});
        g.add_edge({1, y2});
    }
    REQUIRE(is_divisible(g, 3).divisible);
    auto res = search_absorber(g, 3);
    REQUIRE(res.status == AbsorberStatus::Found);
    CHECK(audit_absorber(*res.absorber, 3));
}

TEST_CASE("parallel stacks route through the composed construction") {
    MultiHypergraph g(2, 2);
    for (int i = 0; i < 6; ++i) g.add_edge({0, 1});
    REQUIRE(is_divisible(g, 3).divisible);
    auto res = search_absorber(g, 3);
    REQUIRE(res.status == AbsorberStatus::Found);
    CHECK(audit_absorber(*res.absorber, 3));
}

TEST_CASE("better absorber for a triangle") {
    auto res = better_absorber(MultiHypergraph::complete(3, 2), 3);
    REQUIRE(res.status == AbsorberStatus::Found);
    const auto& a = *res.absorber;
    CHECK(audit_absorber(a, 3));
    CHECK(audit_block_intersections(a, 3));
    // blocks meeting the original universe in 2 vertices do so on edges
    bool found_full_meet = false;
    for (const auto& block : a.q2.cliques) {
        int inside = 0;
        for (VertexId v : block)
            if (v < a.l_vertex_count) ++inside;
        if (inside == 2) found_full_meet = true;
    }
    CHECK(found_full_meet);
}

TEST_CASE("better absorber of nothing is nothing") {
    auto res = better_absorber(MultiHypergraph(3, 2), 3);
    REQUIRE(res.status == AbsorberStatus::Found);
    CHECK(res.absorber->a_iids.empty());
}

TEST_CASE("mutated certificates are detected") {
    auto res = search_absorber(cycle(6), 3);
    REQUIRE(res.status == AbsorberStatus::Found);
    Absorber a = *res.absorber;
    REQUIRE(audit_absorber(a, 3));
    SUBCASE("block dropped from q2") {
        for (auto it = a.q2.assignment.begin(); it != a.q2.assignment.end();) {
            if (it->second == 0)
                it = a.q2.assignment.erase(it);
            else
                ++it;
        }
        CHECK_FALSE(audit_absorber(a, 3));
    }
    SUBCASE("intersection audit catches an in-universe block") {
        a.q2.cliques.push_back({0, 1, 2});
        CHECK_FALSE(audit_block_intersections(a, 3));
    }
}

TEST_CASE("paired search solves a tiny non-triangle case") {
    // K_4^3 minus nothing is decomposable at q=4 (itself); force the paired
    // engine with a genuinely higher-q case on the trivial path instead
    auto g = MultiHypergraph::complete(4, 3);
    auto res = search_absorber(g, 4);
    REQUIRE(res.status == AbsorberStatus::Found);
    CHECK(res.absorber->new_vertex_count == 0);
    CHECK(audit_absorber(*res.absorber, 4));
}
