#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "designs/refinery.hpp"
#include "designs/rmh.hpp"

using namespace designs;

TEST_CASE("q=2 m=2 instance expanded by hand") {
    auto inst = build_rmh(2, 2);
    CHECK(inst.vertex_count() == 6);
    CHECK(inst.x_positions == std::vector<int>{3, 6});
    CHECK(inst.xprime_positions == std::vector<int>{1});
    std::set<std::vector<int>> expected{{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {2, 4}};
    std::set<std::vector<int>> got(inst.edges.begin(), inst.edges.end());
    CHECK(got == expected);
}

TEST_CASE("matching for the derived example") {
    auto inst = build_rmh(2, 2);
    auto m = rmh_matching(inst, {3});
    std::set<std::vector<int>> got(m.begin(), m.end());
    std::set<std::vector<int>> expected{{4, 5}, {2, 3}};
    CHECK(got == expected);
    // exactly position 1 = the held-out set stays unmatched
    std::set<int> covered;
    for (auto& block : m) covered.insert(block.begin(), block.end());
    CHECK_FALSE(covered.count(1));
}

TEST_CASE("size and degree bounds hold exactly") {
    for (int q = 1; q <= 5; ++q)
        for (int m = 0; m <= 6; ++m) {
            auto inst = build_rmh(q, m);
            CHECK(inst.vertex_count() == (q + 1) * m);
            if (m > 0) CHECK(rmh_max_degree(inst) <= 2 * q);
            CHECK(static_cast<long long>(inst.edges.size()) <=
                  2LL * (q + 1) * std::max(m, 1));
            CHECK(static_cast<int>(inst.xprime_positions.size()) == (m == 0 ? 0 : q - 1));
            for (const auto& e : inst.edges) {
                int inputs = 0;
                for (int pos : e)
                    if (inst.is_input(pos)) ++inputs;
                CHECK(inputs <= 1);
            }
        }
}

TEST_CASE("exhaustive verification") {
    for (int q = 2; q <= 5; ++q)
        for (int m = 1; m <= 6; ++m) CHECK(verify_rmh(build_rmh(q, m)));
    CHECK(verify_rmh(build_rmh(3, 0)));  // vacuous
}

TEST_CASE("deleting an edge breaks some subset") {
    auto inst = build_rmh(3, 3);
    REQUIRE(verify_rmh(inst));
    bool all_still_pass = true;
    for (std::size_t drop = 0; drop < inst.edges.size(); ++drop) {
        RmhInstance mutated = inst;
        mutated.edges.erase(mutated.edges.begin() + drop);
        if (!verify_rmh(mutated)) all_still_pass = false;
    }
    CHECK_FALSE(all_still_pass);
}

TEST_CASE("matching blocks are always edges") {
    for (int q = 2; q <= 4; ++q)
        for (int m = 1; m <= 5; ++m) {
            auto inst = build_rmh(q, m);
            for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
                std::vector<int> l;
                for (int i = 0; i < m; ++i)
                    if (mask & (1ULL << i)) l.push_back(inst.x_positions[i]);
                CHECK_NOTHROW(rmh_matching(inst, l));
            }
        }
}

TEST_CASE("divisible subsets get perfect matchings") {
    auto inst = build_rmh(3, 6);
    std::vector<int> l{inst.x_positions[0], inst.x_positions[2], inst.x_positions[5]};
    auto m = rmh_matching(inst, l);
    std::set<int> covered;
    for (auto& block : m)
        for (int pos : block) covered.insert(pos);
    // q | |L|: everything in L ∪ R is covered
    std::size_t pool = l.size();
    for (int pos = 1; pos <= inst.vertex_count(); ++pos)
        if (!inst.is_input(pos)) ++pool;
    CHECK(covered.size() == pool);
}

TEST_CASE("singleton omni absorber") {
    SUBCASE("simple input") {
        MultiHypergraph x(40, 1);
        for (int i = 0; i < 6; ++i) x.add_edge({i});
        std::vector<VertexId> y;
        for (int i = 10; i < 40; ++i) y.push_back(i);
        auto omni = build_singleton_omni(x, 3, y);
        auto outcome = verify_omni_absorber(omni, 3);
        INFO(outcome.message);
        CHECK(outcome.ok);
    }
    SUBCASE("parallel singletons") {
        MultiHypergraph x(40, 1);
        x.add_edge({0});
        x.add_edge({0});
        x.add_edge({1});
        x.add_edge({1});
        std::vector<VertexId> y;
        for (int i = 10; i < 40; ++i) y.push_back(i);
        auto omni = build_singleton_omni(x, 2, y);
        auto outcome = verify_omni_absorber(omni, 2);
        INFO(outcome.message);
        CHECK(outcome.ok);
        // splitting parallel singletons matches the simple instance block-wise
        MultiHypergraph split(40, 1);
        split.add_edge({2});
        split.add_edge({3});
        split.add_edge({4});
        split.add_edge({5});
        auto omni2 = build_singleton_omni(split, 2, y);
        CHECK(omni2.family.size() == omni.family.size());
        for (std::size_t i = 0; i < omni.family.size(); ++i)
            CHECK(omni.family[i].size() == omni2.family[i].size());
    }
    SUBCASE("embedding failure when y is tiny") {
        MultiHypergraph x(12, 1);
        for (int i = 0; i < 9; ++i) x.add_edge({i});
        CHECK_THROWS_AS(build_singleton_omni(x, 3, {9}), EmbeddingFailure);
    }
    SUBCASE("every singleton lies in few blocks") {
        MultiHypergraph x(60, 1);
        for (int i = 0; i < 8; ++i) x.add_edge({i});
        std::vector<VertexId> y;
        for (int i = 20; i < 60; ++i) y.push_back(i);
        auto omni = build_singleton_omni(x, 3, y);
        CHECK(family_edge_membership(omni.world, omni.family) <= 2 * 3);
    }
}
