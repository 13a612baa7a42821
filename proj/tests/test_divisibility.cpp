#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "designs/divisibility.hpp"
#include "designs/rng.hpp"

using namespace designs;

namespace {

// brute-force lcm: scan multiples of the largest term
long long slow_lcm(const std::vector<long long>& terms) {
    long long biggest = 1;
    for (long long t : terms) biggest = std::max(biggest, t);
    for (long long candidate = biggest;; candidate += biggest) {
        bool all = true;
        for (long long t : terms)
            if (candidate % t != 0) all = false;
        if (all) return candidate;
    }
}

// independent binomial via a factorial ratio in 128 bits
long long slow_binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    __int128 num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= n - i;
        den *= i + 1;
    }
    return static_cast<long long>(num / den);
}

MultiHypergraph random_divisible(int q, int r, int n, Rng& rng) {
    // rejection-free: keep toggling random edges until divisible
    MultiHypergraph g(n, r);
    std::vector<std::vector<VertexId>> pool;
    std::vector<VertexId> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    pool = k_subsets(all, r);
    std::vector<bool> in(pool.size(), false);
    auto build = [&]() {
        MultiHypergraph h(n, r);
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (in[i]) h.add_edge(pool[i]);
        return h;
    };
    for (int rounds = 0; rounds < 4000; ++rounds) {
        std::size_t i = rng.below(pool.size());
        in[i] = !in[i];
        MultiHypergraph h = build();
        if (h.edge_count() > 0 && is_divisible(h, q).divisible) return h;
    }
    return MultiHypergraph(n, r);  // empty fallback is divisible too
}

}  // namespace

TEST_CASE("modulus table") {
    CHECK(modulus_m(3, 2) == 6);
    CHECK(modulus_m(4, 2) == 6);
    CHECK(modulus_m(4, 3) == 12);
    CHECK(modulus_m(5, 2) == 20);  // lcm(10, 4)
    for (int q = 2; q <= 7; ++q) CHECK(modulus_m(q, 1) == q);
    CHECK_THROWS_AS(modulus_m(2, 2), Error);
    // 20 is tight: the smaller candidate fails the edge-count condition
    MultiHypergraph twelve(2, 2);
    for (int i = 0; i < 12; ++i) twelve.add_edge({0, 1});
    CHECK_FALSE(is_divisible(twelve, 5).divisible);
}

TEST_CASE("modulus cross-check against brute force") {
    for (int q = 2; q <= 9; ++q)
        for (int r = 1; r < q; ++r) {
            std::vector<long long> terms;
            for (int i = 0; i < r; ++i) terms.push_back(slow_binomial(q - i, r - i));
            CHECK(modulus_m(q, r) == slow_lcm(terms));
        }
}

TEST_CASE("binomial matches the independent route") {
    for (int n = 0; n <= 30; ++n)
        for (int k = 0; k <= n; ++k) CHECK(binomial(n, k) == slow_binomial(n, k));
}

TEST_CASE("divisibility of complete graphs") {
    CHECK(is_divisible(MultiHypergraph::complete(7, 2), 3).divisible);
    CHECK_FALSE(is_divisible(MultiHypergraph::complete(6, 2), 3).divisible);
}

TEST_CASE("first violation is reported in (i, S) order") {
    // K_6^2 with q=3: 15 edges divisible by 3, but vertex degrees are 5 (odd)
    auto report = is_divisible(MultiHypergraph::complete(6, 2), 3);
    REQUIRE_FALSE(report.divisible);
    REQUIRE(report.first_violation.has_value());
    CHECK(report.first_violation->subset_size == 1);
    CHECK(report.first_violation->subset == std::vector<VertexId>{0});
    CHECK(report.first_violation->degree == 5);
    CHECK(report.first_violation->modulus == 2);
}

TEST_CASE("empty graph is divisible") {
    CHECK(is_divisible(MultiHypergraph(5, 2), 3).divisible);
}

TEST_CASE("complete hypergraphs are divisible for their own size") {
    for (int q = 2; q <= 7; ++q)
        for (int r = 1; r < q; ++r)
            CHECK(is_divisible(MultiHypergraph::complete(q, r), q).divisible);
}

TEST_CASE("links of divisible graphs are divisible") {
    Rng rng(31);
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        int q = 3 + static_cast<int>(rng.below(2));
        int r = 2;
        MultiHypergraph g = random_divisible(q, r, 6 + static_cast<int>(rng.below(3)), rng);
        if (g.edge_count() == 0) continue;
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (degree(g, {v}) == 0) continue;
            auto rep = check_link_divisibility(g, q, {v});
            CHECK(rep.divisible);
            ++checked;
        }
    }
    CHECK(checked > 20);
}

TEST_CASE("parallel modulus stack is divisible") {
    for (int q = 3; q <= 5; ++q)
        for (int r = 2; r < q; ++r) {
            MultiHypergraph g(r, r);
            std::vector<VertexId> support(r);
            for (int i = 0; i < r; ++i) support[i] = i;
            for (long long c = 0; c < modulus_m(q, r); ++c) g.add_edge(support);
            CHECK(is_divisible(g, q).divisible);
        }
}
