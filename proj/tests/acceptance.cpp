// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion pins its tolerances in code.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "designs/absorber.hpp"
#include "designs/divisibility.hpp"
#include "designs/exact_cover.hpp"
#include "designs/gadgets.hpp"
#include "designs/json_io.hpp"
#include "designs/pipeline.hpp"
#include "designs/refinery.hpp"
#include "designs/rmh.hpp"
#include "designs/rng.hpp"

using namespace designs;

namespace {

int failures = 0;

void run(int number, const std::string& label, const std::function<bool(std::string&)>& body) {
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::printf("%s criterion %2d: %s (%lld ms)%s%s\n", ok ? "PASS" : "FAIL", number,
                label.c_str(), static_cast<long long>(ms), detail.empty() ? "" : " -- ",
                detail.c_str());
    if (!ok) ++failures;
}

bool criterion_rmh(std::string& detail) {
    for (int q = 2; q <= 5; ++q)
        for (int m = 1; m <= 6; ++m) {
            auto inst = build_rmh(q, m);
            if (inst.vertex_count() != (q + 1) * m) {
                detail = "vertex count off at q=" + std::to_string(q);
                return false;
            }
            if (rmh_max_degree(inst) > 2 * q) {
                detail = "degree bound off at q=" + std::to_string(q);
                return false;
            }
            if (!verify_rmh(inst)) {
                detail = "brute-force verification failed at q=" + std::to_string(q) +
                         " m=" + std::to_string(m);
                return false;
            }
        }
    return true;
}

bool criterion_gadgets(std::string& detail) {
    for (int q = 2; q <= 6; ++q)
        for (int r = 1; r < q; ++r) {
            std::vector<VertexId> root(r);
            for (int i = 0; i < r; ++i) root[i] = i;
            if (!check_gadget_congruences(anti_edge(root, q, r), q) ||
                !check_gadget_congruences(fake_edge(root, q, r), q)) {
                detail = "congruence failed at q=" + std::to_string(q) +
                         " r=" + std::to_string(r);
                return false;
            }
        }
    for (int q = 2; q <= 5; ++q)
        for (int r = 1; r < q; ++r) {
            std::vector<VertexId> root(r);
            for (int i = 0; i < r; ++i) root[i] = i;
            if (!m_copies_divisible(GadgetKind::AntiEdge, root, q, r) ||
                !m_copies_divisible(GadgetKind::FakeEdge, root, q, r)) {
                detail = "copy divisibility failed at q=" + std::to_string(q);
                return false;
            }
        }
    return true;
}

bool criterion_modulus(std::string& detail) {
    auto slow_binom = [](int n, int k) {
        __int128 num = 1, den = 1;
        for (int i = 0; i < k; ++i) {
            num *= n - i;
            den *= i + 1;
        }
        return static_cast<long long>(num / den);
    };
    auto slow = [&](int q, int r) {
        long long biggest = 1;
        std::vector<long long> terms;
        for (int i = 0; i < r; ++i) {
            terms.push_back(slow_binom(q - i, r - i));
            biggest = std::max(biggest, terms.back());
        }
        for (long long c = biggest;; c += biggest) {
            bool all = true;
            for (long long t : terms)
                if (c % t) all = false;
            if (all) return c;
        }
    };
    // every table entry cross-checked against the independent lcm;
    // lcm(binom(5,2), binom(4,1)) = 20
    struct Row {
        int q, r;
        long long expect;
    };
    for (auto [q, r, expect] : {Row{3, 2, 6}, Row{4, 2, 6}, Row{4, 3, 12}, Row{5, 2, 20}}) {
        if (modulus_m(q, r) != expect || slow(q, r) != expect) {
            detail = "modulus mismatch at q=" + std::to_string(q) + ",r=" + std::to_string(r);
            return false;
        }
    }
    return true;
}

bool criterion_exact(std::string& detail) {
    for (int n : {7, 9}) {
        auto g = MultiHypergraph::complete(n, 2);
        auto res = find_decomposition(g, 3);
        if (res.status != SolveStatus::Found ||
            !verify_decomposition(g, 3, *res.decomposition, all_iids(g))) {
            detail = "no verified decomposition of the complete graph on " + std::to_string(n);
            return false;
        }
    }
    for (int n : {5, 6, 8}) {
        auto res = find_decomposition(MultiHypergraph::complete(n, 2), 3);
        if (res.status != SolveStatus::Infeasible || !res.divisibility.has_value()) {
            detail = "divisibility screen missed n=" + std::to_string(n);
            return false;
        }
    }
    auto base = count_decompositions(MultiHypergraph::complete(7, 2), 3, 10000).count;
    if (base != 30) {
        detail = "count gave " + std::to_string(base);
        return false;
    }
    Rng rng(123);
    auto k7 = MultiHypergraph::complete(7, 2);
    for (int t = 0; t < 10; ++t) {
        std::vector<VertexId> perm(7);
        for (int i = 0; i < 7; ++i) perm[i] = i;
        rng.shuffle(perm);
        MultiHypergraph g(7, 2);
        for (const auto& e : k7.instances()) {
            std::vector<VertexId> verts{perm[e.verts[0]], perm[e.verts[1]]};
            std::sort(verts.begin(), verts.end());
            g.add_edge_with_iid(e.iid, verts);
        }
        if (count_decompositions(g, 3, 10000).count != base) {
            detail = "relabeling changed the count";
            return false;
        }
    }
    return true;
}

bool criterion_mrl(std::string& detail) {
    std::vector<std::vector<std::vector<VertexId>>> geometries{
        {{0, 1}, {2, 3}, {4, 5}, {6, 7}},
        {{0, 1}, {1, 2}, {2, 3}, {0, 2}},
        {{0, 1}, {0, 2}, {0, 3}, {1, 2}},
    };
    for (int q : {3, 4})
        for (const auto& supports : geometries)
            for (int a = 0; a <= 3; ++a)
                for (int b = 0; b <= 2; ++b)
                    for (int c = 0; c <= 1; ++c)
                        for (int d = 0; d <= 1; ++d) {
                            if (a + b + c + d > 6) continue;
                            MultiHypergraph x(8, 2);
                            for (int i = 0; i < a; ++i) x.add_edge(supports[0]);
                            for (int i = 0; i < b; ++i) x.add_edge(supports[1]);
                            for (int i = 0; i < c; ++i) x.add_edge(supports[2]);
                            for (int i = 0; i < d; ++i) x.add_edge(supports[3]);
                            auto rf = multiplicity_reduction(x, q);
                            auto outcome = verify_refiner(rf, q);
                            if (!outcome.ok) {
                                detail = outcome.message;
                                return false;
                            }
                        }
    return true;
}

bool criterion_concat(std::string& detail) {
    Rng rng(17);
    int built = 0;
    while (built < 100) {
        int n = 2 + static_cast<int>(rng.below(3));
        MultiHypergraph x(n, 2);
        std::vector<VertexId> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        for (auto& s : k_subsets(all, 2))
            if (rng.below(2) == 0 && x.edge_count() < 4)
                for (std::uint64_t i = 0; i <= rng.below(2); ++i) x.add_edge(s);
        if (x.edge_count() == 0) continue;
        auto r1 = multiplicity_reduction(x, 3);
        auto mid = subgraph(r1.world, r1.remainder);
        mid.reserve_iids(r1.world.next_iid());
        auto r2 = multiplicity_reduction(mid, 3);
        auto both = concat(r1, r2);
        auto outcome = verify_refiner(both, 3, VerifyOptions{10, 50, 1});
        if (!outcome.ok) {
            detail = outcome.message;
            return false;
        }
        long long d1 = family_max_degree(r1.world, r1.family);
        long long d2 = family_max_degree(r2.world, r2.family);
        if (family_max_degree(both.world, both.family) > d1 + d2) {
            detail = "family degree exceeded the sum";
            return false;
        }
        ++built;
    }
    return true;
}

bool criterion_absorber(std::string& detail) {
    auto l = MultiHypergraph::complete(3, 2);
    AbsorberConfig cfg;
    cfg.vertex_budget = 12;
    auto res = search_absorber(l, 3, cfg);
    if (res.status != AbsorberStatus::Found) {
        detail = "search did not finish";
        return false;
    }
    if (res.absorber->new_vertex_count > 12) {
        detail = "absorber used too many vertices";
        return false;
    }
    if (!audit_absorber(*res.absorber, 3)) {
        detail = "certificates failed verification";
        return false;
    }
    auto better = better_absorber(l, 3);
    if (better.status != AbsorberStatus::Found ||
        !audit_absorber(*better.absorber, 3) ||
        !audit_block_intersections(*better.absorber, 3)) {
        detail = "composed absorber failed its audits";
        return false;
    }
    return true;
}

bool criterion_omni(std::string& detail) {
    auto host = MultiHypergraph::complete(60, 2);
    Rng rng(2718);
    int successes = 0, verified = 0;
    for (int build = 0; build < 20; ++build) {
        IidSet x;
        std::set<Iid> chosen;
        int edges = 5 + static_cast<int>(rng.below(6));
        while (static_cast<int>(chosen.size()) < edges)
            chosen.insert(rng.below(host.edge_count()));
        x.assign(chosen.begin(), chosen.end());
        RefineryConfig cfg;
        cfg.seed = 1000 + build;
        try {
            auto omni = build_omni_absorber(host, x, 3, cfg);
            ++successes;
            auto outcome = verify_omni_absorber(omni, 3, VerifyOptions{12, 0, 1});
            if (!outcome.ok) {
                detail = "build " + std::to_string(build) + ": " + outcome.message;
                return false;
            }
            if (family_edge_membership(omni.world, omni.family) > cfg.c) {
                detail = "refinedness bound exceeded";
                return false;
            }
            ++verified;
        } catch (const Error& e) {
            detail += "[build " + std::to_string(build) + " failed: " + e.what() + "] ";
        }
    }
    if (successes < 18) {
        detail += "only " + std::to_string(successes) + "/20 builds succeeded";
        return false;
    }
    return verified == successes;
}

bool criterion_pipeline(std::string& detail) {
    for (int n : {7, 9, 13, 15}) {
        PipelineConfig cfg;
        cfg.strategy = Strategy::Hybrid;
        cfg.seed = 99;
        auto g = MultiHypergraph::complete(n, 2);
        auto outcome = decompose(g, 3, cfg);
        if (outcome.exit_code != 0 || !outcome.verified ||
            !verify_decomposition(g, 3, *outcome.decomposition, all_iids(g))) {
            detail = "n=" + std::to_string(n) + " failed: " + outcome.stage_trace;
            return false;
        }
    }
    return true;
}

bool criterion_embedding(std::string& detail) {
    auto host = MultiHypergraph::complete(40, 2);
    Rng rng(424242);
    std::vector<EmbedRequest> reqs;
    std::set<std::pair<int, int>> used;
    while (reqs.size() < 8) {
        int a = static_cast<int>(rng.below(40)), b = static_cast<int>(rng.below(40));
        if (a == b) continue;
        auto key = std::minmax(a, b);
        if (!used.insert(key).second) continue;
        reqs.push_back(EmbedRequest{{key.first, key.second}, 4});
    }
    EmbedConfig cfg;
    cfg.c = 64;
    auto plan = embed_partial_cliques(host, all_iids(host), reqs, cfg);
    std::set<Iid> seen;
    for (std::size_t i = 0; i < plan.blocks.size(); ++i) {
        if (plan.blocks[i].root != reqs[i].root) {
            detail = "block not rooted as requested";
            return false;
        }
        for (Iid iid : plan.blocks[i].edges)
            if (!seen.insert(iid).second) {
                detail = "blocks share an instance";
                return false;
            }
    }
    if (plan.total_max_degree > 64 * plan.request_max_degree) {
        detail = "degree audit failed";
        return false;
    }
    return true;
}

bool criterion_properties(std::string& detail) {
    Rng rng(31337);
    // link/join inversion
    for (int t = 0; t < 100; ++t) {
        int n = 4 + static_cast<int>(rng.below(4));
        MultiHypergraph g(n, 3);
        int edges = 1 + static_cast<int>(rng.below(10));
        for (int i = 0; i < edges; ++i) {
            std::set<VertexId> verts;
            while (verts.size() < 3) verts.insert(static_cast<VertexId>(rng.below(n)));
            g.add_edge({verts.begin(), verts.end()});
        }
        VertexId v = static_cast<VertexId>(rng.below(n));
        auto star = join({v}, link(g, {v}));
        for (const auto& e : star.instances())
            if (!g.has_instance(e.iid) || g.instance(e.iid).verts != e.verts) {
                detail = "link/join inversion failed";
                return false;
            }
    }
    // links of divisible graphs stay divisible
    int checked = 0;
    Rng rng2(5150);
    while (checked < 500) {
        int n = 6 + static_cast<int>(rng2.below(3));
        auto pool = MultiHypergraph::complete(n, 2);
        IidSet keep;
        for (const auto& e : pool.instances())
            if (rng2.below(2) == 0) keep.push_back(e.iid);
        auto candidate = subgraph(pool, keep);
        if (!is_divisible(candidate, 3).divisible) continue;
        for (VertexId v = 0; v < n; ++v) {
            if (degree(candidate, {v}) == 0) continue;
            if (!check_link_divisibility(candidate, 3, {v}).divisible) {
                detail = "link divisibility failed";
                return false;
            }
            ++checked;
        }
    }
    // serializer round trips
    for (int t = 0; t < 50; ++t) {
        MultiHypergraph g(5 + static_cast<int>(rng.below(4)), 2);
        int edges = static_cast<int>(rng.below(8));
        for (int i = 0; i < edges; ++i) {
            int a = static_cast<int>(rng.below(g.vertex_count()));
            int b = static_cast<int>(rng.below(g.vertex_count()));
            if (a == b) continue;
            g.add_edge({std::min(a, b), std::max(a, b)});
        }
        if (!(parse_jsonl(serialize_jsonl(g)) == g)) {
            detail = "serialization round trip failed";
            return false;
        }
    }
    // refiner leftovers are divisible
    for (int t = 0; t < 20; ++t) {
        MultiHypergraph x(4, 2);
        x.add_edge({0, 1});
        x.add_edge({0, 1});
        x.add_edge({2, 3});
        auto rf = multiplicity_reduction(x, 3);
        auto outcome = verify_refiner(rf, 3);
        if (!outcome.ok) {
            detail = "refiner leftover check failed";
            return false;
        }
    }
    return true;
}

}  // namespace

int main() {
    run(1, "robust matching layer, exhaustive", criterion_rmh);
    run(2, "gadget congruences and copy divisibility", criterion_gadgets);
    run(3, "modulus table against brute-force lcm", criterion_modulus);
    run(4, "exact-cover oracle and counting", criterion_exact);
    run(5, "multiplicity reduction, exhaustive profiles", criterion_mrl);
    run(6, "concatenation over random refiner pairs", criterion_concat);
    run(7, "absorber search and composed absorbers", criterion_absorber);
    run(8, "omni-absorber end-to-end at n=60", criterion_omni);
    run(9, "pipeline decompositions of small systems", criterion_pipeline);
    run(10, "partial-clique embedding with degree audit", criterion_embedding);
    run(11, "randomized property suite", criterion_properties);
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
