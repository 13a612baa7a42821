#include "designs/refinery.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "designs/divisibility.hpp"
#include "designs/rng.hpp"

namespace designs {

namespace {

bool subset_divisible(const MultiHypergraph& world, const IidSet& l, int q) {
    return is_divisible(subgraph(world, l), q).divisible;
}

struct MemberChecks {
    bool ok = true;
    std::string message;
};

MemberChecks check_members(const MultiHypergraph& world, const std::vector<IidSet>& family,
                           const IidSet& x, const IidSet& remainder, int q) {
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& h = family[i];
        for (Iid iid : h)
            if (!world.has_instance(iid))
                return {false, "member " + std::to_string(i) + " references unknown instance"};
        if (!subset_divisible(world, h, q))
            return {false, "member " + std::to_string(i) + " is not divisible"};
        IidSet hx = iid_intersection(h, x);
        if (hx.size() > 1)
            return {false, "member " + std::to_string(i) + " holds more than one x-instance"};
        if (!iid_disjoint(hx, remainder))
            return {false, "member " + std::to_string(i) + " meets x inside the remainder"};
    }
    return {};
}

}  // namespace

long long refinement_degree(const MultiHypergraph& world, const std::vector<IidSet>& family,
                            const std::vector<VertexId>& s) {
    std::vector<VertexId> ss(s);
    std::sort(ss.begin(), ss.end());
    long long count = 0;
    for (const auto& h : family) {
        auto verts = support_vertices(world, h);
        if (std::includes(verts.begin(), verts.end(), ss.begin(), ss.end())) ++count;
    }
    return count;
}

long long family_max_degree(const MultiHypergraph& world, const std::vector<IidSet>& family) {
    const int r = world.uniformity();
    std::map<std::vector<VertexId>, long long> counts;
    for (const auto& h : family) {
        auto verts = support_vertices(world, h);
        for (auto& sub : k_subsets(verts, r - 1)) ++counts[sub];
    }
    long long best = 0;
    for (auto& [_, c] : counts) best = std::max(best, c);
    return best;
}

long long family_edge_membership(const MultiHypergraph& world,
                                 const std::vector<IidSet>& family) {
    (void)world;
    std::map<Iid, long long> counts;
    for (const auto& h : family)
        for (Iid iid : h) ++counts[iid];
    long long best = 0;
    for (auto& [_, c] : counts) best = std::max(best, c);
    return best;
}

std::vector<IidSet> divisible_subsets(const MultiHypergraph& world, const IidSet& x, int q,
                                      std::size_t cap) {
    const std::size_t m = x.size();
    if (m > 63 || (1ULL << m) > cap)
        throw Error("divisible-subset enumeration over " + std::to_string(m) +
                    " instances exceeds the cap");
    std::vector<IidSet> out;
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
        IidSet l;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (1ULL << i)) l.push_back(x[i]);
        if (subset_divisible(world, l, q)) out.push_back(std::move(l));
    }
    std::sort(out.begin(), out.end(), [](const IidSet& a, const IidSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

namespace {

// Even subgraphs of a 2-uniform multigraph: xor-combinations of fundamental
// cycles over a spanning forest.  Filtering by edge count modulo binom(q,2)
// yields divisible subsets directly when q - 1 = 2.
std::vector<IidSet> cycle_space_samples(const MultiHypergraph& world, const IidSet& x, int q,
                                        int count, Rng& rng) {
    std::map<VertexId, VertexId> uf;
    std::function<VertexId(VertexId)> find = [&](VertexId v) {
        auto it = uf.find(v);
        if (it == uf.end() || it->second == v) return v;
        return it->second = find(it->second);
    };
    std::map<VertexId, std::vector<std::pair<VertexId, Iid>>> tree;
    std::vector<IidSet> basis;
    auto tree_path = [&](VertexId from, VertexId to) {
        std::map<VertexId, std::pair<VertexId, Iid>> prev;
        std::vector<VertexId> queue{from};
        prev[from] = {from, 0};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            VertexId v = queue[head];
            if (v == to) break;
            for (auto& [w, iid] : tree[v])
                if (!prev.count(w)) {
                    prev[w] = {v, iid};
                    queue.push_back(w);
                }
        }
        IidSet path;
        for (VertexId v = to; v != from; v = prev[v].first) path.push_back(prev[v].second);
        iid_sort_unique(path);
        return path;
    };
    for (Iid iid : x) {
        const auto& verts = world.instance(iid).verts;
        VertexId a = verts[0], b = verts[1];
        VertexId ra = find(a), rb = find(b);
        if (ra != rb) {
            uf[ra] = rb;
            tree[a].emplace_back(b, iid);
            tree[b].emplace_back(a, iid);
        } else {
            IidSet cyc = tree_path(a, b);
            cyc = iid_union(cyc, IidSet{iid});
            basis.push_back(std::move(cyc));
        }
    }
    std::set<IidSet> out;
    out.insert(IidSet{});
    const long long block = binomial(q, 2);
    int tries = count * 12;
    while (tries-- > 0 && static_cast<int>(out.size()) < count) {
        IidSet acc;
        for (const auto& cyc : basis)
            if (rng.below(2) == 0) {
                IidSet both = iid_intersection(acc, cyc);
                acc = iid_difference(iid_union(acc, cyc), both);
            }
        if (static_cast<long long>(acc.size()) % block == 0) out.insert(std::move(acc));
    }
    return {out.begin(), out.end()};
}

}  // namespace

std::vector<IidSet> sample_divisible_subsets(const MultiHypergraph& world, const IidSet& x,
                                             int q, int count, std::uint64_t seed) {
    Rng rng0(seed);
    if (world.uniformity() == 2 && q == 3) {
        auto samples = cycle_space_samples(world, x, q, count, rng0);
        // keep only genuinely divisible ones (degree condition is automatic
        // for even subgraphs at q = 3; recheck anyway)
        std::vector<IidSet> checked;
        for (auto& l : samples)
            if (subset_divisible(world, l, q)) checked.push_back(std::move(l));
        if (checked.size() > 1) return checked;
    }
    std::set<IidSet> out;
    out.insert(IidSet{});
    Rng rng(seed);
    const int r = world.uniformity();

    // violation potential: number of (i, subset) residue classes off zero
    auto potential = [&](const IidSet& l) {
        MultiHypergraph sub = subgraph(world, l);
        long long bad = 0;
        for (int i = 0; i < r; ++i) {
            const long long mod = binomial(q - i, r - i);
            std::map<std::vector<VertexId>, long long> deg;
            for (const auto& e : sub.instances())
                for (auto& s : k_subsets(e.verts, i)) ++deg[s];
            for (auto& [_, d] : deg)
                if (d % mod != 0) ++bad;
        }
        return bad;
    };

    // greedy descent toward a maximal divisible subgraph from the full set
    {
        IidSet l = x;
        int guard = static_cast<int>(x.size()) + 4;
        while (guard-- > 0 && !l.empty()) {
            if (subset_divisible(world, l, q)) {
                out.insert(l);
                break;
            }
            l.pop_back();
        }
    }

    const int tries = count * 8;
    for (int t = 0; t < tries && static_cast<int>(out.size()) < count; ++t) {
        IidSet l;
        for (Iid iid : x)
            if (rng.bernoulli(0.5)) l.push_back(iid);
        long long pot = potential(l);
        int steps = static_cast<int>(x.size()) * 4;
        while (pot > 0 && steps-- > 0) {
            Iid pick = x[rng.below(x.size())];
            IidSet flipped = iid_contains(l, pick) ? iid_difference(l, {pick})
                                                   : iid_union(l, {pick});
            long long p2 = potential(flipped);
            if (p2 <= pot) {
                l = std::move(flipped);
                pot = p2;
            }
        }
        if (pot == 0) out.insert(l);
    }
    return {out.begin(), out.end()};
}

namespace {

VerifyOutcome verify_choice(const MultiHypergraph& world, const std::vector<IidSet>& family,
                            const std::vector<std::size_t>& idx, const IidSet& l,
                            const IidSet& r, const IidSet& remainder, int q, bool exact) {
    IidSet covered;
    for (std::size_t i : idx) {
        if (i >= family.size()) return {false, "refinement chose an invalid member", l};
        if (!iid_disjoint(covered, family[i]))
            return {false, "refinement members overlap", l};
        covered = iid_union(covered, family[i]);
    }
    IidSet pool = iid_union(l, r);
    if (!iid_subset(covered, pool)) return {false, "refinement escapes l ∪ r", l};
    IidSet leftover = iid_difference(pool, covered);
    if (exact) {
        if (!leftover.empty()) return {false, "decomposition missed instances", l};
        return {};
    }
    if (!iid_subset(leftover, remainder))
        return {false, "leftover leaks outside the remainder", l};
    if (!subset_divisible(world, leftover, q))
        return {false, "leftover is not divisible", l};
    return {};
}

std::vector<IidSet> enumeration_for(const MultiHypergraph& world, const IidSet& x, int q,
                                    const VerifyOptions& opts) {
    if (x.size() <= opts.exhaustive_cap)
        return divisible_subsets(world, x, q, 1ULL << (opts.exhaustive_cap + 1));
    return sample_divisible_subsets(world, x, q, opts.samples, opts.seed);
}

}  // namespace

VerifyOutcome verify_refiner(const Refiner& rf, int q, const VerifyOptions& opts) {
    auto mc = check_members(rf.world, rf.family, rf.x, rf.remainder, q);
    if (!mc.ok) return {false, mc.message, {}};
    if (!iid_subset(rf.remainder, iid_union(rf.x, rf.r)))
        return {false, "remainder escapes x ∪ r", {}};
    if (!subset_divisible(rf.world, rf.r, q)) return {false, "r is not divisible", {}};
    for (const auto& l : enumeration_for(rf.world, rf.x, q, opts)) {
        auto idx = rf.refine(l);
        auto out = verify_choice(rf.world, rf.family, idx, l, rf.r, rf.remainder, q, false);
        if (!out.ok) return out;
    }
    return {};
}

VerifyOutcome verify_omni_absorber(const OmniAbsorber& oa, int q, const VerifyOptions& opts) {
    const int r = oa.world.uniformity();
    for (std::size_t i = 0; i < oa.family.size(); ++i) {
        auto verts = support_vertices(oa.world, oa.family[i]);
        if (static_cast<int>(verts.size()) != q)
            return {false, "member " + std::to_string(i) + " is not a clique", {}};
        std::set<std::vector<VertexId>> seen;
        for (Iid iid : oa.family[i]) seen.insert(oa.world.instance(iid).verts);
        if (seen.size() != oa.family[i].size() ||
            seen.size() != static_cast<std::size_t>(binomial(q, r)))
            return {false, "member " + std::to_string(i) + " is not a clique", {}};
        IidSet hx = iid_intersection(oa.family[i], oa.x);
        if (hx.size() > 1)
            return {false, "member " + std::to_string(i) + " holds more than one x-instance", {}};
    }
    for (const auto& l : enumeration_for(oa.world, oa.x, q, opts)) {
        auto idx = oa.decompose(l);
        auto out = verify_choice(oa.world, oa.family, idx, l, oa.a, {}, q, true);
        if (!out.ok) return out;
    }
    return {};
}

// --- concatenation ----------------------------------------------------------

Refiner concat(const Refiner& r1, const Refiner& r2) {
    if (r2.x != r1.remainder)
        throw CompositionError("second refiner must refine the first one's remainder");
    for (Iid iid : r2.x)
        if (r2.world.instance(iid).verts != r1.world.instance(iid).verts)
            throw CompositionError("remainder instances disagree between the two worlds");
    Refiner out;
    out.world = r1.world;
    out.world.grow_universe(std::max(r1.world.vertex_count(), r2.world.vertex_count()));
    for (Iid iid : r2.r) out.world.add_edge_with_iid(iid, r2.world.instance(iid).verts);
    out.x = r1.x;
    out.r = iid_union(r1.r, r2.r);
    out.family = r1.family;
    out.family.insert(out.family.end(), r2.family.begin(), r2.family.end());
    out.remainder = r2.remainder;
    out.refined_bound = r1.refined_bound + r2.refined_bound;
    out.warnings = r1.warnings;
    out.warnings.insert(out.warnings.end(), r2.warnings.begin(), r2.warnings.end());

    auto fam1 = std::make_shared<std::vector<IidSet>>(r1.family);
    auto fn1 = r1.refine;
    auto fn2 = r2.refine;
    IidSet rr1 = r1.r;
    std::size_t offset = r1.family.size();
    out.refine = [fam1, fn1, fn2, rr1, offset](const IidSet& l) {
        auto idx1 = fn1(l);
        IidSet covered;
        for (std::size_t i : idx1) covered = iid_union(covered, (*fam1)[i]);
        IidSet l1 = iid_difference(iid_union(l, rr1), covered);
        auto idx2 = fn2(l1);
        std::vector<std::size_t> all = idx1;
        for (std::size_t i : idx2) all.push_back(i + offset);
        return all;
    };
    return out;
}

// --- multiplicity reduction -------------------------------------------------

Refiner multiplicity_reduction(const MultiHypergraph& x, int q) {
    const int r = x.uniformity();
    const long long m_mod = modulus_m(q, r);
    Refiner out;
    out.world = x;
    out.x = all_iids(x);
    out.refined_bound = 2.0 * static_cast<double>(m_mod);

    struct PerSupport {
        RmhInstance rmh;
        std::vector<Iid> by_position;  // 1-based position -> instance id
        std::map<std::vector<int>, std::size_t> member_of_edge;
        std::vector<Iid> x_insts;
    };
    auto table = std::make_shared<std::map<std::vector<VertexId>, PerSupport>>();

    for (const auto& [support, iids] : x.support_index()) {
        PerSupport ps;
        const int mu = static_cast<int>(iids.size());
        ps.rmh = build_rmh(static_cast<int>(m_mod), mu);
        ps.x_insts.assign(iids.begin(), iids.end());
        ps.by_position.assign(ps.rmh.vertex_count() + 1, 0);
        std::size_t next_x = 0;
        std::vector<Iid> r_new;
        for (long long i = 0; i < m_mod * mu; ++i) {
            Iid iid = out.world.add_edge(support);
            r_new.push_back(iid);
            out.r.push_back(iid);
        }
        std::size_t next_r = 0;
        for (int pos = 1; pos <= ps.rmh.vertex_count(); ++pos)
            ps.by_position[pos] = ps.rmh.is_input(pos) ? ps.x_insts[next_x++] : r_new[next_r++];
        for (int xp : ps.rmh.xprime_positions) out.remainder.push_back(ps.by_position[xp]);
        for (const auto& edge : ps.rmh.edges) {
            IidSet member;
            for (int pos : edge) member.push_back(ps.by_position[pos]);
            iid_sort_unique(member);
            ps.member_of_edge[edge] = out.family.size();
            out.family.push_back(std::move(member));
        }
        (*table)[support] = std::move(ps);
    }
    iid_sort_unique(out.r);
    iid_sort_unique(out.remainder);

    auto memo = std::make_shared<std::map<IidSet, std::vector<std::size_t>>>();
    out.refine = [table, memo](const IidSet& l) {
        auto it = memo->find(l);
        if (it != memo->end()) return it->second;
        std::vector<std::size_t> idx;
        for (auto& [support, ps] : *table) {
            std::vector<int> l_positions;
            for (int pos : ps.rmh.x_positions)
                if (iid_contains(l, ps.by_position[pos])) l_positions.push_back(pos);
            for (const auto& block : rmh_matching(ps.rmh, l_positions))
                idx.push_back(ps.member_of_edge.at(block));
        }
        std::sort(idx.begin(), idx.end());
        (*memo)[l] = idx;
        return idx;
    };

    // exact counters from the construction
    if (family_edge_membership(out.world, out.family) > 2 * m_mod)
        throw Error("multiplicity reduction exceeded its per-edge bound");
    if (family_max_degree(out.world, out.family) > 2 * m_mod * std::max<long long>(1, max_degree(x, r - 1)))
        throw Error("multiplicity reduction exceeded its family degree bound");
    return out;
}

// --- 1-uniform omni-absorber -------------------------------------------------

OmniAbsorber build_singleton_omni(const MultiHypergraph& x, int q,
                                  const std::vector<VertexId>& y) {
    if (x.uniformity() != 1) throw InvalidArityError("singleton omni needs a 1-uniform input");
    OmniAbsorber out;
    out.world = x;
    out.x = all_iids(x);
    out.refined_bound = 2.0 * q;
    const int m = static_cast<int>(x.edge_count());
    auto rmh = std::make_shared<RmhInstance>(build_rmh(q, m));

    auto host = std::make_shared<std::vector<VertexId>>(rmh->vertex_count() + 1, -1);
    std::vector<VertexId> ys(y);
    std::sort(ys.begin(), ys.end());
    for (VertexId v : ys)
        if (v < 0 || v >= x.vertex_count())
            throw Error("embedding target vertex outside the universe");

    // input positions sit on their own support vertices
    auto by_position = std::make_shared<std::vector<Iid>>(rmh->vertex_count() + 1, 0);
    {
        std::size_t next_x = 0;
        for (int pos = 1; pos <= rmh->vertex_count(); ++pos) {
            if (!rmh->is_input(pos)) continue;
            Iid iid = out.x[next_x++];
            (*by_position)[pos] = iid;
            (*host)[pos] = x.instance(iid).verts[0];
        }
    }
    // edges through each position, for the collision rule
    std::map<int, std::vector<std::size_t>> edges_at;
    for (std::size_t i = 0; i < rmh->edges.size(); ++i)
        for (int pos : rmh->edges[i]) edges_at[pos].push_back(i);

    for (int pos = 1; pos <= rmh->vertex_count(); ++pos) {
        if (rmh->is_input(pos)) continue;
        std::set<VertexId> forbidden;
        for (std::size_t ei : edges_at[pos])
            for (int other : rmh->edges[ei])
                if (other != pos && (*host)[other] >= 0) forbidden.insert((*host)[other]);
        VertexId placed = -1;
        for (VertexId v : ys)
            if (!forbidden.count(v)) {
                placed = v;
                break;
            }
        if (placed < 0) throw EmbeddingFailure("no collision-free vertex for a fresh singleton");
        (*host)[pos] = placed;
        Iid iid = out.world.add_edge({placed});
        (*by_position)[pos] = iid;
        out.a.push_back(iid);
    }
    iid_sort_unique(out.a);

    auto member_of_edge = std::make_shared<std::map<std::vector<int>, std::size_t>>();
    for (const auto& edge : rmh->edges) {
        IidSet member;
        for (int pos : edge) member.push_back((*by_position)[pos]);
        iid_sort_unique(member);
        (*member_of_edge)[edge] = out.family.size();
        out.family.push_back(std::move(member));
    }

    auto memo = std::make_shared<std::map<IidSet, std::vector<std::size_t>>>();
    out.decompose = [rmh, by_position, member_of_edge, memo](const IidSet& l) {
        auto it = memo->find(l);
        if (it != memo->end()) return it->second;
        std::vector<int> positions;
        for (int pos : rmh->x_positions)
            if (iid_contains(l, (*by_position)[pos])) positions.push_back(pos);
        if (positions.size() % static_cast<std::size_t>(rmh->q) != 0)
            throw Error("singleton omni asked to absorb a non-divisible subset");
        std::vector<std::size_t> idx;
        for (const auto& block : rmh_matching(*rmh, positions))
            idx.push_back(member_of_edge->at(block));
        std::sort(idx.begin(), idx.end());
        (*memo)[l] = idx;
        return idx;
    };
    return out;
}

// --- quasirandom partition ----------------------------------------------------

PartitionResult quasirandom_partition(const MultiHypergraph& x, int k, std::uint64_t seed,
                                      int retries) {
    if (k < 1) throw Error("partition needs k >= 1");
    const int r = x.uniformity();
    const int v = x.vertex_count();
    const long long delta = std::max<long long>(1, max_degree(x, r - 1));
    PartitionResult result;
    result.precondition_ok =
        static_cast<double>(delta) >=
        3.0 * k * (std::log(2.0 * k) + (r - 1) * std::log(std::max(2, v)));
    Rng rng(seed);
    const double part_bound = 2.0 * static_cast<double>(v) / k;
    const double link_bound = 2.0 * static_cast<double>(delta) / k;

    long long worst_part = 0, worst_link = 0;
    for (int attempt = 1; attempt <= std::max(1, retries); ++attempt) {
        result.attempts = attempt;
        std::vector<int> part_of(v);
        for (int i = 0; i < v; ++i) part_of[i] = static_cast<int>(rng.below(k));
        std::vector<long long> sizes(k, 0);
        for (int i = 0; i < v; ++i) ++sizes[part_of[i]];
        long long wp = *std::max_element(sizes.begin(), sizes.end());

        std::map<std::vector<VertexId>, std::vector<long long>> link_loads;
        for (const auto& e : x.instances())
            for (auto& sub : k_subsets(e.verts, r - 1)) {
                auto& loads = link_loads[sub];
                if (loads.empty()) loads.assign(k, 0);
                for (VertexId w : e.verts)
                    if (!std::binary_search(sub.begin(), sub.end(), w)) ++loads[part_of[w]];
            }
        long long wl = 0;
        for (auto& [_, loads] : link_loads)
            wl = std::max(wl, *std::max_element(loads.begin(), loads.end()));

        worst_part = wp;
        worst_link = wl;
        if (static_cast<double>(wp) <= part_bound && static_cast<double>(wl) <= link_bound) {
            result.parts.assign(k, {});
            for (int i = 0; i < v; ++i) result.parts[part_of[i]].push_back(i);
            result.worst_part_size = wp;
            result.worst_link_load = wl;
            return result;
        }
    }
    throw Error("quasirandom partition failed; worst part " + std::to_string(worst_part) +
                " vs " + std::to_string(part_bound) + ", worst link load " +
                std::to_string(worst_link) + " vs " + std::to_string(link_bound));
}

// --- non-uniform independent q-set ---------------------------------------------

TuranResult turan_free_qset(const BoundedHypergraph& z, int q) {
    TuranResult result;
    if (z.n < q) throw Error("turan scan needs at least q vertices");
    std::vector<long long> counts(q + 1, 0);
    for (const auto& e : z.edges) {
        if (e.empty() || static_cast<int>(e.size()) > q)
            throw Error("turan scan requires a q-bounded hypergraph");
        ++counts[e.size()];
    }
    for (int i = 1; i <= q; ++i) {
        double denom = 1;
        for (int t = 0; t < i; ++t) denom *= static_cast<double>(z.n - t) / (t + 1);
        if (counts[i] > 0)
            result.alpha += static_cast<double>(counts[i]) / denom *
                            static_cast<double>(binomial(q, i));
    }
    std::vector<std::vector<VertexId>> sorted_edges(z.edges);
    for (auto& e : sorted_edges) std::sort(e.begin(), e.end());

    std::vector<VertexId> chosen;
    std::function<bool(VertexId)> scan = [&](VertexId from) -> bool {
        if (static_cast<int>(chosen.size()) == q) return true;
        for (VertexId v = from; v < z.n; ++v) {
            bool bad = false;
            for (const auto& e : sorted_edges) {
                if (!std::binary_search(e.begin(), e.end(), v)) continue;
                bool inside = true;
                for (VertexId u : e)
                    if (u != v && !std::binary_search(chosen.begin(), chosen.end(), u)) {
                        inside = false;
                        break;
                    }
                if (inside) {
                    bad = true;
                    break;
                }
            }
            if (bad) continue;
            chosen.push_back(v);
            if (scan(v + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (scan(0)) result.qset = chosen;
    return result;
}

// --- special sets ---------------------------------------------------------------

namespace {

std::vector<std::vector<int>> multi_subsets(int k, int size) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(cur.size()) == size) {
            out.push_back(cur);
            return;
        }
        for (int i = from; i < k; ++i) {
            cur.push_back(i);
            rec(i);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

std::vector<std::vector<int>> sub_multisets(const std::vector<int>& base, int size) {
    std::set<std::vector<int>> out;
    const int n = static_cast<int>(base.size());
    std::vector<int> idx;
    std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(idx.size()) == size) {
            std::vector<int> ms;
            for (int i : idx) ms.push_back(base[i]);
            out.insert(ms);
            return;
        }
        for (int i = from; i < n; ++i) {
            idx.push_back(i);
            rec(i + 1);
            idx.pop_back();
        }
    };
    rec(0);
    return {out.begin(), out.end()};
}

}  // namespace

std::map<std::vector<int>, std::vector<VertexId>> special_sets(
    const MultiHypergraph& x, const std::vector<std::vector<VertexId>>& parts,
    const std::vector<VertexId>& y, int q, const SpecialSetsConfig& cfg) {
    const int r = x.uniformity();
    const int k = static_cast<int>(parts.size());
    const int v = x.vertex_count();
    if (q - r < 1) throw Error("special sets need q > r");
    std::vector<VertexId> ys(y);
    std::sort(ys.begin(), ys.end());

    auto cap_for = [&](int t_size) {
        double raw = cfg.c * std::pow(static_cast<double>(k), t_size + 1) /
                     std::pow(static_cast<double>(v), t_size);
        return static_cast<long long>(std::ceil(raw));
    };

    std::map<std::vector<int>, std::vector<VertexId>> chosen;
    // d(J, T) counters keyed by (part multiset, vertex subset)
    std::map<std::pair<std::vector<int>, std::vector<VertexId>>, long long> counters;

    for (const auto& index_set : multi_subsets(k, r)) {
        std::set<VertexId> blocked;
        for (int i : index_set)
            for (VertexId w : parts[i]) blocked.insert(w);
        std::vector<VertexId> pool;
        for (VertexId w : ys)
            if (!blocked.count(w)) pool.push_back(w);
        if (static_cast<int>(pool.size()) < q - r)
            throw Error("special-set pool exhausted at a part combination");

        // bad-set hypergraph over the pool
        BoundedHypergraph z;
        z.n = static_cast<int>(pool.size());
        std::map<VertexId, int> local;
        for (int i = 0; i < z.n; ++i) local[pool[i]] = i;
        // pairwise intersections stay below r-1
        for (auto& [_, s] : chosen) {
            std::vector<VertexId> inside;
            for (VertexId w : s)
                if (local.count(w)) inside.push_back(w);
            for (auto& sub : k_subsets(inside, r - 1)) {
                std::vector<VertexId> edge;
                for (VertexId w : sub) edge.push_back(local[w]);
                std::sort(edge.begin(), edge.end());
                if (!edge.empty()) z.edges.push_back(edge);
            }
        }
        // saturated load counters block their vertex sets
        for (int l = 1; l <= r - 2; ++l) {
            for (const auto& j : sub_multisets(index_set, r - 1 - l)) {
                for (auto& [key, count] : counters) {
                    if (key.first != j || static_cast<int>(key.second.size()) != l) continue;
                    if (count < cap_for(l)) continue;
                    std::vector<VertexId> edge;
                    bool in_pool = true;
                    for (VertexId w : key.second) {
                        if (!local.count(w)) {
                            in_pool = false;
                            break;
                        }
                        edge.push_back(local[w]);
                    }
                    if (!in_pool) continue;
                    std::sort(edge.begin(), edge.end());
                    z.edges.push_back(edge);
                }
            }
        }

        auto scan = turan_free_qset(z, q - r);
        if (!scan.qset) {
            std::string tag;
            for (int i : index_set) tag += std::to_string(i) + ",";
            throw Error("special-set scan stuck at part combination " + tag);
        }
        std::vector<VertexId> s;
        for (VertexId idx : *scan.qset) s.push_back(pool[idx]);
        std::sort(s.begin(), s.end());

        for (int l = 1; l <= r - 1; ++l)
            for (auto& t : k_subsets(s, l))
                for (const auto& j : sub_multisets(index_set, r - 1 - l))
                    ++counters[{j, t}];
        chosen[index_set] = std::move(s);
    }

    // recomputed audits
    for (auto& [i1, s1] : chosen)
        for (auto& [i2, s2] : chosen) {
            if (i1 >= i2) continue;
            std::vector<VertexId> inter;
            std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(),
                                  std::back_inserter(inter));
            if (static_cast<int>(inter.size()) > r - 2)
                throw Error("special sets overlap beyond the allowed bound");
        }
    return chosen;
}

}  // namespace designs
