#include <algorithm>
#include <cmath>
#include <set>

#include "designs/divisibility.hpp"
#include "designs/gadgets.hpp"
#include "designs/refinery.hpp"
#include "designs/rng.hpp"

namespace designs {

namespace {

// Refiner whose members are private clique completions: one stack of
// modulus-many completions per instance, the first completing the instance
// to a clique.  Remainder: every added instance.
struct CompletionPlan {
    Iid inst;
    std::vector<VertexId> extra;  // q-r completion vertices
};

Refiner completion_refiner(const MultiHypergraph& base, const IidSet& x_iids, int q,
                           const std::vector<CompletionPlan>& plans, const IidSet& deferred) {
    const int r = base.uniformity();
    const long long m_mod = modulus_m(q, r);
    Refiner out;
    out.world = subgraph(base, x_iids);
    out.world.reserve_iids(base.next_iid());
    out.x = x_iids;

    auto member_of_inst = std::make_shared<std::map<Iid, std::size_t>>();
    for (const auto& plan : plans) {
        const std::vector<VertexId> everts = out.world.instance(plan.inst).verts;
        std::vector<VertexId> span = everts;
        span.insert(span.end(), plan.extra.begin(), plan.extra.end());
        std::sort(span.begin(), span.end());
        IidSet first;
        for (long long copy = 0; copy < m_mod; ++copy) {
            for (auto& sub : k_subsets(span, r)) {
                if (sub == everts) continue;
                Iid iid = out.world.add_edge(sub);
                out.r.push_back(iid);
                if (copy == 0) first.push_back(iid);
            }
        }
        IidSet member = first;
        member.push_back(plan.inst);
        iid_sort_unique(member);
        (*member_of_inst)[plan.inst] = out.family.size();
        out.family.push_back(std::move(member));
    }
    iid_sort_unique(out.r);
    out.remainder = iid_union(out.r, deferred);
    out.refined_bound = static_cast<double>(binomial(q, r));

    out.refine = [member_of_inst](const IidSet& l) {
        std::vector<std::size_t> idx;
        for (Iid iid : l) {
            auto it = member_of_inst->find(iid);
            if (it != member_of_inst->end()) idx.push_back(it->second);
        }
        std::sort(idx.begin(), idx.end());
        return idx;
    };
    return out;
}

Refiner trivial_refiner(const MultiHypergraph& base, const IidSet& x_iids) {
    Refiner out;
    out.world = subgraph(base, x_iids);
    out.world.reserve_iids(base.next_iid());
    out.x = x_iids;
    out.remainder = x_iids;
    out.refine = [](const IidSet&) { return std::vector<std::size_t>{}; };
    return out;
}

}  // namespace

// --- edge sparsification ------------------------------------------------------

Refiner edge_sparsify(const MultiHypergraph& x, const std::vector<VertexId>& y, int q,
                      const RefineryConfig& cfg) {
    const int r = x.uniformity();
    Refiner empty_check = trivial_refiner(x, all_iids(x));
    if (x.edge_count() == 0) {
        empty_check.remainder.clear();
        return empty_check;
    }
    const int v = x.vertex_count();
    const double v_pow = std::pow(static_cast<double>(v), 1.0 - 1.0 / r);
    int k = cfg.k_divisor > 0 ? static_cast<int>(v_pow / cfg.k_divisor)
                              : static_cast<int>(std::floor(v_pow));
    k = std::max(1, k);

    Refiner out;
    {
        auto partition = quasirandom_partition(x, k, cfg.seed, cfg.retries);
        std::vector<std::string> warnings;
        if (!partition.precondition_ok)
            warnings.push_back("partition degree precondition not met at this scale");

        auto specials = special_sets(x, partition.parts, y, q, SpecialSetsConfig{cfg.c});
        std::vector<int> part_of(v, -1);
        for (int i = 0; i < static_cast<int>(partition.parts.size()); ++i)
            for (VertexId w : partition.parts[i]) part_of[w] = i;

        std::vector<CompletionPlan> plans;
        for (const auto& e : x.instances()) {
            std::vector<int> signature;
            for (VertexId w : e.verts) signature.push_back(part_of[w]);
            std::sort(signature.begin(), signature.end());
            plans.push_back(CompletionPlan{e.iid, specials.at(signature)});
        }
        out = completion_refiner(x, all_iids(x), q, plans, {});
        out.warnings = std::move(warnings);
    }

    // reduce the focused remainder's multiplicity
    MultiHypergraph stage2_in = subgraph(out.world, out.remainder);
    stage2_in.reserve_iids(out.world.next_iid());
    Refiner mrl = multiplicity_reduction(stage2_in, q);
    Refiner combined = concat(out, mrl);

    IidSet r_all = combined.r;
    if (!is_flat(subgraph(combined.world, r_all), y, r - 1))
        throw Error("sparsified refiner lost flatness to y");
    long long fam_deg = family_max_degree(combined.world, combined.family);
    long long dx = std::max<long long>(1, max_degree(x, r - 1));
    if (fam_deg > static_cast<long long>(cfg.c) * dx)
        throw Error("sparsified family degree " + std::to_string(fam_deg) +
                    " exceeds bound " + std::to_string(static_cast<long long>(cfg.c) * dx));
    long long rem_mult = max_multiplicity(subgraph(combined.world, combined.remainder));
    if (rem_mult > modulus_m(q, r))
        throw Error("sparsified remainder multiplicity above the modulus");
    long long rem_deg = max_degree(subgraph(combined.world, combined.remainder), r - 1);
    if (static_cast<double>(rem_deg) > v_pow)
        combined.warnings.push_back("remainder degree " + std::to_string(rem_deg) +
                                    " above the asymptotic target " + std::to_string(v_pow));
    return combined;
}

// --- local refiner at a vertex (r = 2) -----------------------------------------

Refiner local_refiner_r2(const MultiHypergraph& x, VertexId s,
                         const std::vector<VertexId>& embed_verts, int q,
                         const RefineryConfig& cfg) {
    (void)cfg;
    if (x.uniformity() != 2) throw InvalidArityError("local refiner is built at r = 2");
    for (const auto& e : x.instances())
        if (!std::binary_search(e.verts.begin(), e.verts.end(), s))
            throw Error("local refiner input must be a star at s");

    Refiner out;
    out.world = x;
    out.x = all_iids(x);
    if (x.edge_count() == 0) {
        out.remainder.clear();
        out.refine = [](const IidSet&) { return std::vector<std::size_t>{}; };
        return out;
    }

    MultiHypergraph lk = link(x, {s});
    auto omni = std::make_shared<OmniAbsorber>(build_singleton_omni(lk, q - 1, embed_verts));
    const long long m_mod = modulus_m(q, 2);

    // lift the fresh singletons to edges through s
    auto lift = std::make_shared<std::map<Iid, Iid>>();
    for (Iid iid : omni->a) {
        VertexId w = omni->world.instance(iid).verts[0];
        Iid lifted = out.world.add_edge({std::min(s, w), std::max(s, w)});
        (*lift)[iid] = lifted;
        out.r.push_back(lifted);
    }

    std::set<std::size_t> base_members;
    for (std::size_t i : omni->decompose({})) base_members.insert(i);

    // member h plus one completion edge per pair of its vertices; stacks
    // behind the first completion form the remainder
    for (std::size_t h = 0; h < omni->family.size(); ++h) {
        IidSet member;
        std::vector<VertexId> w_verts;
        for (Iid iid : omni->family[h]) {
            VertexId w = omni->world.instance(iid).verts[0];
            w_verts.push_back(w);
            member.push_back(iid_contains(omni->a, iid) ? lift->at(iid) : iid);
        }
        std::sort(w_verts.begin(), w_verts.end());
        const long long stack_size = base_members.count(h) ? m_mod + 1 : m_mod;
        for (auto& pair : k_subsets(w_verts, 2)) {
            for (long long c = 0; c < stack_size; ++c) {
                Iid iid = out.world.add_edge(pair);
                out.r.push_back(iid);
                out.remainder.push_back(iid);
                if (c == 0) member.push_back(iid);
            }
        }
        iid_sort_unique(member);
        out.family.push_back(std::move(member));
    }
    iid_sort_unique(out.r);
    iid_sort_unique(out.remainder);
    out.refined_bound = 2.0 * (q - 1) + binomial(q - 1, 2);

    auto family_copy = std::make_shared<std::vector<IidSet>>(out.family);
    auto memo = std::make_shared<std::map<IidSet, std::vector<std::size_t>>>();
    OmniAbsorber* omni_raw = omni.get();
    auto keep = omni;
    out.refine = [keep, omni_raw, memo](const IidSet& l) {
        auto it = memo->find(l);
        if (it != memo->end()) return it->second;
        // the link shares instance ids with the star
        auto idx = omni_raw->decompose(l);
        std::sort(idx.begin(), idx.end());
        (*memo)[l] = idx;
        return idx;
    };
    return out;
}

VerifyOutcome verify_local_refiner(const Refiner& rf, VertexId s, int q,
                                   const VerifyOptions& opts) {
    (void)s;
    const std::size_t m = rf.x.size();
    if (m > opts.exhaustive_cap) throw Error("local verification is exhaustive only");
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
        IidSet l;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (1ULL << i)) l.push_back(rf.x[i]);
        if (l.size() % static_cast<std::size_t>(q - 1) != 0) continue;
        auto idx = rf.refine(l);
        IidSet covered;
        for (std::size_t i : idx) {
            if (i >= rf.family.size()) return {false, "invalid member index", l};
            if (!iid_disjoint(covered, rf.family[i])) return {false, "members overlap", l};
            covered = iid_union(covered, rf.family[i]);
        }
        IidSet pool = iid_union(l, rf.r);
        if (!iid_subset(covered, pool)) return {false, "refinement escapes l ∪ r", l};
        IidSet leftover = iid_difference(pool, covered);
        if (!iid_subset(leftover, rf.remainder))
            return {false, "leftover leaks outside the remainder", l};
    }
    return {};
}

// --- refine down (r = 2) --------------------------------------------------------

Refiner refine_down_r2(const MultiHypergraph& x, const std::vector<VertexId>& y, int q,
                       const RefineryConfig& cfg) {
    if (x.uniformity() != 2) throw InvalidArityError("refine down is built at r = 2");
    std::vector<VertexId> y0(y);
    std::sort(y0.begin(), y0.end());
    if (is_flat(x, y0, 0)) return trivial_refiner(x, all_iids(x));  // already inside y

    // the outer shell hosts the fresh singletons; the greedy embedding
    // needs room past its worst-case conflict count
    if (static_cast<int>(y0.size()) < 4 * (q - 1))
        throw EmbeddingFailure("refine-down target set is too small for the vortex");
    std::vector<VertexId> y1(y0.begin(), y0.begin() + y0.size() / 2);
    std::vector<VertexId> y2(y1.begin(), y1.begin() + y1.size() / 2);
    std::vector<VertexId> mid;  // y1 \ y2: completion vertices
    std::set_difference(y1.begin(), y1.end(), y2.begin(), y2.end(), std::back_inserter(mid));
    std::vector<VertexId> outer;  // y0 \ y1: singleton embedding vertices
    std::set_difference(y0.begin(), y0.end(), y1.begin(), y1.end(), std::back_inserter(outer));

    Rng rng(cfg.seed);

    // step 1: complete edges lying fully outside y1 into mid
    std::vector<CompletionPlan> plans;
    IidSet deferred;
    for (const auto& e : x.instances()) {
        int outside = 0;
        for (VertexId w : e.verts)
            if (!std::binary_search(y1.begin(), y1.end(), w)) ++outside;
        if (outside == 2) {
            std::vector<VertexId> pick;
            std::vector<VertexId> pool = mid;
            Rng sub = rng.substream("completion-" + std::to_string(e.iid));
            sub.shuffle(pool);
            pick.assign(pool.begin(), pool.begin() + (q - 2));
            std::sort(pick.begin(), pick.end());
            plans.push_back(CompletionPlan{e.iid, pick});
        } else {
            deferred.push_back(e.iid);
        }
    }
    iid_sort_unique(deferred);
    Refiner step1 = completion_refiner(x, all_iids(x), q, plans, deferred);

    // step 2: stars at vertices outside y0, links absorbed into outer
    MultiHypergraph mid_world = subgraph(step1.world, step1.remainder);
    mid_world.reserve_iids(step1.world.next_iid());
    Refiner step2;
    {
        std::map<VertexId, IidSet> stars;
        IidSet inner_deferred;
        for (Iid iid : step1.remainder) {
            const auto& verts = mid_world.instance(iid).verts;
            std::vector<VertexId> out_verts;
            for (VertexId w : verts)
                if (!std::binary_search(y0.begin(), y0.end(), w)) out_verts.push_back(w);
            if (out_verts.size() == 1)
                stars[out_verts[0]].push_back(iid);
            else if (out_verts.empty())
                inner_deferred.push_back(iid);
            else
                throw Error("refine-down invariant broken: edge still far outside");
        }
        iid_sort_unique(inner_deferred);

        step2.world = mid_world;
        step2.x = step1.remainder;
        step2.remainder = inner_deferred;
        std::vector<std::pair<VertexId, Refiner>> locals;
        for (auto& [s, star] : stars) {
            MultiHypergraph star_world = subgraph(step2.world, star);
            star_world.reserve_iids(step2.world.next_iid());
            std::vector<VertexId> embed = outer;
            Rng sub = rng.substream("local-" + std::to_string(s));
            sub.shuffle(embed);
            Refiner local = local_refiner_r2(star_world, s, embed, q, cfg);
            for (Iid iid : local.r)
                step2.world.add_edge_with_iid(iid, local.world.instance(iid).verts);
            std::size_t offset = step2.family.size();
            for (auto& member : local.family) step2.family.push_back(member);
            step2.r = iid_union(step2.r, local.r);
            step2.remainder = iid_union(step2.remainder, local.remainder);
            locals.emplace_back(s, std::move(local));
            (void)offset;
        }
        step2.refined_bound = 2.0 * (q - 1) + binomial(q - 1, 2);
        auto locals_ptr =
            std::make_shared<std::vector<std::pair<VertexId, Refiner>>>(std::move(locals));
        auto fam_sizes = std::make_shared<std::vector<std::size_t>>();
        {
            std::size_t acc = 0;
            for (auto& [_, lr] : *locals_ptr) {
                fam_sizes->push_back(acc);
                acc += lr.family.size();
            }
        }
        step2.refine = [locals_ptr, fam_sizes](const IidSet& l) {
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < locals_ptr->size(); ++j) {
                auto& [s, lr] = (*locals_ptr)[j];
                IidSet part = iid_intersection(l, lr.x);
                for (std::size_t i : lr.refine(part)) idx.push_back(i + (*fam_sizes)[j]);
            }
            std::sort(idx.begin(), idx.end());
            return idx;
        };
    }
    Refiner chain = concat(step1, step2);

    // step 3: normalize the multiplicity of what now lies inside y0
    MultiHypergraph rem_world = subgraph(chain.world, chain.remainder);
    rem_world.reserve_iids(chain.world.next_iid());
    if (max_multiplicity(rem_world) > modulus_m(q, 2)) {
        Refiner mrl = multiplicity_reduction(rem_world, q);
        chain = concat(chain, mrl);
    }

    auto rem_support = support_vertices(subgraph(chain.world, chain.remainder));
    for (VertexId w : rem_support)
        if (!std::binary_search(y0.begin(), y0.end(), w))
            throw Error("refine-down remainder escaped the target set");
    return chain;
}

// --- full multi-refiner ---------------------------------------------------------

namespace {

Refiner terminal_refiner(const MultiHypergraph& base, const IidSet& x_iids, int q,
                         const RefineryConfig& cfg) {
    const int r = base.uniformity();
    const long long m_mod = modulus_m(q, r);
    if (x_iids.size() > cfg.terminal_edge_cap)
        throw Error("terminal refiner instance count above the configured cap");
    Refiner out;
    out.world = subgraph(base, x_iids);
    out.world.reserve_iids(base.next_iid());
    out.x = x_iids;

    std::map<Iid, IidSet> stack_of;   // instance -> its modulus-stack
    std::map<Iid, Iid> star_of;       // instance -> designated stack element
    for (Iid inst : x_iids) {
        const std::vector<VertexId> verts = out.world.instance(inst).verts;
        IidSet stack;
        for (long long c = 0; c < m_mod; ++c) stack.push_back(out.world.add_edge(verts));
        iid_sort_unique(stack);
        out.r = iid_union(out.r, stack);
        star_of[inst] = stack.front();
        stack_of[inst] = std::move(stack);
    }

    auto full_members = std::make_shared<std::map<Iid, std::size_t>>();    // R_e
    auto swap_members = std::make_shared<std::map<Iid, std::size_t>>();    // e ∪ R'_e
    for (Iid inst : x_iids) {
        (*full_members)[inst] = out.family.size();
        out.family.push_back(stack_of[inst]);
        IidSet swapped = iid_difference(stack_of[inst], {star_of[inst]});
        swapped.push_back(inst);
        iid_sort_unique(swapped);
        (*swap_members)[inst] = out.family.size();
        out.family.push_back(std::move(swapped));
    }
    auto star_members = std::make_shared<std::map<IidSet, std::size_t>>();  // ⋃ e*
    for (const auto& l : divisible_subsets(out.world, x_iids, q, cfg.divisible_enum_cap)) {
        if (l.empty()) continue;
        IidSet member;
        for (Iid inst : l) member.push_back(star_of.at(inst));
        iid_sort_unique(member);
        (*star_members)[l] = out.family.size();
        out.family.push_back(std::move(member));
    }
    out.remainder.clear();
    out.refined_bound = 2.0 + static_cast<double>(star_members->size());

    IidSet x_copy = x_iids;
    out.refine = [full_members, swap_members, star_members, x_copy](const IidSet& l) {
        std::vector<std::size_t> idx;
        for (Iid inst : x_copy)
            idx.push_back(iid_contains(l, inst) ? swap_members->at(inst)
                                                : full_members->at(inst));
        if (!l.empty()) idx.push_back(star_members->at(l));
        std::sort(idx.begin(), idx.end());
        return idx;
    };
    return out;
}

}  // namespace

Refiner build_multi_refiner(const MultiHypergraph& x, const std::vector<VertexId>& y, int q,
                            const RefineryConfig& cfg) {
    if (x.uniformity() != 2)
        throw InvalidArityError("constructive multi-refiner path is built at r = 2");
    std::optional<Refiner> acc;
    MultiHypergraph world = x;
    IidSet current = all_iids(x);
    std::vector<VertexId> ys(y);
    std::sort(ys.begin(), ys.end());

    for (int round = 0; round < 32; ++round) {
        MultiHypergraph cur_sub = subgraph(world, current);
        cur_sub.reserve_iids(world.next_iid());
        auto sup = support_vertices(cur_sub);
        if (static_cast<int>(sup.size()) <= cfg.terminal_support) {
            if (cur_sub.edge_count() > cfg.terminal_edge_cap)
                throw Error("multi-refiner remainder holds " +
                            std::to_string(cur_sub.edge_count()) +
                            " instances; the terminal family would not be materializable");
            Refiner term = terminal_refiner(cur_sub, current, q, cfg);
            acc = acc ? concat(*acc, term) : std::move(term);
            break;
        }
        const int v = cur_sub.vertex_count();
        const double dense = std::pow(v, 0.5) * std::log(std::max(2, v));
        Refiner step;
        try {
            if (max_degree(cur_sub, 1) >= dense) {
                step = edge_sparsify(cur_sub, ys, q, cfg);
            } else {
                std::size_t target = std::max<std::size_t>(cfg.terminal_support, ys.size() / 2);
                std::vector<VertexId> y_small(ys.begin(),
                                              ys.begin() + std::min(ys.size(), target));
                step = refine_down_r2(cur_sub, y_small, q, cfg);
                ys = y_small;
            }
        } catch (const Error& e) {
            throw Error("multi-refiner round " + std::to_string(round) + ": " + e.what());
        }
        current = step.remainder;
        acc = acc ? concat(*acc, step) : std::move(step);
        world = acc->world;
        if (current.empty()) break;
    }
    if (!acc) acc = trivial_refiner(x, {});
    return *acc;
}

// --- fake-edge substitution ------------------------------------------------------

Refiner substitute_fake_edges(const MultiHypergraph& host, const IidSet& x_iids,
                              const Refiner& multi, int q, const RefineryConfig& cfg) {
    const int r = host.uniformity();
    if (max_multiplicity(host) > 1) throw Error("substitution host must be simple");
    if (multi.x != x_iids) throw Error("multi-refiner does not sit on the given x");
    for (Iid iid : x_iids)
        if (host.instance(iid).verts != multi.world.instance(iid).verts)
            throw Error("x instances disagree between host and refiner");

    const int per_anti = q - r;
    const int fake_extra = per_anti * static_cast<int>(binomial(q, r));

    IidSet available = iid_difference(all_iids(host), x_iids);
    std::vector<EmbedRequest> requests;
    for (Iid iid : multi.r)
        requests.push_back(EmbedRequest{multi.world.instance(iid).verts, fake_extra});
    EmbedConfig ecfg;
    ecfg.c = cfg.c;
    auto plan = embed_partial_cliques(host, available, requests, ecfg);

    auto gadget_of = std::make_shared<std::map<Iid, IidSet>>();
    IidSet r_new;
    for (std::size_t i = 0; i < multi.r.size(); ++i) {
        const auto& block = plan.blocks[i];
        std::vector<VertexId> hubs(block.new_verts.begin(), block.new_verts.begin() + per_anti);
        std::vector<VertexId> span = block.root;
        span.insert(span.end(), hubs.begin(), hubs.end());
        std::sort(span.begin(), span.end());
        std::size_t next_fresh = per_anti;
        IidSet gadget;
        for (auto& t : k_subsets(span, r)) {
            if (t == block.root) continue;
            std::vector<VertexId> fresh(block.new_verts.begin() + next_fresh,
                                        block.new_verts.begin() + next_fresh + per_anti);
            next_fresh += per_anti;
            std::vector<VertexId> local = t;
            local.insert(local.end(), fresh.begin(), fresh.end());
            std::sort(local.begin(), local.end());
            for (auto& sub : k_subsets(local, r)) {
                if (sub == t) continue;
                auto it = host.support_index().find(sub);
                if (it == host.support_index().end())
                    throw Error("fake-edge support missing from host");
                Iid hid = it->second.front();
                if (!iid_contains(block.edges, hid))
                    throw Error("fake-edge support escaped its block");
                gadget.push_back(hid);
            }
        }
        iid_sort_unique(gadget);
        r_new = iid_union(r_new, gadget);
        (*gadget_of)[multi.r[i]] = std::move(gadget);
    }

    Refiner out;
    out.world = subgraph(host, iid_union(x_iids, r_new));
    out.x = x_iids;
    out.r = r_new;
    auto map_set = [&](const IidSet& src) {
        IidSet dst;
        for (Iid iid : src) {
            if (iid_contains(x_iids, iid)) {
                dst.push_back(iid);
            } else {
                auto it = gadget_of->find(iid);
                if (it == gadget_of->end()) throw Error("unmapped refiner instance");
                dst = iid_union(dst, it->second);
            }
        }
        iid_sort_unique(dst);
        return dst;
    };
    for (const auto& member : multi.family) out.family.push_back(map_set(member));
    out.remainder = map_set(multi.remainder);
    out.refined_bound = multi.refined_bound * std::pow(static_cast<double>(q), r + 1);
    out.warnings = multi.warnings;

    for (std::size_t i = 0; i < out.family.size(); ++i)
        if (!is_divisible(subgraph(out.world, out.family[i]), q).divisible)
            throw Error("substituted member " + std::to_string(i) + " lost divisibility");

    auto inner = multi.refine;
    out.refine = [inner](const IidSet& l) { return inner(l); };
    return out;
}

// --- omni-absorber (r = 2, q = 3) -------------------------------------------------
//
// Per x-edge: a completion gadget (making e ∪ A_e a clique) and a presence
// gadget (F_e, degree +1 on every root subset).  Members: the clique
// e ∪ A_e, the divisible pair A_e ∪ F_e, and one union of presence gadgets
// per nonempty divisible subset of x.  A private absorber for every member,
// embedded through edge-disjoint partial cliques; the decomposition chooses
// the "present" certificate of selected members and the "absent" one of the
// rest.

OmniAbsorber build_omni_absorber(const MultiHypergraph& host, const IidSet& x_iids, int q,
                                 const RefineryConfig& cfg) {
    const int r = host.uniformity();
    if (r != 2 || q != 3)
        throw Error("omni-absorber construction is implemented for q = 3, r = 2");
    if (max_multiplicity(host) > 1) throw Error("omni-absorber host must be simple");

    OmniAbsorber out;
    if (x_iids.empty()) {
        out.world = MultiHypergraph(host.vertex_count(), r);
        out.decompose = [](const IidSet&) { return std::vector<std::size_t>{}; };
        return out;
    }

    auto divs = divisible_subsets(host, x_iids, q, cfg.divisible_enum_cap);

    // round 1: per-edge gadget blocks
    IidSet available = iid_difference(all_iids(host), x_iids);
    std::vector<EmbedRequest> gadget_requests;
    for (Iid iid : x_iids) {
        const auto& verts = host.instance(iid).verts;
        gadget_requests.push_back(EmbedRequest{verts, q - r});
        gadget_requests.push_back(
            EmbedRequest{verts, (q - r) * static_cast<int>(binomial(q, r))});
    }
    EmbedConfig ecfg;
    ecfg.c = cfg.c;
    auto plan1 = embed_partial_cliques(host, available, gadget_requests, ecfg);

    std::map<Iid, IidSet> anti_of, fake_of;
    for (std::size_t i = 0; i < x_iids.size(); ++i) {
        const auto& anti_block = plan1.blocks[2 * i];
        anti_of[x_iids[i]] = anti_block.edges;
        const auto& fake_block = plan1.blocks[2 * i + 1];
        std::vector<VertexId> hubs(fake_block.new_verts.begin(),
                                   fake_block.new_verts.begin() + (q - r));
        std::vector<VertexId> span = fake_block.root;
        span.insert(span.end(), hubs.begin(), hubs.end());
        std::sort(span.begin(), span.end());
        std::size_t next_fresh = q - r;
        IidSet gadget;
        for (auto& t : k_subsets(span, r)) {
            if (t == fake_block.root) continue;
            std::vector<VertexId> fresh(fake_block.new_verts.begin() + next_fresh,
                                        fake_block.new_verts.begin() + next_fresh + (q - r));
            next_fresh += q - r;
            std::vector<VertexId> local = t;
            local.insert(local.end(), fresh.begin(), fresh.end());
            std::sort(local.begin(), local.end());
            for (auto& sub : k_subsets(local, r)) {
                if (sub == t) continue;
                Iid hid = host.support_index().at(sub).front();
                gadget.push_back(hid);
            }
        }
        iid_sort_unique(gadget);
        fake_of[x_iids[i]] = std::move(gadget);
    }

    // members
    struct Member {
        IidSet edges;
        Absorber priv;
        std::vector<std::size_t> q1_blocks, q2_blocks;  // family indices
    };
    std::vector<Member> members;
    auto present_member = std::make_shared<std::map<Iid, std::size_t>>();  // e ∪ A_e
    auto absent_member = std::make_shared<std::map<Iid, std::size_t>>();   // A_e ∪ F_e
    auto union_member = std::make_shared<std::map<IidSet, std::size_t>>(); // per divisible l
    for (Iid iid : x_iids) {
        Member m;
        m.edges = iid_union(anti_of[iid], IidSet{iid});
        (*present_member)[iid] = members.size();
        members.push_back(std::move(m));
        Member n;
        n.edges = iid_union(anti_of[iid], fake_of[iid]);
        (*absent_member)[iid] = members.size();
        members.push_back(std::move(n));
    }
    for (const auto& l : divs) {
        if (l.empty()) continue;
        Member m;
        for (Iid iid : l) m.edges = iid_union(m.edges, fake_of[iid]);
        (*union_member)[l] = members.size();
        members.push_back(std::move(m));
    }

    // private absorbers per member; only the gadget edges themselves stay
    // reserved, unused block edges are released for the absorber layer
    IidSet r_all;
    for (Iid iid : x_iids) {
        r_all = iid_union(r_all, anti_of[iid]);
        r_all = iid_union(r_all, fake_of[iid]);
    }
    available = iid_difference(available, r_all);
    for (std::size_t i = 0; i < members.size(); ++i) {
        MultiHypergraph sub = subgraph(host, members[i].edges);
        auto res = search_absorber(sub, q, cfg.absorber);
        if (res.status != AbsorberStatus::Found)
            throw Error("absorber search indeterminate for member " + std::to_string(i));
        members[i].priv = std::move(*res.absorber);
        if (max_multiplicity(subgraph(members[i].priv.world, members[i].priv.a_iids)) > 1)
            throw Error("private absorber for member " + std::to_string(i) +
                        " is not simple and cannot embed");
    }

    // translate private certificates into host instances
    out.world = subgraph(host, iid_union(x_iids, r_all));
    out.x = x_iids;
    IidSet absorber_edges;
    std::map<std::size_t, std::vector<VertexId>> vertex_map_of;  // member -> new-vertex map
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (members[i].priv.new_vertex_count == 0) continue;
        EmbedConfig ecfg2;
        ecfg2.c = cfg.c;
        ecfg2.max_root = std::max(24, 4 * q * static_cast<int>(cfg.terminal_edge_cap));
        ecfg2.preference_offset = static_cast<int>((i * 7919) % host.vertex_count());
        EmbedRequest req{support_vertices(subgraph(host, members[i].edges)),
                         members[i].priv.new_vertex_count};
        auto plan2 = embed_partial_cliques(host, available, {req}, ecfg2);
        vertex_map_of[i] = plan2.blocks[0].new_verts;
        // reserve only the instances this absorber actually uses
        const auto& priv = members[i].priv;
        IidSet used;
        for (Iid iid : priv.a_iids) {
            std::vector<VertexId> mapped;
            for (VertexId v : priv.world.instance(iid).verts)
                mapped.push_back(v < priv.l_vertex_count
                                     ? v
                                     : plan2.blocks[0].new_verts[v - priv.l_vertex_count]);
            std::sort(mapped.begin(), mapped.end());
            used.push_back(host.support_index().at(mapped).front());
        }
        iid_sort_unique(used);
        available = iid_difference(available, used);
    }

    auto resolve_block = [&](const Member& m, const std::vector<VertexId>& clique,
                             const std::vector<VertexId>& new_map) {
        std::vector<VertexId> mapped;
        for (VertexId v : clique)
            mapped.push_back(v < m.priv.l_vertex_count
                                 ? v
                                 : new_map[v - m.priv.l_vertex_count]);
        std::sort(mapped.begin(), mapped.end());
        IidSet block;
        for (auto& sub : k_subsets(mapped, r)) {
            auto it = host.support_index().find(sub);
            if (it == host.support_index().end())
                throw Error("absorber block support missing from host");
            block.push_back(it->second.front());
        }
        iid_sort_unique(block);
        return block;
    };

    for (std::size_t i = 0; i < members.size(); ++i) {
        Member& m = members[i];
        std::vector<VertexId> new_map;
        if (vertex_map_of.count(i)) new_map = vertex_map_of[i];
        for (const auto& clique : m.priv.q1.cliques) {
            IidSet block = resolve_block(m, clique, new_map);
            m.q1_blocks.push_back(out.family.size());
            for (Iid iid : block)
                if (!iid_contains(m.edges, iid)) absorber_edges.push_back(iid);
            out.family.push_back(std::move(block));
        }
        for (const auto& clique : m.priv.q2.cliques) {
            IidSet block = resolve_block(m, clique, new_map);
            m.q2_blocks.push_back(out.family.size());
            for (Iid iid : block)
                if (!iid_contains(m.edges, iid)) absorber_edges.push_back(iid);
            out.family.push_back(std::move(block));
        }
    }
    iid_sort_unique(absorber_edges);
    for (Iid iid : absorber_edges)
        if (!out.world.has_instance(iid))
            out.world.add_edge_with_iid(iid, host.instance(iid).verts);
    out.a = iid_union(r_all, absorber_edges);

    auto member_q1 = std::make_shared<std::vector<std::vector<std::size_t>>>();
    auto member_q2 = std::make_shared<std::vector<std::vector<std::size_t>>>();
    for (auto& m : members) {
        member_q1->push_back(m.q1_blocks);
        member_q2->push_back(m.q2_blocks);
    }
    IidSet x_copy = x_iids;
    auto memo = std::make_shared<std::map<IidSet, std::vector<std::size_t>>>();
    out.decompose = [present_member, absent_member, union_member, member_q1, member_q2,
                     x_copy, memo](const IidSet& l) {
        auto it = memo->find(l);
        if (it != memo->end()) return it->second;
        std::set<std::size_t> chosen;
        for (Iid iid : x_copy)
            chosen.insert(iid_contains(l, iid) ? present_member->at(iid)
                                               : absent_member->at(iid));
        if (!l.empty()) {
            auto um = union_member->find(l);
            if (um == union_member->end())
                throw Error("decomposition asked for an unknown divisible subset");
            chosen.insert(um->second);
        }
        std::vector<std::size_t> idx;
        for (std::size_t m = 0; m < member_q1->size(); ++m) {
            const auto& blocks = chosen.count(m) ? (*member_q2)[m] : (*member_q1)[m];
            idx.insert(idx.end(), blocks.begin(), blocks.end());
        }
        std::sort(idx.begin(), idx.end());
        (*memo)[l] = idx;
        return idx;
    };

    // refinedness and degree audits
    long long membership = family_edge_membership(out.world, out.family);
    if (membership > static_cast<long long>(cfg.c))
        throw Error("omni family membership " + std::to_string(membership) +
                    " exceeds the configured bound");
    out.refined_bound = static_cast<double>(membership);
    const int v = host.vertex_count();
    double delta = std::max<double>(
        static_cast<double>(max_degree(subgraph(host, x_iids), r - 1)),
        std::pow(v, 1.0 - 1.0 / r) * std::log(std::max(2, v)));
    long long deg_a = max_degree(subgraph(out.world, out.a), r - 1);
    if (static_cast<double>(deg_a) > cfg.c * delta)
        throw Error("omni absorber degree " + std::to_string(deg_a) +
                    " exceeds its bound");
    return out;
}

}  // namespace designs

