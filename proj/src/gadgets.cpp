#include "designs/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>

#include "designs/divisibility.hpp"

namespace designs {

Gadget anti_edge(const std::vector<VertexId>& root, int q, int universe_n) {
    const int r = static_cast<int>(root.size());
    if (q <= r) throw Error("anti_edge requires q > |root|");
    Gadget g;
    g.kind = GadgetKind::AntiEdge;
    g.root = root;
    std::sort(g.root.begin(), g.root.end());
    for (int i = 0; i < q - r; ++i) g.new_verts.push_back(universe_n + i);
    g.edges = MultiHypergraph(universe_n + (q - r), r);
    std::vector<VertexId> span = g.root;
    span.insert(span.end(), g.new_verts.begin(), g.new_verts.end());
    std::sort(span.begin(), span.end());
    for (auto& sub : k_subsets(span, r))
        if (sub != g.root) g.edges.add_edge(sub);
    return g;
}

Gadget fake_edge(const std::vector<VertexId>& root, int q, int universe_n) {
    const int r = static_cast<int>(root.size());
    if (q <= r) throw Error("fake_edge requires q > |root|");
    Gadget g;
    g.kind = GadgetKind::FakeEdge;
    g.root = root;
    std::sort(g.root.begin(), g.root.end());
    std::vector<VertexId> hubs;
    for (int i = 0; i < q - r; ++i) hubs.push_back(universe_n + i);
    g.new_verts = hubs;
    std::vector<VertexId> span = g.root;
    span.insert(span.end(), hubs.begin(), hubs.end());
    std::sort(span.begin(), span.end());

    int alloc = universe_n + (q - r);
    std::vector<std::pair<std::vector<VertexId>, std::vector<VertexId>>> anti_parts;
    for (auto& sub : k_subsets(span, r)) {
        if (sub == g.root) continue;
        std::vector<VertexId> fresh;
        for (int i = 0; i < q - r; ++i) fresh.push_back(alloc++);
        g.new_verts.insert(g.new_verts.end(), fresh.begin(), fresh.end());
        anti_parts.emplace_back(sub, fresh);
    }
    g.edges = MultiHypergraph(alloc, r);
    for (auto& [t, fresh] : anti_parts) {
        std::vector<VertexId> local = t;
        local.insert(local.end(), fresh.begin(), fresh.end());
        std::sort(local.begin(), local.end());
        for (auto& sub : k_subsets(local, r))
            if (sub != t) g.edges.add_edge(sub);
    }
    return g;
}

bool check_gadget_congruences(const Gadget& g, int q) {
    const int r = static_cast<int>(g.root.size());
    const long long sign = g.kind == GadgetKind::AntiEdge ? -1 : +1;
    for (int i = 0; i < r; ++i) {
        const long long mod = binomial(q - i, r - i);
        for (auto& sub : k_subsets(g.root, i)) {
            long long d = degree(g.edges, sub);
            if (((d - sign) % mod + mod) % mod != 0) return false;
        }
    }
    return true;
}

bool m_copies_divisible(GadgetKind kind, const std::vector<VertexId>& root, int q,
                        int universe_n) {
    const int r = static_cast<int>(root.size());
    const long long m = modulus_m(q, r);
    MultiHypergraph acc;
    int alloc = universe_n;
    for (long long i = 0; i < m; ++i) {
        Gadget g = kind == GadgetKind::AntiEdge ? anti_edge(root, q, alloc)
                                                : fake_edge(root, q, alloc);
        alloc = g.edges.vertex_count();
        if (i == 0) {
            acc = g.edges;
        } else {
            acc.grow_universe(alloc);
            for (const auto& e : g.edges.instances()) acc.add_edge(e.verts);
        }
    }
    return is_divisible(acc, q).divisible;
}

namespace {

struct CounterKey {
    std::vector<VertexId> j;  // subset of a request root
    std::vector<VertexId> u;  // subset of chosen new vertices
    bool operator<(const CounterKey& o) const {
        return j != o.j ? j < o.j : u < o.u;
    }
};

}  // namespace

EmbeddingPlan embed_partial_cliques(const MultiHypergraph& host, const IidSet& available,
                                    const std::vector<EmbedRequest>& requests,
                                    const EmbedConfig& config) {
    const int r = host.uniformity();
    EmbeddingPlan plan;
    if (requests.empty()) return plan;

    int max_extra = 0;
    std::map<std::vector<VertexId>, long long> request_deg;
    for (const auto& req : requests) {
        if (static_cast<int>(req.root.size()) < r ||
            static_cast<int>(req.root.size()) > config.max_root)
            throw Error("embed request root size out of range");
        for (VertexId v : req.root)
            if (v < 0 || v >= host.vertex_count())
                throw Error("embed request root vertex outside host");
        max_extra = std::max(max_extra, req.extra_verts);
        for (auto& sub : k_subsets(req.root, r - 1)) ++request_deg[sub];
    }
    long long delta_y = 1;
    for (auto& [_, d] : request_deg) delta_y = std::max(delta_y, d);
    plan.request_max_degree = delta_y;

    long long cap = config.counter_cap_override;
    if (cap <= 0) {
        const double denom = static_cast<double>(std::max(1, max_extra)) * std::pow(2.0, r);
        cap = std::max<long long>(2, static_cast<long long>(config.c * delta_y / denom));
    }

    // Per support, the queue of still-available instances (blocks consume
    // one at a time; parallel instances may serve different blocks).
    std::map<std::vector<VertexId>, std::deque<Iid>> free_instance;
    for (const auto& [support, iids] : host.support_index())
        for (Iid iid : iids)
            if (iid_contains(available, iid)) free_instance[support].push_back(iid);

    std::map<CounterKey, long long> counters;
    std::vector<long long> new_use(host.vertex_count(), 0);

    auto support_free = [&](std::vector<VertexId> sub) {
        std::sort(sub.begin(), sub.end());
        return free_instance.count(sub) > 0;
    };

    for (std::size_t req_idx = 0; req_idx < requests.size(); ++req_idx) {
        const auto& req = requests[req_idx];
        std::vector<VertexId> root = req.root;
        std::sort(root.begin(), root.end());
        const int k = req.extra_verts;

        // least-loaded-first ordering keeps consumption spread across the
        // host instead of exhausting the low vertices
        const int n = host.vertex_count();
        auto rotated = [&](VertexId v) {
            return (v - config.preference_offset % n + n) % n;
        };
        std::vector<VertexId> pool;
        for (VertexId v = 0; v < n; ++v)
            if (!std::binary_search(root.begin(), root.end(), v)) pool.push_back(v);
        std::stable_sort(pool.begin(), pool.end(), [&](VertexId a, VertexId b) {
            return new_use[a] != new_use[b] ? new_use[a] < new_use[b]
                                            : rotated(a) < rotated(b);
        });

        std::vector<VertexId> chosen;
        std::function<bool(std::size_t)> extend = [&](std::size_t from) -> bool {
            if (static_cast<int>(chosen.size()) == k) return true;
            for (std::size_t pi = from; pi < pool.size(); ++pi) {
                VertexId v = pool[pi];
                // all new edges through v must be free host instances
                std::vector<VertexId> ground = root;
                ground.insert(ground.end(), chosen.begin(), chosen.end());
                std::sort(ground.begin(), ground.end());
                bool ok = true;
                for (auto& sub : k_subsets(ground, r - 1)) {
                    sub.push_back(v);
                    if (!support_free(sub)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    // load counters must stay below cap after this block
                    std::vector<VertexId> news = chosen;
                    news.push_back(v);
                    std::sort(news.begin(), news.end());
                    for (int l = 1; l <= r - 1 && ok; ++l) {
                        for (auto& u : k_subsets(news, l)) {
                            if (!std::binary_search(u.begin(), u.end(), v)) continue;
                            for (auto& j : k_subsets(root, r - 1 - l)) {
                                auto it = counters.find(CounterKey{j, u});
                                if (it != counters.end() && it->second >= cap - 1) {
                                    ok = false;
                                    break;
                                }
                            }
                            if (!ok) break;
                        }
                    }
                }
                if (!ok) continue;
                chosen.push_back(v);
                if (extend(pi + 1)) return true;
                chosen.pop_back();
            }
            return false;
        };

        if (!extend(0))
            throw EmbeddingFailure("no admissible vertex set for request " +
                                   std::to_string(req_idx));

        EmbeddedBlock block;
        block.root = root;
        std::sort(chosen.begin(), chosen.end());
        block.new_verts = chosen;
        for (VertexId v : chosen) ++new_use[v];
        std::vector<VertexId> span = root;
        span.insert(span.end(), chosen.begin(), chosen.end());
        std::sort(span.begin(), span.end());
        for (auto& sub : k_subsets(span, r)) {
            if (std::includes(root.begin(), root.end(), sub.begin(), sub.end())) continue;
            auto it = free_instance.find(sub);
            block.edges.push_back(it->second.front());
            it->second.pop_front();
            if (it->second.empty()) free_instance.erase(it);
        }
        iid_sort_unique(block.edges);
        for (int l = 1; l <= r - 1; ++l)
            for (auto& u : k_subsets(chosen, l))
                for (auto& j : k_subsets(root, r - 1 - l)) ++counters[CounterKey{j, u}];
        plan.total_edges = iid_union(plan.total_edges, block.edges);
        plan.blocks.push_back(std::move(block));
    }

    plan.total_max_degree = max_degree(subgraph(host, plan.total_edges), r - 1);
    if (plan.total_max_degree > static_cast<long long>(config.c) * delta_y)
        throw EmbeddingFailure("embedded blocks exceed the configured degree bound");
    return plan;
}

}  // namespace designs
