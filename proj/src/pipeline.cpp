#include "designs/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "designs/rng.hpp"

#include <json.hpp>

namespace designs {

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path);
    nlohmann::json j;
    in >> j;
    PipelineConfig cfg;
    cfg.q = j.value("q", cfg.q);
    cfg.r = j.value("r", cfg.r);
    cfg.p = j.value("p", cfg.p);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.sigma = j.value("sigma", cfg.sigma);
    cfg.beta = j.value("beta", cfg.beta);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.d_param = j.value("d_param", cfg.d_param);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.reserve_retries = j.value("reserve_retries", cfg.reserve_retries);
    cfg.match_retries = j.value("match_retries", cfg.match_retries);
    cfg.absorb_attempts = j.value("absorb_attempts", cfg.absorb_attempts);
    cfg.min_extensions = j.value("min_extensions", cfg.min_extensions);
    cfg.node_budget = j.value("node_budget", cfg.node_budget);
    std::string s = j.value("strategy", std::string("hybrid"));
    if (s == "exact-only")
        cfg.strategy = Strategy::ExactOnly;
    else if (s == "reserve-absorb")
        cfg.strategy = Strategy::ReserveAbsorb;
    else
        cfg.strategy = Strategy::Hybrid;
    return cfg;
}

namespace {

// number of q-cliques through e whose other edges all lie in x
long long extension_count(const MultiHypergraph& g, const IidSet& x, int q, Iid e) {
    const int r = g.uniformity();
    const auto& base = g.instance(e).verts;
    std::set<std::vector<VertexId>> x_supports;
    for (Iid iid : x) x_supports.insert(g.instance(iid).verts);
    std::vector<VertexId> candidates;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (!std::binary_search(base.begin(), base.end(), v)) candidates.push_back(v);
    long long count = 0;
    std::vector<VertexId> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (static_cast<int>(chosen.size()) == q - r) {
            ++count;
            return;
        }
        for (std::size_t i = from; i < candidates.size(); ++i) {
            VertexId v = candidates[i];
            std::vector<VertexId> span = base;
            span.insert(span.end(), chosen.begin(), chosen.end());
            span.push_back(v);
            std::sort(span.begin(), span.end());
            bool ok = true;
            for (auto& sub : k_subsets(span, r)) {
                if (!std::binary_search(sub.begin(), sub.end(), v)) continue;
                if (sub == base) continue;
                if (!x_supports.count(sub)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            chosen.push_back(v);
            rec(i + 1);
            chosen.pop_back();
        }
    };
    rec(0);
    return count;
}

}  // namespace

ReservationReport reserve_sample(const MultiHypergraph& g, int q, double p,
                                 std::uint64_t seed, int retries, long long threshold) {
    const int r = g.uniformity();
    Rng rng(seed);
    ReservationReport report;
    report.threshold = threshold;
    report.degree_bound = 2.0 * p * g.vertex_count();
    for (int attempt = 1; attempt <= std::max(1, retries); ++attempt) {
        report.attempts = attempt;
        IidSet x;
        for (const auto& e : g.instances())
            if (rng.bernoulli(p)) x.push_back(e.iid);
        iid_sort_unique(x);
        long long dmax = max_degree(subgraph(g, x), r - 1);
        long long min_ext = std::numeric_limits<long long>::max();
        for (const auto& e : g.instances()) {
            if (iid_contains(x, e.iid)) continue;
            min_ext = std::min(min_ext, extension_count(g, x, q, e.iid));
            if (min_ext < threshold) break;
        }
        if (min_ext == std::numeric_limits<long long>::max()) min_ext = 0;
        report.x = x;
        report.max_degree = dmax;
        report.min_extension_count = min_ext;
        report.degree_ok = static_cast<double>(dmax) <= report.degree_bound;
        report.extension_ok = min_ext >= threshold;
        if (report.degree_ok && report.extension_ok) return report;
    }
    return report;
}

BoostReport boost_stats(const MultiHypergraph& j, int q, bool prune) {
    BoostReport report;
    report.vertex_count = static_cast<long long>(j.edge_count());
    if (j.edge_count() == 0) return report;
    auto design = design_hypergraph(j, q);
    std::vector<std::size_t> kept(design.clique_nodes.size());
    std::iota(kept.begin(), kept.end(), 0);

    auto degrees = [&](const std::vector<std::size_t>& cliques) {
        std::map<Iid, long long> deg;
        for (const auto& e : j.instances()) deg[e.iid] = 0;
        std::set<std::size_t> live(cliques.begin(), cliques.end());
        for (const auto& [iid, list] : design.incidence)
            for (std::size_t c : list)
                if (live.count(c)) ++deg[iid];
        return deg;
    };
    auto fill = [&](const std::map<Iid, long long>& deg) {
        report.min_degree = std::numeric_limits<long long>::max();
        report.max_degree = 0;
        double sum = 0;
        for (auto& [_, d] : deg) {
            report.min_degree = std::min(report.min_degree, d);
            report.max_degree = std::max(report.max_degree, d);
            sum += static_cast<double>(d);
        }
        report.mean_degree = sum / static_cast<double>(deg.size());
    };
    fill(degrees(kept));

    const int r = j.uniformity();
    double v = static_cast<double>(j.vertex_count());
    double fact = 1;
    for (int i = 2; i <= q - r; ++i) fact *= i;
    report.window_center = std::pow(v, q - r) / (2.0 * fact);
    report.window_halfwidth = report.window_center * std::pow(v, -(q - r) / 3.0);
    report.within_window =
        report.max_degree <= report.window_center + report.window_halfwidth &&
        report.min_degree >= report.window_center - report.window_halfwidth;

    if (prune && report.max_degree > report.min_degree) {
        // heuristic: drop cliques at over-degree instances while the spread
        // narrows; not a step of the theory, flagged as such
        report.pruned = true;
        auto deg = degrees(kept);
        bool improved = true;
        while (improved) {
            improved = false;
            long long dmax = 0, dmin = std::numeric_limits<long long>::max();
            Iid worst = 0;
            for (auto& [iid, d] : deg) {
                if (d > dmax) {
                    dmax = d;
                    worst = iid;
                }
                dmin = std::min(dmin, d);
            }
            if (dmax - dmin <= 1) break;
            for (std::size_t pos = 0; pos < kept.size(); ++pos) {
                std::size_t c = kept[pos];
                const auto& list = design.incidence.at(worst);
                if (std::find(list.begin(), list.end(), c) == list.end()) continue;
                bool safe = true;
                for (const auto& [iid2, list2] : design.incidence)
                    if (std::find(list2.begin(), list2.end(), c) != list2.end() &&
                        deg[iid2] <= dmin) {
                        safe = false;
                        break;
                    }
                if (!safe) continue;
                kept.erase(kept.begin() + pos);
                for (auto& [iid2, list2] : design.incidence)
                    if (std::find(list2.begin(), list2.end(), c) != list2.end()) --deg[iid2];
                improved = true;
                break;
            }
        }
        fill(deg);
    }
    report.kept_cliques = kept;
    return report;
}

std::optional<ReserveMatching> greedy_match_with_reserves(const ReserveMatchInstance& inst,
                                                          std::uint64_t seed, int retries) {
    Rng rng(seed);
    for (int attempt = 1; attempt <= std::max(1, retries); ++attempt) {
        std::vector<std::size_t> order(inst.g1.size());
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        std::vector<bool> a_covered(inst.a_count, false);
        ReserveMatching matching;
        matching.attempts = attempt;
        for (std::size_t idx : order) {
            bool free = true;
            for (int a : inst.g1[idx])
                if (a_covered[a]) {
                    free = false;
                    break;
                }
            if (!free) continue;
            for (int a : inst.g1[idx]) a_covered[a] = true;
            matching.g1_chosen.push_back(idx);
        }
        std::set<int> b_used;
        bool complete = true;
        for (int a = 0; a < inst.a_count && complete; ++a) {
            if (a_covered[a]) continue;
            bool placed = false;
            for (std::size_t gi = 0; gi < inst.g2.size(); ++gi) {
                if (inst.g2[gi].first != a) continue;
                bool ok = true;
                for (int b : inst.g2[gi].second)
                    if (b_used.count(b)) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                for (int b : inst.g2[gi].second) b_used.insert(b);
                matching.g2_chosen.push_back(gi);
                a_covered[a] = true;
                placed = true;
                break;
            }
            complete = placed;
        }
        if (complete) {
            std::sort(matching.g1_chosen.begin(), matching.g1_chosen.end());
            std::sort(matching.g2_chosen.begin(), matching.g2_chosen.end());
            return matching;
        }
    }
    return std::nullopt;
}

namespace {

struct StageFailure : Error {
    using Error::Error;
};

Decomposition reserve_absorb_once(const MultiHypergraph& g, int q, const PipelineConfig& cfg,
                                  std::uint64_t seed, std::string& trace) {
    const int r = g.uniformity();
    double p = cfg.p > 0 ? cfg.p : std::pow(g.vertex_count(), -cfg.sigma);
    auto reservation = reserve_sample(g, q, p, seed, cfg.reserve_retries, cfg.min_extensions);
    if (!reservation.degree_ok || !reservation.extension_ok)
        throw StageFailure("reserve: sampling bounds not met after retries");
    trace += "reserve(e=" + std::to_string(reservation.x.size()) + ") ";

    RefineryConfig rcfg = cfg.refinery;
    rcfg.seed = seed;
    OmniAbsorber omni;
    try {
        omni = build_omni_absorber(g, reservation.x, q, rcfg);
    } catch (const Error& err) {
        throw StageFailure(std::string("omni: ") + err.what());
    }
    trace += "omni(a=" + std::to_string(omni.a.size()) + ") ";

    IidSet covered_by_omni = iid_union(reservation.x, omni.a);
    IidSet j_iids = iid_difference(all_iids(g), covered_by_omni);
    MultiHypergraph j_sub = subgraph(g, j_iids);
    auto boost = boost_stats(j_sub, q);
    trace += "boost(min=" + std::to_string(boost.min_degree) +
             ",max=" + std::to_string(boost.max_degree) + ") ";

    // matcher instance: cliques inside j, and reserve cliques with exactly
    // one edge in j and the rest in x
    MultiHypergraph jx = subgraph(g, iid_union(j_iids, reservation.x));
    auto design = design_hypergraph(jx, q);
    std::map<Iid, int> a_index;
    int a_count = 0;
    for (Iid iid : j_iids) a_index[iid] = a_count++;
    std::map<Iid, int> b_index;
    int b_count = 0;
    for (Iid iid : reservation.x) b_index[iid] = b_count++;

    ReserveMatchInstance inst;
    inst.a_count = a_count;
    std::vector<std::vector<Iid>> g1_edges, g2_edges;
    for (const auto& clique : design.clique_nodes) {
        std::vector<Iid> parts;
        int in_j = 0;
        for (auto& sub : k_subsets(clique, r)) {
            Iid iid = jx.support_index().at(sub).front();
            parts.push_back(iid);
            if (a_index.count(iid)) ++in_j;
        }
        if (in_j == static_cast<int>(parts.size())) {
            std::vector<int> items;
            for (Iid iid : parts) items.push_back(a_index[iid]);
            inst.g1.push_back(items);
            g1_edges.push_back(parts);
        } else if (in_j == 1) {
            int a_item = -1;
            std::vector<int> b_items;
            for (Iid iid : parts)
                if (a_index.count(iid))
                    a_item = a_index[iid];
                else
                    b_items.push_back(b_index[iid]);
            inst.g2.emplace_back(a_item, b_items);
            g2_edges.push_back(parts);
        }
    }
    auto matching = greedy_match_with_reserves(inst, seed ^ 0x9e37ULL, cfg.match_retries);
    if (!matching) throw StageFailure("match: residual edges after all retries");
    trace += "match(g1=" + std::to_string(matching->g1_chosen.size()) +
             ",g2=" + std::to_string(matching->g2_chosen.size()) + ") ";

    Decomposition final;
    IidSet packed;
    auto add_clique = [&](const std::vector<Iid>& parts) {
        std::size_t idx = final.cliques.size();
        final.cliques.push_back(support_vertices(g, parts));
        for (Iid iid : parts) {
            final.assignment[iid] = idx;
            packed.push_back(iid);
        }
    };
    for (std::size_t i : matching->g1_chosen) add_clique(g1_edges[i]);
    for (std::size_t i : matching->g2_chosen) add_clique(g2_edges[i]);
    iid_sort_unique(packed);

    IidSet leftover = iid_difference(reservation.x, packed);
    if (!is_divisible(subgraph(g, leftover), q).divisible)
        throw StageFailure("absorb: leftover failed the divisibility assertion");
    auto block_idx = omni.decompose(leftover);
    for (std::size_t bi : block_idx) add_clique(omni.family[bi]);
    trace += "absorb(l=" + std::to_string(leftover.size()) + ") ";
    return final;
}

}  // namespace

DecomposeOutcome decompose(const MultiHypergraph& g, int q, const PipelineConfig& cfg) {
    DecomposeOutcome outcome;
    auto report = is_divisible(g, q);
    if (!report.divisible) {
        outcome.exit_code = 2;
        outcome.divisibility = report;
        outcome.stage_trace = "divisibility";
        return outcome;
    }
    auto run_exact = [&]() {
        auto res = find_decomposition(g, q, cfg.node_budget);
        outcome.stage_trace += "exact(" +
                               std::string(res.status == SolveStatus::Found ? "found"
                                           : res.status == SolveStatus::Infeasible
                                               ? "infeasible"
                                               : "indeterminate") +
                               ") ";
        if (res.status == SolveStatus::Found) {
            outcome.decomposition = res.decomposition;
            outcome.verified = verify_decomposition(g, q, *res.decomposition, all_iids(g));
            outcome.exit_code = outcome.verified ? 0 : 1;
        } else {
            outcome.exit_code = 3;
        }
    };
    auto run_reserve = [&]() -> bool {
        for (int attempt = 0; attempt < cfg.absorb_attempts; ++attempt) {
            std::uint64_t seed = cfg.seed + 1000003ULL * attempt;
            try {
                auto d = reserve_absorb_once(g, q, cfg, seed, outcome.stage_trace);
                bool ok = verify_decomposition(g, q, d, all_iids(g));
                if (!ok) throw StageFailure("verification of the assembled decomposition");
                outcome.decomposition = std::move(d);
                outcome.verified = true;
                outcome.exit_code = 0;
                return true;
            } catch (const StageFailure& err) {
                outcome.stage_trace += std::string("[attempt failed: ") + err.what() + "] ";
            }
        }
        return false;
    };

    switch (cfg.strategy) {
        case Strategy::ExactOnly:
            run_exact();
            break;
        case Strategy::ReserveAbsorb:
            if (!run_reserve()) outcome.exit_code = 3;
            break;
        case Strategy::Hybrid:
            if (!run_reserve()) run_exact();
            break;
    }
    return outcome;
}

std::vector<ExperimentRow> leftover_experiment(int n, int q, int r, double p, int trials,
                                               std::uint64_t seed) {
    std::vector<ExperimentRow> rows;
    MultiHypergraph g = MultiHypergraph::complete(n, r);
    for (int t = 0; t < trials; ++t) {
        ExperimentRow row;
        row.trial = t;
        row.seed = seed + static_cast<std::uint64_t>(t);
        Rng rng(row.seed);
        IidSet x;
        for (const auto& e : g.instances())
            if (rng.bernoulli(p)) x.push_back(e.iid);
        iid_sort_unique(x);
        row.x_edges = static_cast<long long>(x.size());
        row.x_max_degree = max_degree(subgraph(g, x), r - 1);

        IidSet j_iids = iid_difference(all_iids(g), x);
        MultiHypergraph jx = g;
        auto design = design_hypergraph(jx, q);
        std::map<Iid, int> a_index;
        int a_count = 0;
        for (Iid iid : j_iids) a_index[iid] = a_count++;
        ReserveMatchInstance inst;
        inst.a_count = a_count;
        for (const auto& clique : design.clique_nodes) {
            std::vector<int> items;
            bool pure = true;
            int in_j = 0, a_item = -1;
            std::vector<int> b_items;
            for (auto& sub : k_subsets(clique, r)) {
                Iid iid = g.support_index().at(sub).front();
                if (a_index.count(iid)) {
                    ++in_j;
                    a_item = a_index[iid];
                    items.push_back(a_index[iid]);
                } else {
                    pure = false;
                    b_items.push_back(static_cast<int>(iid));
                }
            }
            if (pure)
                inst.g1.push_back(items);
            else if (in_j == 1)
                inst.g2.emplace_back(a_item, b_items);
        }
        // one pack-then-reserve pass, reported rather than retried
        Rng pass(row.seed ^ 0x5bd1ULL);
        std::vector<std::size_t> order(inst.g1.size());
        std::iota(order.begin(), order.end(), 0);
        pass.shuffle(order);
        std::vector<bool> a_covered(inst.a_count, false);
        for (std::size_t idx : order) {
            bool free = true;
            for (int a : inst.g1[idx])
                if (a_covered[a]) free = false;
            if (!free) continue;
            for (int a : inst.g1[idx]) a_covered[a] = true;
        }
        std::set<int> b_used;
        long long reserves = 0;
        for (int a = 0; a < inst.a_count; ++a) {
            if (a_covered[a]) continue;
            for (std::size_t gi = 0; gi < inst.g2.size(); ++gi) {
                if (inst.g2[gi].first != a) continue;
                bool ok = true;
                for (int b : inst.g2[gi].second)
                    if (b_used.count(b)) ok = false;
                if (!ok) continue;
                for (int b : inst.g2[gi].second) b_used.insert(b);
                a_covered[a] = true;
                ++reserves;
                break;
            }
        }
        long long covered = std::count(a_covered.begin(), a_covered.end(), true);
        row.matched = covered;
        row.unmatched = a_count - covered;
        row.reserves_used = reserves;
        row.leftover_x = row.x_edges - static_cast<long long>(b_used.size());
        row.success = covered == a_count;
        rows.push_back(row);
    }
    return rows;
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
    std::ostringstream out;
    out << "trial,seed,x_edges,x_max_degree,matched,unmatched,reserves_used,leftover_x,success\n";
    for (const auto& row : rows)
        out << row.trial << "," << row.seed << "," << row.x_edges << "," << row.x_max_degree
            << "," << row.matched << "," << row.unmatched << "," << row.reserves_used << ","
            << row.leftover_x << "," << (row.success ? 1 : 0) << "\n";
    return out.str();
}

}  // namespace designs
