// Command-line front end: divisibility checks, exact decomposition, gadget
// and absorber construction, refiner builds, and the end-to-end pipeline.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "designs/absorber.hpp"
#include "designs/divisibility.hpp"
#include "designs/exact_cover.hpp"
#include "designs/gadgets.hpp"
#include "designs/json_io.hpp"
#include "designs/pipeline.hpp"
#include "designs/refinery.hpp"
#include "designs/rmh.hpp"

using namespace designs;
using nlohmann::json;

namespace {

json edges_json(const MultiHypergraph& g) {
    json out = json::array();
    for (const auto& e : g.instances()) out.push_back({{"iid", e.iid}, {"verts", e.verts}});
    return out;
}

json report_json(const DivisibilityReport& report) {
    json out{{"divisible", report.divisible}};
    if (report.first_violation) {
        out["violation"] = {{"i", report.first_violation->subset_size},
                            {"subset", report.first_violation->subset},
                            {"degree", report.first_violation->degree},
                            {"modulus", report.first_violation->modulus}};
    }
    return out;
}

json decomposition_json(const Decomposition& d) {
    json out{{"cliques", d.cliques}};
    json assignment = json::array();
    for (const auto& [iid, block] : d.assignment)
        assignment.push_back({{"iid", iid}, {"clique", block}});
    out["assignment"] = assignment;
    return out;
}

json gadget_json(const Gadget& g, const char* kind) {
    return json{{"kind", kind},
                {"root", g.root},
                {"new_verts", g.new_verts},
                {"edges", edges_json(g.edges)}};
}

json absorber_json(const Absorber& a) {
    return json{{"new_vertices", a.new_vertex_count},
                {"l", a.l_iids},
                {"a", a.a_iids},
                {"world", edges_json(a.world)},
                {"q1", decomposition_json(a.q1)},
                {"q2", decomposition_json(a.q2)}};
}

std::vector<VertexId> load_vertex_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    json j;
    in >> j;
    return j.get<std::vector<VertexId>>();
}

json refiner_json(const Refiner& rf, int q) {
    json members = json::array();
    for (const auto& m : rf.family) members.push_back(m);
    json table = json::array();
    for (const auto& l : divisible_subsets(rf.world, rf.x, q, 1u << 16))
        table.push_back({{"l", l}, {"members", rf.refine(l)}});
    return json{{"world", edges_json(rf.world)}, {"x", rf.x},        {"r", rf.r},
                {"remainder", rf.remainder},     {"family", members}, {"q_table", table},
                {"warnings", rf.warnings}};
}

json omni_json(const OmniAbsorber& oa, int q) {
    json members = json::array();
    for (const auto& m : oa.family) members.push_back(m);
    json table = json::array();
    for (const auto& l : divisible_subsets(oa.world, oa.x, q, 1u << 16))
        table.push_back({{"l", l}, {"members", oa.decompose(l)}});
    return json{{"n", oa.world.vertex_count()},
                {"r", oa.world.uniformity()},
                {"q", q},
                {"world", edges_json(oa.world)},
                {"x", oa.x},
                {"a", oa.a},
                {"family", members},
                {"q_table", table}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"construction and verification toolkit for clique decompositions"};
    app.require_subcommand(1);

    // divcheck
    std::string div_file;
    int div_q = 3;
    auto* divcheck = app.add_subcommand("divcheck", "divisibility report for a hypergraph file");
    divcheck->add_option("file", div_file)->required();
    divcheck->add_option("--q", div_q)->required();

    // decompose-exact
    std::string ex_file;
    int ex_q = 3;
    bool ex_count = false;
    std::uint64_t ex_budget = kDefaultNodeBudget;
    auto* dex = app.add_subcommand("decompose-exact", "exact-cover decomposition search");
    dex->add_option("file", ex_file)->required();
    dex->add_option("--q", ex_q)->required();
    dex->add_flag("--count", ex_count);
    dex->add_option("--budget", ex_budget);

    // rmh build
    auto* rmh_cmd = app.add_subcommand("rmh", "robust matching layer");
    int rmh_q = 2, rmh_m = 2;
    bool rmh_verify = false;
    auto* rmh_build = rmh_cmd->add_subcommand("build", "construct an instance");
    rmh_build->add_option("--q", rmh_q)->required();
    rmh_build->add_option("--m", rmh_m)->required();
    rmh_build->add_flag("--verify", rmh_verify);

    // gadget
    auto* gadget_cmd = app.add_subcommand("gadget", "divisibility gadgets");
    int g_q = 3, g_r = 2;
    auto* g_anti = gadget_cmd->add_subcommand("anti", "completion gadget");
    g_anti->add_option("--q", g_q)->required();
    g_anti->add_option("--r", g_r)->required();
    auto* g_fake = gadget_cmd->add_subcommand("fake", "presence gadget");
    g_fake->add_option("--q", g_q)->required();
    g_fake->add_option("--r", g_r)->required();

    // absorber search
    auto* abs_cmd = app.add_subcommand("absorber", "absorber construction");
    std::string abs_file;
    int abs_q = 3, abs_max_new = 96;
    bool abs_better = false;
    auto* abs_search = abs_cmd->add_subcommand("search", "search for an absorber");
    abs_search->add_option("file", abs_file)->required();
    abs_search->add_option("--q", abs_q)->required();
    abs_search->add_option("--max-new", abs_max_new);
    abs_search->add_flag("--better", abs_better, "composed blocks meet the input in <= r vertices");

    // refiner
    auto* ref_cmd = app.add_subcommand("refiner", "refiner constructions");
    std::string ref_in, ref_y;
    int ref_q = 3;
    auto add_ref_sub = [&](const char* name, const char* desc) {
        auto* sub = ref_cmd->add_subcommand(name, desc);
        sub->add_option("--q", ref_q)->required();
        sub->add_option("--in", ref_in)->required();
        sub->add_option("--y", ref_y);
        return sub;
    };
    auto* ref_mrl = add_ref_sub("mrl", "multiplicity reduction");
    auto* ref_sparsify = add_ref_sub("sparsify", "private clique completions");
    auto* ref_refinedown = add_ref_sub("refinedown", "push the remainder into y");
    auto* ref_build = add_ref_sub("build", "full multi-refiner");

    // omni
    auto* omni_cmd = app.add_subcommand("omni", "omni-absorbers");
    std::string omni_in, omni_file;
    int omni_q = 3, omni_host = 0;
    auto* omni_build = omni_cmd->add_subcommand("build", "build over a complete host");
    omni_build->add_option("--in", omni_in)->required();
    omni_build->add_option("--q", omni_q)->required();
    omni_build->add_option("--host-n", omni_host, "complete host size (default: from file)");
    auto* omni_verify = omni_cmd->add_subcommand("verify", "recheck an exported certificate");
    omni_verify->add_option("file", omni_file)->required();

    // design
    auto* design_cmd = app.add_subcommand("design", "end-to-end pipeline");
    int d_n = 7, d_q = 3, d_r = 2, d_trials = 10;
    double d_p = 0.3;
    std::uint64_t d_seed = 1;
    std::string d_strategy = "hybrid", d_emit;
    auto* d_dec = design_cmd->add_subcommand("decompose", "decompose a complete host");
    d_dec->add_option("--n", d_n)->required();
    d_dec->add_option("--q", d_q)->required();
    d_dec->add_option("--r", d_r);
    d_dec->add_option("--strategy", d_strategy)
        ->check(CLI::IsMember({"exact-only", "reserve-absorb", "hybrid"}));
    d_dec->add_option("--seed", d_seed);
    d_dec->add_option("--emit", d_emit);
    auto* d_exp = design_cmd->add_subcommand("experiment", "pack-then-reserve statistics");
    d_exp->add_option("--n", d_n)->required();
    d_exp->add_option("--q", d_q)->required();
    d_exp->add_option("--r", d_r);
    d_exp->add_option("--p", d_p);
    d_exp->add_option("--trials", d_trials);
    d_exp->add_option("--seed", d_seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*divcheck) {
            auto g = load_jsonl_file(div_file);
            std::cout << report_json(is_divisible(g, div_q)).dump() << "\n";
            return 0;
        }
        if (*dex) {
            auto g = load_jsonl_file(ex_file);
            if (ex_count) {
                auto res = count_decompositions(g, ex_q, 1u << 20, ex_budget);
                std::cout << json{{"count", res.count},
                                  {"lower_bound_only", res.lower_bound_only},
                                  {"nodes", res.nodes_used}}
                                 .dump()
                          << "\n";
                return 0;
            }
            auto res = find_decomposition(g, ex_q, ex_budget);
            json out{{"nodes", res.nodes_used}};
            switch (res.status) {
                case SolveStatus::Found:
                    out["status"] = "found";
                    out["cliques"] = res.decomposition->cliques;
                    break;
                case SolveStatus::Infeasible:
                    out["status"] = "infeasible";
                    if (res.divisibility) out["divisibility"] = report_json(*res.divisibility);
                    break;
                case SolveStatus::Indeterminate:
                    out["status"] = "indeterminate";
                    break;
            }
            std::cout << out.dump() << "\n";
            return res.status == SolveStatus::Found ? 0 : res.status == SolveStatus::Infeasible ? 2 : 3;
        }
        if (*rmh_build) {
            auto inst = build_rmh(rmh_q, rmh_m);
            json out{{"q", inst.q},
                     {"m", inst.m},
                     {"vertices", inst.vertex_count()},
                     {"x", inst.x_positions},
                     {"xprime", inst.xprime_positions},
                     {"edges", inst.edges}};
            if (rmh_verify) out["verified"] = verify_rmh(inst);
            std::cout << out.dump() << "\n";
            return 0;
        }
        if (*g_anti || *g_fake) {
            std::vector<VertexId> root(g_r);
            for (int i = 0; i < g_r; ++i) root[i] = i;
            Gadget g = *g_anti ? anti_edge(root, g_q, g_r) : fake_edge(root, g_q, g_r);
            std::cout << gadget_json(g, *g_anti ? "anti_edge" : "fake_edge").dump() << "\n";
            return 0;
        }
        if (*abs_search) {
            auto l = load_jsonl_file(abs_file);
            AbsorberConfig cfg;
            cfg.vertex_budget = abs_max_new;
            auto res = abs_better ? better_absorber(l, abs_q, cfg)
                                  : search_absorber(l, abs_q, cfg);
            if (res.status != AbsorberStatus::Found) {
                std::cout << json{{"status", "indeterminate"}}.dump() << "\n";
                return 3;
            }
            json out = absorber_json(*res.absorber);
            out["status"] = "found";
            out["verified"] = audit_absorber(*res.absorber, abs_q);
            std::cout << out.dump() << "\n";
            return 0;
        }
        if (*ref_mrl || *ref_sparsify || *ref_refinedown || *ref_build) {
            auto x = load_jsonl_file(ref_in);
            std::vector<VertexId> y;
            if (!ref_y.empty()) {
                y = load_vertex_list(ref_y);
            } else {
                for (int i = 0; i < x.vertex_count(); ++i) y.push_back(i);
            }
            Refiner rf;
            if (*ref_mrl)
                rf = multiplicity_reduction(x, ref_q);
            else if (*ref_sparsify)
                rf = edge_sparsify(x, y, ref_q, {});
            else if (*ref_refinedown)
                rf = refine_down_r2(x, y, ref_q, {});
            else
                rf = build_multi_refiner(x, y, ref_q, {});
            std::cout << refiner_json(rf, ref_q).dump() << "\n";
            return 0;
        }
        if (*omni_build) {
            auto x = load_jsonl_file(omni_in);
            int n = omni_host > 0 ? omni_host : x.vertex_count();
            auto host = MultiHypergraph::complete(n, x.uniformity());
            IidSet x_iids;
            for (const auto& e : x.instances())
                x_iids.push_back(host.support_index().at(e.verts).front());
            iid_sort_unique(x_iids);
            auto omni = build_omni_absorber(host, x_iids, omni_q, {});
            std::cout << omni_json(omni, omni_q).dump() << "\n";
            return 0;
        }
        if (*omni_verify) {
            std::ifstream in(omni_file);
            if (!in) throw Error("cannot open " + omni_file);
            json j;
            in >> j;
            const int q = j.at("q").get<int>();
            MultiHypergraph world(j.at("n").get<int>(), j.at("r").get<int>());
            for (const auto& e : j.at("world"))
                world.add_edge_with_iid(e.at("iid").get<Iid>(),
                                        e.at("verts").get<std::vector<VertexId>>());
            IidSet x = j.at("x").get<IidSet>();
            IidSet a = j.at("a").get<IidSet>();
            std::vector<IidSet> family;
            for (const auto& m : j.at("family")) family.push_back(m.get<IidSet>());
            std::map<IidSet, std::vector<std::size_t>> table;
            for (const auto& row : j.at("q_table"))
                table[row.at("l").get<IidSet>()] =
                    row.at("members").get<std::vector<std::size_t>>();
            OmniAbsorber oa;
            oa.world = world;
            oa.x = x;
            oa.a = a;
            oa.family = family;
            oa.decompose = [table](const IidSet& l) {
                auto it = table.find(l);
                if (it == table.end()) throw Error("certificate table is missing a subset");
                return it->second;
            };
            auto outcome = verify_omni_absorber(oa, q);
            std::cout << json{{"verified", outcome.ok}, {"message", outcome.message}}.dump()
                      << "\n";
            return outcome.ok ? 0 : 1;
        }
        if (*d_dec) {
            PipelineConfig cfg;
            if (const char* path = std::getenv("DESIGNS_CONFIG"))
                cfg = load_pipeline_config(path);
            cfg.q = d_q;
            cfg.r = d_r;
            cfg.seed = d_seed;
            if (d_strategy == "exact-only")
                cfg.strategy = Strategy::ExactOnly;
            else if (d_strategy == "reserve-absorb")
                cfg.strategy = Strategy::ReserveAbsorb;
            else
                cfg.strategy = Strategy::Hybrid;
            auto g = MultiHypergraph::complete(d_n, d_r);
            auto outcome = decompose(g, d_q, cfg);
            json out{{"n", d_n},
                     {"q", d_q},
                     {"strategy", d_strategy},
                     {"exit_code", outcome.exit_code},
                     {"verified", outcome.verified},
                     {"stages", outcome.stage_trace}};
            if (outcome.decomposition) out["cliques"] = outcome.decomposition->cliques;
            if (outcome.divisibility) out["divisibility"] = report_json(*outcome.divisibility);
            if (!d_emit.empty()) {
                std::ofstream emit(d_emit);
                emit << out.dump(2) << "\n";
            }
            std::cout << out.dump() << "\n";
            return outcome.exit_code;
        }
        if (*d_exp) {
            auto rows = leftover_experiment(d_n, d_q, d_r, d_p, d_trials, d_seed);
            std::cout << experiment_csv(rows);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
