#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "designs/exact_cover.hpp"
#include "designs/refinery.hpp"

namespace designs {

enum class Strategy { ExactOnly, ReserveAbsorb, Hybrid };

struct PipelineConfig {
    int q = 3;
    int r = 2;
    double p = 0.3;        // reservation probability
    double epsilon = 0.05; // host minimum-degree slack
    double sigma = 0.1;    // alternative exponent: p = n^-sigma when p <= 0
    double beta = 0.25;    // matcher codegree exponent (reporting only)
    double alpha = 0.25;   // matcher reserve-degree exponent (reporting only)
    long long d_param = 0; // matcher degree scale (reporting only)
    std::uint64_t seed = 1;
    int reserve_retries = 100;
    int match_retries = 200;
    int absorb_attempts = 5;
    long long min_extensions = 1;  // desk-scale stand-in for the extension bound
    std::uint64_t node_budget = kDefaultNodeBudget;
    Strategy strategy = Strategy::Hybrid;
    RefineryConfig refinery;
};

PipelineConfig load_pipeline_config(const std::string& path);

struct ReservationReport {
    IidSet x;
    long long max_degree = 0;          // recomputed from x
    long long min_extension_count = 0; // recomputed from x
    long long threshold = 1;
    double degree_bound = 0;
    bool degree_ok = false;
    bool extension_ok = false;
    int attempts = 0;
};

// Independent sampling with probability p, resampled until the degree bound
// and the per-edge clique-extension bound hold; report fields are always
// recomputed from the final x.
ReservationReport reserve_sample(const MultiHypergraph& g, int q, double p,
                                 std::uint64_t seed, int retries, long long threshold = 1);

struct BoostReport {
    long long vertex_count = 0;  // instances of the design hypergraph
    long long min_degree = 0;
    long long max_degree = 0;
    double mean_degree = 0;
    double window_center = 0;
    double window_halfwidth = 0;
    bool within_window = false;
    bool pruned = false;  // heuristic trim toward regularity; not part of the theory
    std::vector<std::size_t> kept_cliques;
};

BoostReport boost_stats(const MultiHypergraph& j, int q, bool prune = false);

// A-side items are 0..a_count-1.  g1 edges are cliques over A-items; g2
// edges pair one A-item with B-items.  Random-order greedy on g1, then each
// uncovered A-item finished through a reserve edge whose B-items are
// untouched; restarts until every A-item is covered.
struct ReserveMatchInstance {
    int a_count = 0;
    std::vector<std::vector<int>> g1;
    std::vector<std::pair<int, std::vector<int>>> g2;
};

struct ReserveMatching {
    std::vector<std::size_t> g1_chosen;
    std::vector<std::size_t> g2_chosen;
    int attempts = 0;
};

std::optional<ReserveMatching> greedy_match_with_reserves(const ReserveMatchInstance& inst,
                                                          std::uint64_t seed, int retries);

struct DecomposeOutcome {
    int exit_code = 1;  // 0 verified, 2 divisibility failure, 3 budgets exhausted
    std::optional<Decomposition> decomposition;
    bool verified = false;
    std::string stage_trace;
    std::optional<DivisibilityReport> divisibility;
};

DecomposeOutcome decompose(const MultiHypergraph& g, int q, const PipelineConfig& cfg);

struct ExperimentRow {
    int trial = 0;
    std::uint64_t seed = 0;
    long long x_edges = 0;
    long long x_max_degree = 0;
    long long matched = 0;
    long long unmatched = 0;
    long long reserves_used = 0;
    long long leftover_x = 0;
    bool success = false;
};

std::vector<ExperimentRow> leftover_experiment(int n, int q, int r, double p, int trials,
                                               std::uint64_t seed);
std::string experiment_csv(const std::vector<ExperimentRow>& rows);

}  // namespace designs
