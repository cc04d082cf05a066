#ifndef DUFS_EXPERIMENT_HPP
#define DUFS_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dufs/analysis.hpp"
#include "dufs/estimate.hpp"
#include "dufs/graph.hpp"
#include "dufs/walk.hpp"

namespace dufs {

struct GeneratorSpec {
    std::size_t nodes = 0;
    double beta = 2.0;
    std::uint32_t max_degree = 100;
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    std::string name = "run";
    std::string graph_path;                    // either a file...
    std::optional<GeneratorSpec> generator;    // ...or a generator spec
    std::string attributes_path;
    bool use_lcc = false;

    std::string method = "dufs";      // dufs | fs | durw | single-rw | multi-rw | uniform-node
    std::string estimator = "hybrid"; // edge | hybrid | hybrid-norule | hybrid-mle | hybrid-em | mvue
    Scenario scenario = Scenario::Visible;
    Placement placement = Placement::Uniform;
    LabelKind label_kind = LabelKind::OutDegree;

    double budget_fraction = 0.1;
    double budget_per_walker = 10.0;  // b
    std::int64_t uniform_cost = 1;    // c
    double jump_weight = 1.0;         // w

    std::size_t runs = 200;           // R
    std::uint64_t base_seed = 1;
    std::size_t workers = 0;          // 0 = hardware concurrency

    std::string output_dir = "results";

    void validate() const;
    std::int64_t budget_for(const DirectedGraph& g) const;
};

/// Table of (w, b) presets keyed by "table2-{head|tail}" together with
/// uniform cost and in-edge visibility.
std::pair<double, double> table2_preset(const std::string& goal, std::int64_t uniform_cost,
                                        Scenario scenario);

/// key = value config file; lines starting with '#' are comments, '[name]'
/// opens a new run section inheriting earlier top-level keys.
std::vector<ExperimentConfig> parse_config_file(const std::string& path);
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<Estimate> estimates;  // one per run, in run order
    NrmseReport nrmse;
    GroundTruth truth;
    std::int64_t budget = 0;
};

DirectedGraph load_experiment_graph(const ExperimentConfig& cfg);

Estimate estimate_from_log(const SampleLog& log, const std::string& estimator, LabelKind kind,
                           double true_mean_degree);

/// R independent runs with seeds base+r, replication-level parallelism,
/// deterministic merge by run index. Writes estimates.csv, nrmse.csv,
/// plotspec.json and manifest.json under cfg.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const DirectedGraph& g);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Joined per-label NRMSE table across configs sharing a graph, with ratio
/// columns against the first config. Returns the CSV text.
std::string run_grid(const std::vector<ExperimentConfig>& cfgs);

/// Bisection on DURW's jump weight so its mean uniform-draw count matches
/// the given DUFS configuration within rel_tol, estimated over
/// calibration_runs Monte Carlo runs per probe.
double calibrate_durw_jump_weight(const DirectedGraph& g, const WalkConfig& dufs_cfg,
                                  std::size_t calibration_runs = 200, double rel_tol = 0.01);

std::uint64_t fnv1a_hash(const std::string& data);
std::uint64_t graph_hash(const DirectedGraph& g);
std::string config_canonical_string(const ExperimentConfig& cfg);

}  // namespace dufs

#endif
