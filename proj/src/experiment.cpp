#include "dufs/experiment.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace dufs {

namespace {

const char* kToolVersion = "1.0.0";

const std::set<std::string> kMethods = {"dufs", "fs",       "durw",
                                        "single-rw", "multi-rw", "uniform-node"};
const std::set<std::string> kEstimators = {"edge",       "hybrid",    "hybrid-norule",
                                           "hybrid-mle", "hybrid-em", "mvue"};

bool degree_label_kind(LabelKind kind) {
    return kind == LabelKind::OutDegree || kind == LabelKind::InDegree ||
           kind == LabelKind::UndirectedDegree;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (graph_path.empty() == !generator.has_value())
        throw ConfigError("exactly one graph source (path or generator) is required");
    if (generator && (generator->nodes == 0 || generator->beta <= 1.0 || generator->max_degree < 1))
        throw ConfigError("generator needs nodes >= 1, beta > 1, max_degree >= 1");
    if (!kMethods.count(method)) throw ConfigError("unknown method: " + method);
    if (!kEstimators.count(estimator)) throw ConfigError("unknown estimator: " + estimator);
    if (budget_per_walker < 0) throw ConfigError("b must be >= 0");
    if (jump_weight < 0) throw ConfigError("w must be >= 0");
    if (uniform_cost < 1) throw ConfigError("c must be >= 1");
    if (budget_fraction <= 0 || budget_fraction > 1)
        throw ConfigError("budget_fraction must be in (0, 1]");
    if (runs < 1) throw ConfigError("runs must be >= 1");
    if (estimator == "mvue" && !degree_label_kind(label_kind))
        throw ConfigError("mvue requires a degree label kind");
    if (estimator != "edge" && placement != Placement::Uniform)
        throw ConfigError("hybrid-family estimators require uniform placement");
    if (method == "durw" && label_kind == LabelKind::Attribute && attributes_path.empty()) {
        // attributes may still come from the graph file side channel; checked at load
    }
}

std::int64_t ExperimentConfig::budget_for(const DirectedGraph& g) const {
    auto b = static_cast<std::int64_t>(
        std::llround(budget_fraction * static_cast<double>(g.node_count())));
    return std::max<std::int64_t>(b, 1);
}

std::pair<double, double> table2_preset(const std::string& goal, std::int64_t uniform_cost,
                                        Scenario scenario) {
    bool head;
    if (goal == "table2-head" || goal == "head")
        head = true;
    else if (goal == "table2-tail" || goal == "tail")
        head = false;
    else
        throw ConfigError("unknown preset goal: " + goal);
    bool visible = scenario == Scenario::Visible;
    if (uniform_cost == 1) {
        if (head) return {10.0, 1.0};
        return {1.0, 10.0};
    }
    if (uniform_cost == 10) {
        if (head) return visible ? std::pair{1.0, 100.0} : std::pair{10.0, 1.0};
        return visible ? std::pair{0.1, 1000.0} : std::pair{0.1, 10.0};
    }
    throw ConfigError("presets are defined for c = 1 and c = 10 only");
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    auto to_u64 = [&](const std::string& v) { return std::stoull(v); };
    auto to_i64 = [&](const std::string& v) { return std::stoll(v); };
    auto to_d = [&](const std::string& v) { return std::stod(v); };
    auto to_bool = [&](const std::string& v) {
        if (v == "1" || v == "true" || v == "yes") return true;
        if (v == "0" || v == "false" || v == "no") return false;
        throw ConfigError("bad boolean: " + v);
    };
    try {
        if (key == "name") cfg.name = value;
        else if (key == "graph") cfg.graph_path = value;
        else if (key == "attributes") cfg.attributes_path = value;
        else if (key == "lcc") cfg.use_lcc = to_bool(value);
        else if (key == "gen_nodes") { if (!cfg.generator) cfg.generator.emplace(); cfg.generator->nodes = to_u64(value); }
        else if (key == "gen_beta") { if (!cfg.generator) cfg.generator.emplace(); cfg.generator->beta = to_d(value); }
        else if (key == "gen_max_degree") { if (!cfg.generator) cfg.generator.emplace(); cfg.generator->max_degree = static_cast<std::uint32_t>(to_u64(value)); }
        else if (key == "gen_seed") { if (!cfg.generator) cfg.generator.emplace(); cfg.generator->seed = to_u64(value); }
        else if (key == "method") cfg.method = value;
        else if (key == "estimator") cfg.estimator = value;
        else if (key == "scenario") cfg.scenario = parse_scenario(value);
        else if (key == "placement") cfg.placement = parse_placement(value);
        else if (key == "label_kind" || key == "label") cfg.label_kind = parse_label_kind(value);
        else if (key == "budget_fraction") cfg.budget_fraction = to_d(value);
        else if (key == "b") cfg.budget_per_walker = to_d(value);
        else if (key == "c") cfg.uniform_cost = to_i64(value);
        else if (key == "w") cfg.jump_weight = to_d(value);
        else if (key == "preset") {
            auto [w, b] = table2_preset(value, cfg.uniform_cost, cfg.scenario);
            cfg.jump_weight = w;
            cfg.budget_per_walker = b;
        }
        else if (key == "runs") cfg.runs = to_u64(value);
        else if (key == "seed") cfg.base_seed = to_u64(value);
        else if (key == "workers") cfg.workers = to_u64(value);
        else if (key == "output") cfg.output_dir = value;
        else throw ConfigError("unknown config key: " + key);
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad value for " + key + ": " + value);
    } catch (const std::out_of_range&) {
        throw ConfigError("bad value for " + key + ": " + value);
    }
}

std::vector<ExperimentConfig> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    ExperimentConfig base;
    std::vector<ExperimentConfig> sections;
    bool in_section = false;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        auto a = s.find_first_not_of(" \t\r");
        auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            sections.push_back(base);
            sections.back().name = trim(t.substr(1, t.size() - 2));
            in_section = true;
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        apply_override(in_section ? sections.back() : base, key, value);
    }
    if (!in_section) sections.push_back(base);
    return sections;
}

DirectedGraph load_experiment_graph(const ExperimentConfig& cfg) {
    DirectedGraph g = cfg.generator
        ? generate_powerlaw_digraph(cfg.generator->nodes, cfg.generator->beta,
                                    cfg.generator->max_degree, cfg.generator->seed)
        : load_snap_edgelist(cfg.graph_path);
    if (cfg.use_lcc) g = largest_scc(g);
    if (!cfg.attributes_path.empty()) load_attributes(g, cfg.attributes_path);
    if (cfg.label_kind == LabelKind::Attribute && !g.has_labels())
        throw ConfigError("attribute label kind needs an attribute file");
    return g;
}

Estimate estimate_from_log(const SampleLog& log, const std::string& estimator, LabelKind kind,
                           double true_mean_degree) {
    if (estimator == "edge") return edge_based_estimate(log, kind);
    HybridSummary s = summarize(log, kind);
    if (estimator == "hybrid") return apply_variance_reduction(hybrid_nonrecursive(s), s);
    if (estimator == "hybrid-norule") return hybrid_nonrecursive(s);
    if (estimator == "hybrid-mle") return apply_variance_reduction(hybrid_mle_gradient(s), s);
    if (estimator == "hybrid-em") return apply_variance_reduction(hybrid_mle_em(s), s);
    if (estimator == "mvue") return mvue_degree_estimate(s, true_mean_degree);
    throw ConfigError("unknown estimator: " + estimator);
}

std::uint64_t fnv1a_hash(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t graph_hash(const DirectedGraph& g) {
    std::string buf;
    buf.reserve(g.edge_count() * 16 + 16);
    buf += std::to_string(g.node_count());
    buf += ';';
    for (const auto& [u, v] : g.edges()) {
        buf += std::to_string(u);
        buf += '>';
        buf += std::to_string(v);
        buf += ';';
    }
    return fnv1a_hash(buf);
}

std::string config_canonical_string(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "name=" << cfg.name << ";graph=" << cfg.graph_path;
    if (cfg.generator)
        out << ";gen=" << cfg.generator->nodes << ',' << cfg.generator->beta << ','
            << cfg.generator->max_degree << ',' << cfg.generator->seed;
    out << ";attributes=" << cfg.attributes_path << ";lcc=" << cfg.use_lcc
        << ";method=" << cfg.method << ";estimator=" << cfg.estimator
        << ";scenario=" << scenario_name(cfg.scenario)
        << ";placement=" << placement_name(cfg.placement)
        << ";label_kind=" << label_kind_name(cfg.label_kind)
        << ";budget_fraction=" << cfg.budget_fraction << ";b=" << cfg.budget_per_walker
        << ";c=" << cfg.uniform_cost << ";w=" << cfg.jump_weight << ";runs=" << cfg.runs
        << ";seed=" << cfg.base_seed;
    return out.str();
}

namespace {

struct RunOutcome {
    Estimate estimate;
    bool ok = false;
    std::string error;
};

void write_manifest(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                    const DirectedGraph& g, std::int64_t budget,
                    const std::vector<std::string>& errors) {
    nlohmann::json m;
    m["tool_version"] = kToolVersion;
    m["name"] = cfg.name;
    m["config"] = config_canonical_string(cfg);
    m["config_hash"] = fnv1a_hash(config_canonical_string(cfg));
    m["graph_hash"] = graph_hash(g);
    m["graph_nodes"] = g.node_count();
    m["graph_edges"] = g.edge_count();
    m["budget"] = budget;
    m["runs"] = cfg.runs;
    m["workers_requested"] = cfg.workers;
    m["status"] = errors.empty() ? "ok" : "failed";
    if (!errors.empty()) m["errors"] = errors;
    std::ofstream out(dir / "manifest.json");
    out << m.dump(2) << '\n';
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const DirectedGraph& g) {
    cfg.validate();
    const std::int64_t budget = cfg.budget_for(g);
    GroundTruth truth = ground_truth(g, cfg.label_kind);

    std::vector<RunOutcome> outcomes(cfg.runs);
    std::size_t workers = cfg.workers > 0 ? cfg.workers : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min(workers, cfg.runs);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t r = next.fetch_add(1);
            if (r >= cfg.runs) return;
            try {
                WalkConfig wc;
                wc.budget = budget;
                wc.budget_per_walker = cfg.budget_per_walker;
                wc.uniform_cost = cfg.uniform_cost;
                wc.jump_weight = cfg.jump_weight;
                wc.scenario = cfg.scenario;
                wc.placement = cfg.placement;
                wc.seed = cfg.base_seed + r;
                SampleLog log = run_method(cfg.method, g, wc);
                outcomes[r].estimate =
                    estimate_from_log(log, cfg.estimator, cfg.label_kind,
                                      truth.mean_undirected_degree);
                outcomes[r].ok = true;
            } catch (const std::exception& e) {
                outcomes[r].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<Estimate> completed;
    std::vector<std::string> errors;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        if (outcomes[r].ok)
            completed.push_back(std::move(outcomes[r].estimate));
        else
            errors.push_back("run " + std::to_string(r) + ": " + outcomes[r].error);
    }

    std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "estimates.csv");
        write_estimate_csv(out, completed);
    }
    if (!completed.empty()) {
        std::ofstream out(dir / "nrmse.csv");
        write_nrmse_csv(out, empirical_nrmse(completed, truth), cfg.estimator);
    }
    {
        std::ofstream out(dir / "plotspec.json");
        out << plotspec_json(cfg.label_kind) << '\n';
    }
    write_manifest(dir, cfg, g, budget, errors);
    if (!errors.empty()) throw DataError("experiment failed: " + errors.front());

    ExperimentResult result;
    result.config = cfg;
    result.estimates = std::move(completed);
    result.nrmse = empirical_nrmse(result.estimates, truth);
    result.truth = std::move(truth);
    result.budget = budget;
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    return run_experiment(cfg, load_experiment_graph(cfg));
}

std::string run_grid(const std::vector<ExperimentConfig>& cfgs) {
    if (cfgs.empty()) throw ConfigError("grid needs at least one config");
    auto graph_key = [](const ExperimentConfig& c) {
        std::string k = c.graph_path;
        if (c.generator)
            k += "|gen:" + std::to_string(c.generator->nodes) + "," +
                 std::to_string(c.generator->beta) + "," + std::to_string(c.generator->max_degree) +
                 "," + std::to_string(c.generator->seed);
        k += "|lcc:" + std::to_string(c.use_lcc) + "|attr:" + c.attributes_path;
        return k;
    };
    for (const auto& c : cfgs) {
        if (graph_key(c) != graph_key(cfgs.front()))
            throw ConfigError("grid configs must share a graph");
        if (c.label_kind != cfgs.front().label_kind)
            throw ConfigError("grid configs must share a label kind");
    }
    DirectedGraph g = load_experiment_graph(cfgs.front());

    std::vector<ExperimentResult> results;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        ExperimentConfig c = cfgs[i];
        if (c.name == "run") c.name = "cfg" + std::to_string(i);
        c.output_dir = (std::filesystem::path(cfgs.front().output_dir) / c.name).string();
        results.push_back(run_experiment(c, g));
    }

    std::set<Label, LabelLess> labels;
    for (const auto& r : results)
        for (const auto& [label, v] : r.nrmse.per_label_nrmse) labels.insert(label);

    std::ostringstream out;
    out.precision(17);
    out << "label";
    for (const auto& r : results) out << ",nrmse_" << r.config.name;
    for (std::size_t i = 1; i < results.size(); ++i)
        out << ",ratio_" << results[i].config.name;
    out << '\n';
    for (const auto& label : labels) {
        out << '"' << label << '"';
        std::vector<double> vals;
        for (const auto& r : results) {
            auto it = r.nrmse.per_label_nrmse.find(label);
            double v = it == r.nrmse.per_label_nrmse.end() ? std::nan("") : it->second;
            vals.push_back(v);
            out << ',';
            if (!std::isnan(v)) out << v;
        }
        for (std::size_t i = 1; i < vals.size(); ++i) {
            out << ',';
            if (!std::isnan(vals[i]) && !std::isnan(vals[0]) && vals[0] > 0)
                out << vals[i] / vals[0];
        }
        out << '\n';
    }
    return out.str();
}

double calibrate_durw_jump_weight(const DirectedGraph& g, const WalkConfig& dufs_cfg,
                                  std::size_t calibration_runs, double rel_tol) {
    if (calibration_runs == 0) throw ConfigError("calibration needs at least one run");
    auto draws_of = [](const SampleLog& log) {
        return static_cast<double>(log.counters.placements + log.counters.jump_new +
                                   log.counters.jump_revisit);
    };
    double target = 0.0;
    for (std::size_t r = 0; r < calibration_runs; ++r) {
        WalkConfig wc = dufs_cfg;
        wc.seed = dufs_cfg.seed + r;
        target += draws_of(dufs_run(g, wc));
    }
    target /= static_cast<double>(calibration_runs);

    auto durw_mean = [&](double w) {
        double sum = 0.0;
        for (std::size_t r = 0; r < calibration_runs; ++r) {
            WalkConfig wc = dufs_cfg;
            wc.jump_weight = w;
            wc.seed = dufs_cfg.seed + 7919 * (r + 1);
            sum += draws_of(durw_run(g, wc));
        }
        return sum / static_cast<double>(calibration_runs);
    };

    double lo = 0.01, hi = 100.0;
    double flo = durw_mean(lo), fhi = durw_mean(hi);
    if (flo >= target) return lo;
    if (fhi <= target) return hi;
    double mid = lo;
    for (int it = 0; it < 60; ++it) {
        mid = 0.5 * (lo + hi);
        double f = durw_mean(mid);
        if (std::abs(f - target) <= rel_tol * target) return mid;
        (f < target ? lo : hi) = mid;
    }
    return mid;
}

}  // namespace dufs
