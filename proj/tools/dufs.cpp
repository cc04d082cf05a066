#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dufs/experiment.hpp"

namespace {

using namespace dufs;

void write_edgelist(const DirectedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path);
    out << "# nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
    for (const auto& [u, v] : g.edges())
        out << g.original_id(u) << '\t' << g.original_id(v) << '\n';
}

void print_stats(const DirectedGraph& g) {
    std::cout << "nodes " << g.node_count() << '\n'
              << "edges " << g.edge_count() << '\n'
              << "volume " << g.volume() << '\n'
              << "symmetric " << (g.is_symmetric() ? "yes" : "no") << '\n';
}

struct CommonGraphOpts {
    std::string graph_path;
    std::size_t gen_nodes = 0;
    double gen_beta = 2.0;
    std::uint32_t gen_max_degree = 100;
    std::uint64_t gen_seed = 1;
    bool lcc = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--graph", graph_path, "edge list file");
        cmd->add_option("--gen-nodes", gen_nodes, "generate: node count");
        cmd->add_option("--gen-beta", gen_beta, "generate: power-law exponent");
        cmd->add_option("--gen-max-degree", gen_max_degree, "generate: degree cap");
        cmd->add_option("--gen-seed", gen_seed, "generate: seed");
        cmd->add_flag("--lcc", lcc, "restrict to the largest strongly connected component");
    }

    DirectedGraph load() const {
        if (graph_path.empty() == (gen_nodes == 0))
            throw ConfigError("exactly one of --graph and --gen-nodes is required");
        DirectedGraph g = graph_path.empty()
            ? generate_powerlaw_digraph(gen_nodes, gen_beta, gen_max_degree, gen_seed)
            : load_snap_edgelist(graph_path);
        return lcc ? largest_scc(g) : g;
    }
};

int dispatch(int argc, char** argv) {
    CLI::App app{"graph-crawling sampler and degree-distribution estimator"};
    app.require_subcommand(1);

    // load
    auto* load_cmd = app.add_subcommand("load", "parse an edge list and print statistics");
    std::string load_path, load_out;
    bool load_sym = false;
    load_cmd->add_option("path", load_path, "edge list file")->required();
    load_cmd->add_flag("--symmetrize", load_sym, "insert reverse edges");
    load_cmd->add_option("--out", load_out, "re-export the parsed graph");

    // lcc
    auto* lcc_cmd = app.add_subcommand("lcc", "largest strongly connected component");
    std::string lcc_path, lcc_out;
    lcc_cmd->add_option("path", lcc_path, "edge list file")->required();
    lcc_cmd->add_option("--out", lcc_out, "write the component's edge list");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate a power-law digraph");
    std::size_t gen_nodes = 1000;
    double gen_beta = 2.0;
    std::uint32_t gen_cap = 100;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen_cmd->add_option("--nodes", gen_nodes, "node count");
    gen_cmd->add_option("--beta", gen_beta, "power-law exponent");
    gen_cmd->add_option("--max-degree", gen_cap, "degree cap");
    gen_cmd->add_option("--seed", gen_seed, "seed");
    gen_cmd->add_option("--out", gen_out, "output edge list")->required();

    // run / grid
    auto* run_cmd = app.add_subcommand("run", "run a sampling experiment");
    auto* grid_cmd = app.add_subcommand("grid", "run several configs and join their reports");
    std::string run_config, grid_config, grid_out;
    std::vector<std::string> run_sets, grid_sets;
    run_cmd->add_option("--config", run_config, "config file (key = value)");
    run_cmd->add_option("--set", run_sets, "override key=value (flags win over the file)");
    grid_cmd->add_option("--config", grid_config, "config file with one [section] per run")
        ->required();
    grid_cmd->add_option("--set", grid_sets, "override key=value applied to every section");
    grid_cmd->add_option("--out", grid_out, "grid CSV path (default <output>/grid.csv)");

    // analytic
    auto* an_cmd = app.add_subcommand("analytic", "closed-form sampling error baselines");
    CommonGraphOpts an_graph;
    an_graph.attach(an_cmd);
    std::string an_model = "node", an_kind = "und-degree", an_out;
    double an_fraction = 0.1;
    an_cmd->add_option("--model", an_model, "node | edge");
    an_cmd->add_option("--label-kind", an_kind, "label kind");
    an_cmd->add_option("--budget-fraction", an_fraction, "B as a fraction of |V|");
    an_cmd->add_option("--out", an_out, "CSV output (default stdout)");

    // replay
    auto* rep_cmd = app.add_subcommand("replay", "re-estimate from a stored sample log");
    std::string rep_log, rep_est = "hybrid", rep_kind = "out-degree", rep_out;
    double rep_mean = 0.0;
    rep_cmd->add_option("--log", rep_log, "sample log file")->required();
    rep_cmd->add_option("--estimator", rep_est, "estimator id");
    rep_cmd->add_option("--label-kind", rep_kind, "label kind");
    rep_cmd->add_option("--mean-degree", rep_mean, "known mean degree (mvue only)");
    rep_cmd->add_option("--out", rep_out, "CSV output (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (load_cmd->parsed()) {
        DirectedGraph g = load_snap_edgelist(load_path, load_sym);
        print_stats(g);
        if (!load_out.empty()) write_edgelist(g, load_out);
        return 0;
    }
    if (lcc_cmd->parsed()) {
        DirectedGraph g = largest_scc(load_snap_edgelist(lcc_path));
        print_stats(g);
        if (!lcc_out.empty()) write_edgelist(g, lcc_out);
        return 0;
    }
    if (gen_cmd->parsed()) {
        DirectedGraph g = generate_powerlaw_digraph(gen_nodes, gen_beta, gen_cap, gen_seed);
        print_stats(g);
        write_edgelist(g, gen_out);
        return 0;
    }
    auto apply_sets = [](std::vector<ExperimentConfig>& cfgs, const std::vector<std::string>& sets) {
        for (const auto& s : sets) {
            auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value: " + s);
            for (auto& c : cfgs) apply_override(c, s.substr(0, eq), s.substr(eq + 1));
        }
    };
    if (run_cmd->parsed()) {
        std::vector<ExperimentConfig> cfgs =
            run_config.empty() ? std::vector<ExperimentConfig>{ExperimentConfig{}}
                               : parse_config_file(run_config);
        if (cfgs.size() != 1) throw ConfigError("run expects a single config; use grid");
        apply_sets(cfgs, run_sets);
        ExperimentResult r = run_experiment(cfgs.front());
        std::cout << "runs " << r.estimates.size() << "\nbudget " << r.budget << "\noutput "
                  << cfgs.front().output_dir << '\n';
        return 0;
    }
    if (grid_cmd->parsed()) {
        std::vector<ExperimentConfig> cfgs = parse_config_file(grid_config);
        apply_sets(cfgs, grid_sets);
        std::string csv = run_grid(cfgs);
        std::filesystem::path out_path = grid_out.empty()
            ? std::filesystem::path(cfgs.front().output_dir) / "grid.csv"
            : std::filesystem::path(grid_out);
        std::filesystem::create_directories(out_path.parent_path());
        std::ofstream out(out_path);
        out << csv;
        std::cout << "output " << out_path.string() << '\n';
        return 0;
    }
    if (an_cmd->parsed()) {
        DirectedGraph g = an_graph.load();
        GroundTruth truth = ground_truth(g, parse_label_kind(an_kind));
        auto budget = static_cast<std::int64_t>(an_fraction * static_cast<double>(g.node_count()));
        AnalyticNrmse a = an_model == "edge" ? analytic_edge_sampling_nrmse(truth, budget)
                        : an_model == "node" ? analytic_node_sampling_nrmse(truth, budget)
                        : throw ConfigError("unknown model: " + an_model);
        if (an_out.empty()) {
            write_analytic_csv(std::cout, a);
        } else {
            std::ofstream out(an_out);
            write_analytic_csv(out, a);
        }
        return 0;
    }
    if (rep_cmd->parsed()) {
        SampleLog log = SampleLog::load_file(rep_log);
        if (!log.audit()) throw DataError("sample log failed the budget audit");
        Estimate est = estimate_from_log(log, rep_est, parse_label_kind(rep_kind), rep_mean);
        std::vector<Estimate> one{est};
        if (rep_out.empty()) {
            write_estimate_csv(std::cout, one);
        } else {
            std::ofstream out(rep_out);
            write_estimate_csv(out, one);
        }
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const dufs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const dufs::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
