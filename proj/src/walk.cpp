#include "dufs/walk.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dufs {

std::string scenario_name(Scenario s) {
    return s == Scenario::Visible ? "visible" : "invisible";
}

Scenario parse_scenario(const std::string& name) {
    if (name == "visible") return Scenario::Visible;
    if (name == "invisible") return Scenario::Invisible;
    throw ConfigError("unknown scenario: " + name);
}

std::string placement_name(Placement p) {
    switch (p) {
        case Placement::Uniform: return "uniform";
        case Placement::Prop: return "prop";
        case Placement::Inv: return "inv";
    }
    return "?";
}

Placement parse_placement(const std::string& name) {
    if (name == "uniform") return Placement::Uniform;
    if (name == "prop") return Placement::Prop;
    if (name == "inv") return Placement::Inv;
    throw ConfigError("unknown placement: " + name);
}

ObservedGraph::ObservedGraph(const DirectedGraph& g, Scenario scenario)
    : g_(&g), scenario_(scenario), visited_(g.node_count(), 0) {
    if (scenario_ == Scenario::Invisible) {
        adj_.resize(g.node_count());
        frozen_degree_.assign(g.node_count(), 0);
    }
}

std::uint32_t ObservedGraph::degree(NodeId v) const {
    if (scenario_ == Scenario::Visible) return g_->und_degree(v);
    return frozen_degree_[v];
}

void ObservedGraph::visit(NodeId v) {
    if (visited_[v]) return;
    visited_[v] = 1;
    ++visited_count_;
    if (scenario_ == Scenario::Visible) return;
    // Add out-edges to not-yet-visited targets, stored symmetrically so
    // they can be traversed backwards. The degree of v is frozen now; the
    // update rule never touches a visited endpoint again.
    for (NodeId u : g_->out_neighbors(v)) {
        if (visited_[u]) continue;
        adj_[v].push_back(u);
        adj_[u].push_back(v);
    }
    frozen_degree_[v] = static_cast<std::uint32_t>(adj_[v].size());
    for (NodeId u : g_->out_neighbors(v))
        if (!visited_[u]) frozen_degree_[u] = static_cast<std::uint32_t>(adj_[u].size());
}

NodeId ObservedGraph::random_neighbor(NodeId v, Rng& rng) const {
    const auto& nbrs = scenario_ == Scenario::Visible ? g_->und_neighbors(v) : adj_[v];
    return nbrs[rng.below(nbrs.size())];
}

std::int64_t WalkConfig::walker_count() const {
    double denom = static_cast<double>(uniform_cost) + budget_per_walker;
    return static_cast<std::int64_t>(std::floor(static_cast<double>(budget) / denom));
}

bool SampleLog::audit() const {
    std::int64_t expected = config.uniform_cost * (counters.placements + counters.jump_new) +
                            counters.walk_new;
    if (spent != expected || spent > config.budget) return false;
    std::int64_t from_records = 0;
    for (const auto& r : initial_nodes) from_records += r.cost;
    for (const auto& r : walk_samples) from_records += r.cost;
    // Non-uniform placements are not recorded in initial_nodes; account for
    // them from the counters.
    if (initial_nodes.empty() && counters.placements > 0)
        from_records += config.uniform_cost * counters.placements;
    return from_records == spent;
}

namespace {

struct RunState {
    const DirectedGraph& g;
    const WalkConfig& cfg;
    ObservedGraph observed;
    Rng rng;
    SampleLog log;

    RunState(const DirectedGraph& graph, const WalkConfig& config, const std::string& method)
        : g(graph), cfg(config), observed(graph, config.scenario), rng(config.seed) {
        log.method = method;
        log.config = config;
        log.graph_nodes = graph.node_count();
        log.graph_edges = graph.edge_count();
    }

    std::int64_t remaining() const { return cfg.budget - log.spent; }

    SampleRecord make_record(NodeId v, double weight, char origin, std::int64_t cost) const {
        SampleRecord r;
        r.node = v;
        r.weight = weight;
        r.out_degree = g.out_degree(v);
        r.in_degree = g.in_degree(v);
        r.und_degree = g.und_degree(v);
        r.origin = origin;
        r.cost = cost;
        r.attrs = g.labels(v);
        return r;
    }

    NodeId draw_placement(Placement placement, const std::vector<double>& cdf) {
        if (placement == Placement::Uniform)
            return static_cast<NodeId>(rng.below(g.node_count()));
        double u = rng.uniform();
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        return static_cast<NodeId>(it - cdf.begin());
    }

    // Places n walkers; every placement is charged c. Placement nodes are
    // logged only under uniform placement (the hybrid estimator's
    // node-sample assumption).
    std::vector<NodeId> place(std::int64_t n) {
        std::vector<double> cdf;
        if (cfg.placement != Placement::Uniform) {
            cdf.reserve(g.node_count());
            double total = 0.0;
            for (NodeId v = 0; v < g.node_count(); ++v) {
                double w = static_cast<double>(g.und_degree(v));
                total += cfg.placement == Placement::Prop ? w : (w > 0 ? 1.0 / w : 0.0);
                cdf.push_back(total);
            }
            for (auto& c : cdf) c /= total;
        }
        std::vector<NodeId> locations;
        locations.reserve(static_cast<std::size_t>(n));
        for (std::int64_t k = 0; k < n; ++k) {
            NodeId v = draw_placement(cfg.placement, cdf);
            observed.visit(v);
            log.spent += cfg.uniform_cost;
            ++log.counters.placements;
            locations.push_back(v);
            if (cfg.placement == Placement::Uniform)
                log.initial_nodes.push_back(
                    make_record(v, observed.degree(v), 'P', cfg.uniform_cost));
        }
        return locations;
    }

    // Uniform draw from V at jump cost; revisits are free. Returns false if
    // the draw could not be afforded (run halts without taking it).
    bool jump(NodeId& out) {
        NodeId v = static_cast<NodeId>(rng.below(g.node_count()));
        std::int64_t cost = observed.visited(v) ? 0 : cfg.uniform_cost;
        if (cost > remaining()) {
            ++log.counters.truncated;
            return false;
        }
        observed.visit(v);
        log.spent += cost;
        cost == 0 ? ++log.counters.jump_revisit : ++log.counters.jump_new;
        log.walk_samples.push_back(
            make_record(v, observed.degree(v) + cfg.jump_weight, 'J', cost));
        out = v;
        return true;
    }

    bool step(NodeId from, NodeId& out) {
        NodeId v = observed.random_neighbor(from, rng);
        std::int64_t cost = observed.visited(v) ? 0 : 1;
        observed.visit(v);
        log.spent += cost;
        cost == 0 ? ++log.counters.walk_revisit : ++log.counters.walk_new;
        log.walk_samples.push_back(
            make_record(v, observed.degree(v) + cfg.jump_weight, 'S', cost));
        out = v;
        return true;
    }
};

SampleLog coordinated_run(const DirectedGraph& g, const WalkConfig& cfg,
                          std::int64_t walkers, const std::string& method) {
    if (g.node_count() == 0) throw DataError("walk on empty graph");
    if (walkers < 1) throw ConfigError("walker count must be >= 1");
    if (walkers * cfg.uniform_cost > cfg.budget)
        throw ConfigError("placement cost n*c exceeds budget B");
    if (cfg.jump_weight < 0) throw ConfigError("jump weight must be >= 0");

    RunState st(g, cfg, method);
    std::vector<NodeId> locations = st.place(walkers);
    const double w = cfg.jump_weight;

    while (st.log.spent < cfg.budget) {
        // Revisits are free, so spending can stall once every reachable node
        // is visited; cap the walk at B samples to guarantee termination.
        if (static_cast<std::int64_t>(st.log.walk_samples.size()) >= cfg.budget) {
            st.log.counters.capped = 1;
            break;
        }
        // Walker selection with weight w + deg(v).
        double total = 0.0;
        for (NodeId v : locations) total += w + st.observed.degree(v);
        std::size_t pick = 0;
        if (total > 0.0) {
            double u = st.rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t k = 0; k < locations.size(); ++k) {
                acc += w + st.observed.degree(locations[k]);
                if (u < acc) {
                    pick = k;
                    break;
                }
                pick = k;
            }
        } else {
            pick = static_cast<std::size_t>(st.rng.below(locations.size()));
        }

        NodeId at = locations[pick];
        std::uint32_t deg = st.observed.degree(at);
        NodeId next = at;
        if (deg == 0 && w == 0.0) {
            // Stuck walker: forced uniform jump, counted separately.
            ++st.log.counters.forced_jumps;
            if (!st.jump(next)) break;
        } else if (deg == 0 || st.rng.uniform() < w / (w + deg)) {
            if (!st.jump(next)) break;
        } else {
            st.step(at, next);
        }
        locations[pick] = next;
    }
    return st.log;
}

}  // namespace

SampleLog dufs_run(const DirectedGraph& g, const WalkConfig& config) {
    return coordinated_run(g, config, config.walker_count(), "dufs");
}

SampleLog fs_run(const DirectedGraph& g, WalkConfig config) {
    config.jump_weight = 0.0;
    config.scenario = Scenario::Visible;
    return coordinated_run(g, config, config.walker_count(), "fs");
}

SampleLog durw_run(const DirectedGraph& g, WalkConfig config) {
    if (config.budget <= config.uniform_cost) throw ConfigError("durw requires B > c");
    config.budget_per_walker =
        static_cast<double>(config.budget - config.uniform_cost);
    return coordinated_run(g, config, 1, "durw");
}

SampleLog uniform_node_run(const DirectedGraph& g, WalkConfig config) {
    config.budget_per_walker = 0.0;
    config.jump_weight = 0.0;
    return coordinated_run(g, config, config.walker_count(), "uniform-node");
}

SampleLog single_rw_run(const DirectedGraph& g, WalkConfig config) {
    config.jump_weight = 0.0;
    config.scenario = Scenario::Visible;
    RunState st(g, config, "single-rw");
    std::vector<NodeId> loc = st.place(1);
    NodeId at = loc[0];
    while (st.log.spent < config.budget) {
        if (static_cast<std::int64_t>(st.log.walk_samples.size()) >= config.budget) {
            st.log.counters.capped = 1;
            break;
        }
        if (st.observed.degree(at) == 0)
            throw DataError("single-rw stuck: walker started on a degree-zero node");
        st.step(at, at);
    }
    return st.log;
}

SampleLog multi_rw_run(const DirectedGraph& g, WalkConfig config) {
    config.jump_weight = 0.0;
    config.scenario = Scenario::Visible;
    std::int64_t n = config.walker_count();
    if (n < 1) throw ConfigError("walker count must be >= 1");
    if (n * config.uniform_cost > config.budget)
        throw ConfigError("placement cost n*c exceeds budget B");

    RunState st(g, config, "multi-rw");
    std::vector<NodeId> locations = st.place(n);
    std::size_t turn = 0;
    std::size_t stuck = 0;
    while (st.log.spent < config.budget && stuck < locations.size()) {
        if (static_cast<std::int64_t>(st.log.walk_samples.size()) >= config.budget) {
            st.log.counters.capped = 1;
            break;
        }
        NodeId at = locations[turn];
        if (st.observed.degree(at) == 0) {
            ++stuck;
        } else {
            stuck = 0;
            st.step(at, locations[turn]);
        }
        turn = (turn + 1) % locations.size();
    }
    if (stuck >= locations.size() && !locations.empty())
        throw DataError("multi-rw stuck: all walkers on degree-zero nodes");
    return st.log;
}

SampleLog run_method(const std::string& method, const DirectedGraph& g, const WalkConfig& config) {
    if (method == "dufs") return dufs_run(g, config);
    if (method == "fs") return fs_run(g, config);
    if (method == "durw") return durw_run(g, config);
    if (method == "single-rw") return single_rw_run(g, config);
    if (method == "multi-rw") return multi_rw_run(g, config);
    if (method == "uniform-node") return uniform_node_run(g, config);
    throw ConfigError("unknown method: " + method);
}

// --- serialization ---------------------------------------------------------

namespace {

std::string join_attrs(const std::vector<std::string>& attrs) {
    if (attrs.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        if (i) out += ',';
        out += attrs[i];
    }
    return out;
}

std::vector<std::string> split_attrs(const std::string& s) {
    if (s == "-") return {};
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void write_record(std::ostream& out, const SampleRecord& r, char tag) {
    out << tag << ' ' << r.node << ' ' << r.weight << ' ' << r.out_degree << ' '
        << r.in_degree << ' ' << r.und_degree << ' ' << r.origin << ' ' << r.cost << ' '
        << join_attrs(r.attrs) << '\n';
}

}  // namespace

void SampleLog::save(std::ostream& out) const {
    out.precision(17);
    out << "#dufs-log v1\n";
    out << "#method " << method << '\n';
    out << "#config B=" << config.budget << " b=" << config.budget_per_walker
        << " c=" << config.uniform_cost << " w=" << config.jump_weight
        << " scenario=" << scenario_name(config.scenario)
        << " placement=" << placement_name(config.placement)
        << " seed=" << config.seed << '\n';
    out << "#graph nodes=" << graph_nodes << " edges=" << graph_edges << '\n';
    for (const auto& r : initial_nodes) write_record(out, r, 'I');
    for (const auto& r : walk_samples) write_record(out, r, 'W');
    out << "#spent " << spent << '\n';
    out << "#counters placements=" << counters.placements << " jump_new=" << counters.jump_new
        << " jump_revisit=" << counters.jump_revisit << " walk_new=" << counters.walk_new
        << " walk_revisit=" << counters.walk_revisit
        << " forced_jumps=" << counters.forced_jumps
        << " truncated=" << counters.truncated << " capped=" << counters.capped << '\n';
}

void SampleLog::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write log: " + path);
    save(out);
}

namespace {

std::int64_t parse_kv_int(const std::string& token, const char* key) {
    auto pos = token.find('=');
    if (pos == std::string::npos || token.substr(0, pos) != key)
        throw DataError(std::string("bad log field, expected ") + key);
    return std::stoll(token.substr(pos + 1));
}

double parse_kv_double(const std::string& token, const char* key) {
    auto pos = token.find('=');
    if (pos == std::string::npos || token.substr(0, pos) != key)
        throw DataError(std::string("bad log field, expected ") + key);
    return std::stod(token.substr(pos + 1));
}

std::string parse_kv_str(const std::string& token, const char* key) {
    auto pos = token.find('=');
    if (pos == std::string::npos || token.substr(0, pos) != key)
        throw DataError(std::string("bad log field, expected ") + key);
    return token.substr(pos + 1);
}

}  // namespace

SampleLog SampleLog::load(std::istream& in) {
    SampleLog log;
    std::string line;
    if (!std::getline(in, line) || line.rfind("#dufs-log", 0) != 0)
        throw DataError("not a dufs sample log");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "#method") {
            ls >> log.method;
        } else if (tag == "#config") {
            std::string t;
            ls >> t;
            log.config.budget = parse_kv_int(t, "B");
            ls >> t;
            log.config.budget_per_walker = parse_kv_double(t, "b");
            ls >> t;
            log.config.uniform_cost = parse_kv_int(t, "c");
            ls >> t;
            log.config.jump_weight = parse_kv_double(t, "w");
            ls >> t;
            log.config.scenario = parse_scenario(parse_kv_str(t, "scenario"));
            ls >> t;
            log.config.placement = parse_placement(parse_kv_str(t, "placement"));
            ls >> t;
            log.config.seed = static_cast<std::uint64_t>(parse_kv_int(t, "seed"));
        } else if (tag == "#graph") {
            std::string t;
            ls >> t;
            log.graph_nodes = static_cast<std::size_t>(parse_kv_int(t, "nodes"));
            ls >> t;
            log.graph_edges = static_cast<std::size_t>(parse_kv_int(t, "edges"));
        } else if (tag == "#spent") {
            ls >> log.spent;
        } else if (tag == "#counters") {
            std::string t;
            ls >> t;
            log.counters.placements = parse_kv_int(t, "placements");
            ls >> t;
            log.counters.jump_new = parse_kv_int(t, "jump_new");
            ls >> t;
            log.counters.jump_revisit = parse_kv_int(t, "jump_revisit");
            ls >> t;
            log.counters.walk_new = parse_kv_int(t, "walk_new");
            ls >> t;
            log.counters.walk_revisit = parse_kv_int(t, "walk_revisit");
            ls >> t;
            log.counters.forced_jumps = parse_kv_int(t, "forced_jumps");
            ls >> t;
            log.counters.truncated = parse_kv_int(t, "truncated");
            ls >> t;
            log.counters.capped = parse_kv_int(t, "capped");
        } else if (tag == "I" || tag == "W") {
            SampleRecord r;
            std::string attrs;
            if (!(ls >> r.node >> r.weight >> r.out_degree >> r.in_degree >> r.und_degree >>
                  r.origin >> r.cost >> attrs))
                throw DataError("malformed log record: " + line);
            r.attrs = split_attrs(attrs);
            (tag == "I" ? log.initial_nodes : log.walk_samples).push_back(std::move(r));
        } else {
            throw DataError("unknown log line: " + line);
        }
    }
    return log;
}

SampleLog SampleLog::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open log: " + path);
    return load(in);
}

}  // namespace dufs
