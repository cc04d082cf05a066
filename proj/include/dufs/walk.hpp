#ifndef DUFS_WALK_HPP
#define DUFS_WALK_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dufs/common.hpp"
#include "dufs/graph.hpp"

namespace dufs {

enum class Scenario { Visible, Invisible };
enum class Placement { Uniform, Prop, Inv };

std::string scenario_name(Scenario s);
Scenario parse_scenario(const std::string& name);
std::string placement_name(Placement p);
Placement parse_placement(const std::string& name);

/// The crawler's view of the graph. In the invisible scenario this is the
/// undirected graph G_u built on the fly: when a node is first visited, its
/// out-edges to not-yet-visited nodes are added (symmetrically, so they can
/// be traversed backwards) and its degree is frozen. In the visible scenario
/// the true undirected adjacency is used directly.
class ObservedGraph {
public:
    ObservedGraph(const DirectedGraph& g, Scenario scenario);

    bool visited(NodeId v) const { return visited_[v] != 0; }
    std::size_t visited_count() const { return visited_count_; }

    /// Observed undirected degree. Frozen at first visit in the invisible
    /// scenario; the true undirected degree in the visible scenario.
    std::uint32_t degree(NodeId v) const;

    /// First visit applies the edge-update rule; revisits are no-ops.
    void visit(NodeId v);

    /// Uniform neighbor in the observed adjacency. Requires degree(v) > 0.
    NodeId random_neighbor(NodeId v, Rng& rng) const;

    Scenario scenario() const { return scenario_; }

private:
    const DirectedGraph* g_;
    Scenario scenario_;
    std::vector<char> visited_;
    std::vector<std::vector<NodeId>> adj_;       // invisible scenario only
    std::vector<std::uint32_t> frozen_degree_;   // invisible scenario only
    std::size_t visited_count_ = 0;
};

struct WalkConfig {
    std::int64_t budget = 0;          // B
    double budget_per_walker = 10.0;  // b
    std::int64_t uniform_cost = 1;    // c
    double jump_weight = 0.0;         // w
    Scenario scenario = Scenario::Visible;
    Placement placement = Placement::Uniform;
    std::uint64_t seed = 0;

    /// n = floor(B / (c + b))
    std::int64_t walker_count() const;
};

/// One sampled node. For placement records `weight` is the frozen degree;
/// for walk records it is the sampling bias deg + w.
struct SampleRecord {
    NodeId node = 0;
    double weight = 0.0;
    std::uint32_t out_degree = 0;
    std::uint32_t in_degree = 0;
    std::uint32_t und_degree = 0;
    char origin = 'P';      // 'P' placement, 'J' jump, 'S' walk step
    std::int64_t cost = 0;  // budget charged for this visit
    std::vector<std::string> attrs;
};

struct BudgetCounters {
    std::int64_t placements = 0;
    std::int64_t jump_new = 0;
    std::int64_t jump_revisit = 0;
    std::int64_t walk_new = 0;
    std::int64_t walk_revisit = 0;
    std::int64_t forced_jumps = 0;
    std::int64_t truncated = 0;  // final step skipped because it could not be afforded
    std::int64_t capped = 0;     // halted at B walk samples with budget left (free revisits)
};

struct SampleLog {
    std::string method = "dufs";
    WalkConfig config;
    std::size_t graph_nodes = 0;
    std::size_t graph_edges = 0;

    std::vector<SampleRecord> initial_nodes;  // uniform placements only
    std::vector<SampleRecord> walk_samples;   // every post-placement visit, revisits included

    BudgetCounters counters;
    std::int64_t spent = 0;

    /// spent == c*(placements + jump_new) + walk_new
    bool audit() const;

    void save(std::ostream& out) const;
    void save(const std::string& path) const;
    static SampleLog load(std::istream& in);
    static SampleLog load_file(const std::string& path);
};

SampleLog dufs_run(const DirectedGraph& g, const WalkConfig& config);

/// DUFS with w = 0 in the visible scenario.
SampleLog fs_run(const DirectedGraph& g, WalkConfig config);

/// DUFS with a single walker (b = B - c).
SampleLog durw_run(const DirectedGraph& g, WalkConfig config);

/// One walker, no jumps, visible scenario. Throws DataError if the walker
/// gets stuck on a degree-zero node.
SampleLog single_rw_run(const DirectedGraph& g, WalkConfig config);

/// n = floor(B/(c+b)) independent walkers, round-robin, no coordination.
SampleLog multi_rw_run(const DirectedGraph& g, WalkConfig config);

/// DUFS with b = 0: pure uniform node sampling.
SampleLog uniform_node_run(const DirectedGraph& g, WalkConfig config);

SampleLog run_method(const std::string& method, const DirectedGraph& g, const WalkConfig& config);

}  // namespace dufs

#endif
