#ifndef DUFS_GRAPH_HPP
#define DUFS_GRAPH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dufs/common.hpp"

namespace dufs {

/// Immutable directed graph with dense node indices 0..|V|-1.
/// Undirected degree and adjacency refer to the symmetrized edge set
/// E = {(u,v) : (u,v) in E_d or (v,u) in E_d}; a self-loop counts once.
class DirectedGraph {
public:
    DirectedGraph(std::size_t node_count,
                  std::vector<std::pair<NodeId, NodeId>> edges,
                  std::vector<std::int64_t> original_ids = {});

    std::size_t node_count() const { return out_adj_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    const std::vector<NodeId>& out_neighbors(NodeId v) const { return out_adj_[v]; }
    const std::vector<NodeId>& in_neighbors(NodeId v) const { return in_adj_[v]; }
    const std::vector<NodeId>& und_neighbors(NodeId v) const { return und_adj_[v]; }

    std::uint32_t out_degree(NodeId v) const { return static_cast<std::uint32_t>(out_adj_[v].size()); }
    std::uint32_t in_degree(NodeId v) const { return static_cast<std::uint32_t>(in_adj_[v].size()); }
    std::uint32_t und_degree(NodeId v) const { return static_cast<std::uint32_t>(und_adj_[v].size()); }

    /// vol(V) = sum of undirected degrees.
    std::uint64_t volume() const { return volume_; }

    /// Original node id from the input file (or the index itself for
    /// generated graphs).
    std::int64_t original_id(NodeId v) const { return original_ids_[v]; }
    const std::vector<std::int64_t>& original_ids() const { return original_ids_; }

    bool has_labels() const { return !node_labels_.empty(); }
    const std::vector<std::string>& labels(NodeId v) const;
    void set_labels(std::vector<std::vector<std::string>> labels);

    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }

    bool is_symmetric() const;

private:
    std::vector<std::pair<NodeId, NodeId>> edges_;
    std::vector<std::vector<NodeId>> out_adj_;
    std::vector<std::vector<NodeId>> in_adj_;
    std::vector<std::vector<NodeId>> und_adj_;
    std::vector<std::int64_t> original_ids_;
    std::vector<std::vector<std::string>> node_labels_;
    std::size_t edge_count_ = 0;
    std::uint64_t volume_ = 0;
    static const std::vector<std::string> kNoLabels;
};

/// Exact label/degree distribution of a graph.
struct GroundTruth {
    LabelKind kind = LabelKind::OutDegree;
    MassMap mass;
    double mean_undirected_degree = 0.0;
};

/// Parse a SNAP-style edge list: "u<ws>v" per line, '#' comments, LF or
/// CRLF. Duplicate edges collapse; node ids remap to dense indices in
/// ascending original-id order. If symmetrize, (v,u) is inserted for
/// every (u,v).
DirectedGraph load_snap_edgelist(const std::string& path, bool symmetrize = false);

/// Attribute file: "node_id<ws>label1,label2,..." per line, '#' comments.
/// Ids refer to the graph's original ids; unknown ids are an error.
void load_attributes(DirectedGraph& g, const std::string& path);

/// Induced subgraph on the largest strongly connected component. Ties are
/// broken by the smallest minimum original node id in the component.
DirectedGraph largest_scc(const DirectedGraph& g);

GroundTruth ground_truth(const DirectedGraph& g, LabelKind kind);

/// Attribute distribution restricted to nodes with und_degree >= threshold,
/// normalized by the size of that node set.
GroundTruth ground_truth_top_degree(const DirectedGraph& g, std::uint32_t threshold);

/// Directed configuration model with i.i.d. out- and in-degrees from the
/// truncated power law P(d) ~ d^-beta, 1 <= d <= max_degree. Dangling
/// stubs are dropped, duplicates collapse, isolated nodes are removed.
DirectedGraph generate_powerlaw_digraph(std::size_t n, double beta,
                                        std::uint32_t max_degree, std::uint64_t seed);

/// Truncated power-law mass theta_d = d^-beta / Z for d = 1..max_degree.
MassMap powerlaw_mass(double beta, std::uint32_t max_degree);

/// Smallest undirected degree t such that |{v : deg(v) >= t}| <= fraction*|V|,
/// over degree values present in the graph. If every present value keeps the
/// set too large, the maximum present degree is returned (all-equal case).
std::uint32_t degree_threshold_top_fraction(const DirectedGraph& g, double fraction);

}  // namespace dufs

#endif
