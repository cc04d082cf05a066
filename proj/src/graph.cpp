#include "dufs/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <set>
#include <limits>
#include <unordered_map>

namespace dufs {

const std::vector<std::string> DirectedGraph::kNoLabels{};

DirectedGraph::DirectedGraph(std::size_t node_count,
                             std::vector<std::pair<NodeId, NodeId>> edges,
                             std::vector<std::int64_t> original_ids)
    : original_ids_(std::move(original_ids)) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    edge_count_ = edges_.size();

    out_adj_.assign(node_count, {});
    in_adj_.assign(node_count, {});
    und_adj_.assign(node_count, {});
    for (auto [u, v] : edges_) {
        if (u >= node_count || v >= node_count)
            throw DataError("edge endpoint out of range");
        out_adj_[u].push_back(v);
        in_adj_[v].push_back(u);
    }
    for (NodeId v = 0; v < node_count; ++v) {
        auto& und = und_adj_[v];
        und = out_adj_[v];
        und.insert(und.end(), in_adj_[v].begin(), in_adj_[v].end());
        std::sort(und.begin(), und.end());
        und.erase(std::unique(und.begin(), und.end()), und.end());
        volume_ += und.size();
    }
    if (original_ids_.empty()) {
        original_ids_.resize(node_count);
        std::iota(original_ids_.begin(), original_ids_.end(), 0);
    } else if (original_ids_.size() != node_count) {
        throw DataError("remap table size mismatch");
    }
}

const std::vector<std::string>& DirectedGraph::labels(NodeId v) const {
    return node_labels_.empty() ? kNoLabels : node_labels_[v];
}

void DirectedGraph::set_labels(std::vector<std::vector<std::string>> labels) {
    if (labels.size() != node_count()) throw DataError("label table size mismatch");
    node_labels_ = std::move(labels);
}

bool DirectedGraph::is_symmetric() const {
    for (auto [u, v] : edges_) {
        const auto& rev = out_adj_[v];
        if (!std::binary_search(rev.begin(), rev.end(), u)) return false;
    }
    return true;
}

DirectedGraph load_snap_edgelist(const std::string& path, bool symmetrize) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open graph file: " + path);

    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::int64_t u = 0, v = 0;
        std::istringstream ls(line);
        std::string rest;
        if (!(ls >> u >> v))
            throw DataError("malformed edge at " + path + ":" + std::to_string(lineno));
        raw.emplace_back(u, v);
    }
    if (raw.empty()) throw DataError("empty graph: " + path);

    std::vector<std::int64_t> ids;
    ids.reserve(raw.size() * 2);
    for (auto [u, v] : raw) {
        ids.push_back(u);
        ids.push_back(v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::unordered_map<std::int64_t, NodeId> remap;
    remap.reserve(ids.size());
    for (NodeId i = 0; i < ids.size(); ++i) remap[ids[i]] = i;

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(raw.size() * (symmetrize ? 2 : 1));
    for (auto [u, v] : raw) {
        NodeId a = remap[u], b = remap[v];
        edges.emplace_back(a, b);
        if (symmetrize) edges.emplace_back(b, a);
    }
    std::size_t n = ids.size();
    return DirectedGraph(n, std::move(edges), std::move(ids));
}

void load_attributes(DirectedGraph& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open attribute file: " + path);

    std::unordered_map<std::int64_t, NodeId> remap;
    remap.reserve(g.node_count());
    for (NodeId i = 0; i < g.node_count(); ++i) remap[g.original_id(i)] = i;

    std::vector<std::vector<std::string>> labels(g.node_count());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        std::int64_t id = 0;
        std::string list;
        if (!(ls >> id >> list))
            throw DataError("malformed attribute line at " + path + ":" + std::to_string(lineno));
        auto it = remap.find(id);
        if (it == remap.end())
            throw DataError("unknown node id in attribute file at line " + std::to_string(lineno));
        std::stringstream items(list);
        std::string attr;
        while (std::getline(items, attr, ','))
            if (!attr.empty()) labels[it->second].push_back(attr);
    }
    g.set_labels(std::move(labels));
}

namespace {

// Iterative Tarjan; returns the component id of each node.
std::vector<std::uint32_t> tarjan_scc(const DirectedGraph& g, std::uint32_t& component_count) {
    const std::size_t n = g.node_count();
    constexpr std::uint32_t kUnset = 0xffffffff;
    std::vector<std::uint32_t> index(n, kUnset), lowlink(n), component(n, kUnset);
    std::vector<char> on_stack(n, 0);
    std::vector<NodeId> stack;
    std::uint32_t next_index = 0;
    component_count = 0;

    struct Frame {
        NodeId v;
        std::size_t child;
    };
    std::vector<Frame> call;
    for (NodeId root = 0; root < n; ++root) {
        if (index[root] != kUnset) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& fr = call.back();
            NodeId v = fr.v;
            if (fr.child == 0) {
                index[v] = lowlink[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            const auto& out = g.out_neighbors(v);
            bool descended = false;
            while (fr.child < out.size()) {
                NodeId w = out[fr.child++];
                if (index[w] == kUnset) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
            }
            if (descended) continue;
            if (lowlink[v] == index[v]) {
                while (true) {
                    NodeId w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    component[w] = component_count;
                    if (w == v) break;
                }
                ++component_count;
            }
            call.pop_back();
            if (!call.empty())
                lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[v]);
        }
    }
    return component;
}

}  // namespace

DirectedGraph largest_scc(const DirectedGraph& g) {
    if (g.node_count() == 0) throw DataError("largest_scc on empty graph");
    std::uint32_t ncomp = 0;
    auto comp = tarjan_scc(g, ncomp);

    std::vector<std::size_t> size(ncomp, 0);
    std::vector<std::int64_t> min_id(ncomp, std::numeric_limits<std::int64_t>::max());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        ++size[comp[v]];
        min_id[comp[v]] = std::min(min_id[comp[v]], g.original_id(v));
    }
    std::uint32_t best = 0;
    for (std::uint32_t c = 1; c < ncomp; ++c) {
        if (size[c] > size[best] || (size[c] == size[best] && min_id[c] < min_id[best]))
            best = c;
    }

    std::vector<NodeId> members;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (comp[v] == best) members.push_back(v);
    std::sort(members.begin(), members.end(), [&](NodeId a, NodeId b) {
        return g.original_id(a) < g.original_id(b);
    });

    std::vector<NodeId> remap(g.node_count(), 0);
    std::vector<std::int64_t> ids(members.size());
    for (NodeId i = 0; i < members.size(); ++i) {
        remap[members[i]] = i;
        ids[i] = g.original_id(members[i]);
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (auto [u, v] : g.edges())
        if (comp[u] == best && comp[v] == best)
            edges.emplace_back(remap[u], remap[v]);

    DirectedGraph sub(members.size(), std::move(edges), std::move(ids));
    if (g.has_labels()) {
        std::vector<std::vector<std::string>> labels(members.size());
        for (NodeId i = 0; i < members.size(); ++i) labels[i] = g.labels(members[i]);
        sub.set_labels(std::move(labels));
    }
    return sub;
}

GroundTruth ground_truth(const DirectedGraph& g, LabelKind kind) {
    if (g.node_count() == 0) throw DataError("ground_truth on empty graph");
    if (kind == LabelKind::Attribute && !g.has_labels())
        throw DataError("attribute ground truth requested on unlabeled graph");

    GroundTruth t;
    t.kind = kind;
    const double n = static_cast<double>(g.node_count());
    std::uint64_t degsum = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        degsum += g.und_degree(v);
        switch (kind) {
            case LabelKind::OutDegree:
                t.mass[std::to_string(g.out_degree(v))] += 1.0 / n;
                break;
            case LabelKind::InDegree:
                t.mass[std::to_string(g.in_degree(v))] += 1.0 / n;
                break;
            case LabelKind::UndirectedDegree:
                t.mass[std::to_string(g.und_degree(v))] += 1.0 / n;
                break;
            case LabelKind::JointDegree:
                t.mass[joint_label(g.in_degree(v), g.out_degree(v))] += 1.0 / n;
                break;
            case LabelKind::Attribute:
                for (const auto& a : g.labels(v)) t.mass[a] += 1.0 / n;
                break;
        }
    }
    t.mean_undirected_degree = static_cast<double>(degsum) / n;
    return t;
}

GroundTruth ground_truth_top_degree(const DirectedGraph& g, std::uint32_t threshold) {
    if (!g.has_labels()) throw DataError("attribute ground truth requested on unlabeled graph");
    std::size_t count = 0;
    std::map<Label, std::size_t, LabelLess> hits;
    std::uint64_t degsum = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        degsum += g.und_degree(v);
        if (g.und_degree(v) < threshold) continue;
        ++count;
        for (const auto& a : g.labels(v)) ++hits[a];
    }
    if (count == 0) throw DataError("empty top-degree node set");
    GroundTruth t;
    t.kind = LabelKind::Attribute;
    for (const auto& [label, c] : hits)
        t.mass[label] = static_cast<double>(c) / static_cast<double>(count);
    t.mean_undirected_degree = static_cast<double>(degsum) / static_cast<double>(g.node_count());
    return t;
}

MassMap powerlaw_mass(double beta, std::uint32_t max_degree) {
    double z = 0.0;
    for (std::uint32_t d = 1; d <= max_degree; ++d) z += std::pow(d, -beta);
    MassMap mass;
    for (std::uint32_t d = 1; d <= max_degree; ++d)
        mass[std::to_string(d)] = std::pow(d, -beta) / z;
    return mass;
}

DirectedGraph generate_powerlaw_digraph(std::size_t n, double beta,
                                        std::uint32_t max_degree, std::uint64_t seed) {
    if (n < 2 || beta < 1.0 || max_degree < 1)
        throw ConfigError("generate_powerlaw_digraph: need n >= 2, beta >= 1, max_degree >= 1");

    // Inverse-CDF table for the truncated power law.
    std::vector<double> cdf(max_degree);
    double z = 0.0;
    for (std::uint32_t d = 1; d <= max_degree; ++d) {
        z += std::pow(d, -beta);
        cdf[d - 1] = z;
    }
    for (auto& c : cdf) c /= z;

    Rng rng(seed);
    auto draw_degree = [&]() -> std::uint32_t {
        double u = rng.uniform();
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        return static_cast<std::uint32_t>(it - cdf.begin()) + 1;
    };

    std::vector<NodeId> out_stubs, in_stubs;
    for (NodeId v = 0; v < n; ++v) {
        std::uint32_t od = draw_degree(), id = draw_degree();
        for (std::uint32_t k = 0; k < od; ++k) out_stubs.push_back(v);
        for (std::uint32_t k = 0; k < id; ++k) in_stubs.push_back(v);
    }
    auto shuffle = [&](std::vector<NodeId>& s) {
        for (std::size_t i = s.size(); i > 1; --i)
            std::swap(s[i - 1], s[rng.below(i)]);
    };
    shuffle(out_stubs);
    shuffle(in_stubs);

    // Pair stubs; on a duplicate edge, resample the in-stub partner from the
    // remaining pool. Stubs that cannot be repaired are dropped, as are the
    // dangling stubs of the longer list.
    std::size_t pairs = std::min(out_stubs.size(), in_stubs.size());
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(pairs);
    std::set<std::pair<NodeId, NodeId>> seen;
    for (std::size_t i = 0; i < pairs; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
            std::pair<NodeId, NodeId> e{out_stubs[i], in_stubs[i]};
            if (seen.insert(e).second) {
                edges.push_back(e);
                placed = true;
            } else if (i + 1 < pairs) {
                std::size_t j = i + 1 + rng.below(pairs - i - 1 == 0 ? 1 : pairs - i - 1);
                if (j < pairs) std::swap(in_stubs[i], in_stubs[j]);
            } else {
                break;
            }
        }
    }
    if (edges.empty()) throw DataError("powerlaw generation produced no edges");

    // Drop isolated nodes and compact indices.
    std::vector<char> used(n, 0);
    for (auto [u, v] : edges) used[u] = used[v] = 1;
    std::vector<NodeId> remap(n, 0);
    std::vector<std::int64_t> ids;
    NodeId next = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (used[v]) {
            remap[v] = next++;
            ids.push_back(v);
        }
    }
    for (auto& [u, v] : edges) {
        u = remap[u];
        v = remap[v];
    }
    return DirectedGraph(next, std::move(edges), std::move(ids));
}

std::uint32_t degree_threshold_top_fraction(const DirectedGraph& g, double fraction) {
    if (fraction <= 0.0 || fraction > 1.0)
        throw ConfigError("fraction must be in (0, 1]");
    std::map<std::uint32_t, std::size_t> hist;
    for (NodeId v = 0; v < g.node_count(); ++v) ++hist[g.und_degree(v)];

    const double limit = fraction * static_cast<double>(g.node_count());
    std::size_t at_or_above = 0;
    std::uint32_t best = hist.begin()->first;
    bool found = false;
    // Walk degrees descending, accumulating |{deg >= t}|.
    for (auto it = hist.rbegin(); it != hist.rend(); ++it) {
        at_or_above += it->second;
        if (static_cast<double>(at_or_above) <= limit) {
            best = it->first;
            found = true;
        } else {
            break;
        }
    }
    if (!found) best = hist.rbegin()->first;  // all-equal / oversize head case
    return best;
}

}  // namespace dufs
