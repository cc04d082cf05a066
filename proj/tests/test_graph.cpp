#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "dufs/graph.hpp"

using namespace dufs;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
    auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << content;
    return path;
}

DirectedGraph star5() {
    // Center 0 connected symmetrically to leaves 1..4.
    std::vector<std::pair<NodeId, NodeId>> e;
    for (NodeId leaf = 1; leaf <= 4; ++leaf) {
        e.emplace_back(0, leaf);
        e.emplace_back(leaf, 0);
    }
    return DirectedGraph(5, e);
}

}  // namespace

TEST_CASE("loader: comments, CRLF, duplicates, id remap") {
    auto path = temp_file("dufs_t_load.txt",
                          "# header comment\r\n"
                          "10\t30\r\n"
                          "\r\n"
                          "30 10\n"
                          "10\t30\n"  // duplicate
                          "  20 10\n");
    DirectedGraph g = load_snap_edgelist(path);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);  // duplicate collapsed
    // Original ids remapped in ascending order: 10->0, 20->1, 30->2.
    CHECK(g.original_id(0) == 10);
    CHECK(g.original_id(1) == 20);
    CHECK(g.original_id(2) == 30);
    CHECK(g.out_degree(0) == 1);
    CHECK(g.in_degree(0) == 2);
    std::remove(path.c_str());
}

TEST_CASE("loader: malformed and empty inputs are data errors") {
    auto bad = temp_file("dufs_t_bad.txt", "1 2\nx y\n");
    CHECK_THROWS_AS(load_snap_edgelist(bad), DataError);
    auto empty = temp_file("dufs_t_empty.txt", "# nothing\n");
    CHECK_THROWS_AS(load_snap_edgelist(empty), DataError);
    CHECK_THROWS_AS(load_snap_edgelist("/nonexistent/file"), ConfigError);
    std::remove(bad.c_str());
    std::remove(empty.c_str());
}

TEST_CASE("loader: symmetrize inserts reverse edges") {
    auto path = temp_file("dufs_t_sym.txt", "0 1\n1 2\n");
    DirectedGraph g = load_snap_edgelist(path, true);
    CHECK(g.edge_count() == 4);
    CHECK(g.is_symmetric());
    // Symmetric graph: sum of degrees = 2 * undirected pair count.
    CHECK(g.volume() == 4);
    std::remove(path.c_str());
}

TEST_CASE("self-loop counts once toward degree") {
    DirectedGraph g(2, {{0, 0}, {0, 1}});
    CHECK(g.und_degree(0) == 2);  // self + node 1
    CHECK(g.und_degree(1) == 1);
}

TEST_CASE("ground truth: star undirected degree mass") {
    GroundTruth t = ground_truth(star5(), LabelKind::UndirectedDegree);
    CHECK(t.mass.at("1") == doctest::Approx(4.0 / 5));
    CHECK(t.mass.at("4") == doctest::Approx(1.0 / 5));
    CHECK(t.mean_undirected_degree == doctest::Approx(8.0 / 5));
}

TEST_CASE("ground truth: regular out-degree gives a point mass") {
    DirectedGraph g(3, {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}});
    GroundTruth t = ground_truth(g, LabelKind::OutDegree);
    CHECK(t.mass.size() == 1);
    CHECK(t.mass.at("2") == doctest::Approx(1.0));
}

TEST_CASE("ground truth: joint and attribute kinds; masses sum to one") {
    DirectedGraph g(3, {{0, 1}, {1, 2}, {2, 0}});
    GroundTruth j = ground_truth(g, LabelKind::JointDegree);
    CHECK(j.mass.at("1,1") == doctest::Approx(1.0));

    CHECK_THROWS_AS(ground_truth(g, LabelKind::Attribute), DataError);
    g.set_labels({{"a"}, {"a", "b"}, {"b"}});
    GroundTruth a = ground_truth(g, LabelKind::Attribute);
    CHECK(a.mass.at("a") == doctest::Approx(2.0 / 3));
    CHECK(a.mass.at("b") == doctest::Approx(2.0 / 3));  // multi-label: sums can exceed 1
}

TEST_CASE("ground truth matches an independent enumeration pass") {
    DirectedGraph g = generate_powerlaw_digraph(100, 2.0, 20, 11);
    for (LabelKind kind : {LabelKind::OutDegree, LabelKind::InDegree,
                           LabelKind::UndirectedDegree, LabelKind::JointDegree}) {
        GroundTruth t = ground_truth(g, kind);
        std::map<Label, double, LabelLess> hist;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            Label l;
            switch (kind) {
                case LabelKind::OutDegree: l = std::to_string(g.out_degree(v)); break;
                case LabelKind::InDegree: l = std::to_string(g.in_degree(v)); break;
                case LabelKind::UndirectedDegree: l = std::to_string(g.und_degree(v)); break;
                default: l = joint_label(g.in_degree(v), g.out_degree(v)); break;
            }
            hist[l] += 1.0 / static_cast<double>(g.node_count());
        }
        REQUIRE(t.mass.size() == hist.size());
        double sum = 0.0;
        for (const auto& [label, mass] : t.mass) {
            CHECK(mass == doctest::Approx(hist.at(label)).epsilon(1e-12));
            sum += mass;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

namespace {

// Brute-force SCC membership: u ~ v iff v reachable from u and u from v.
std::vector<std::vector<NodeId>> brute_sccs(const DirectedGraph& g) {
    auto reach = [&](NodeId s) {
        std::vector<char> seen(g.node_count(), 0);
        std::queue<NodeId> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty()) {
            NodeId v = q.front();
            q.pop();
            for (NodeId u : g.out_neighbors(v))
                if (!seen[u]) {
                    seen[u] = 1;
                    q.push(u);
                }
        }
        return seen;
    };
    std::vector<std::vector<char>> r;
    for (NodeId v = 0; v < g.node_count(); ++v) r.push_back(reach(v));
    std::vector<int> comp(g.node_count(), -1);
    std::vector<std::vector<NodeId>> out;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (comp[v] >= 0) continue;
        out.emplace_back();
        for (NodeId u = v; u < g.node_count(); ++u)
            if (comp[u] < 0 && r[v][u] && r[u][v]) {
                comp[u] = static_cast<int>(out.size()) - 1;
                out.back().push_back(u);
            }
    }
    return out;
}

}  // namespace

TEST_CASE("largest_scc matches a brute-force reachability oracle") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 10 + rng() % 25;
        std::vector<std::pair<NodeId, NodeId>> edges;
        std::size_t m = n + rng() % (2 * n);
        for (std::size_t i = 0; i < m; ++i) {
            NodeId u = static_cast<NodeId>(rng() % n), v = static_cast<NodeId>(rng() % n);
            if (u != v) edges.emplace_back(u, v);
        }
        if (edges.empty()) continue;
        DirectedGraph g(n, edges);
        auto sccs = brute_sccs(g);
        std::size_t best = 0;
        for (const auto& c : sccs) best = std::max(best, c.size());
        DirectedGraph sub = largest_scc(g);
        CHECK(sub.node_count() == best);
        // Strong connectivity of the output.
        if (sub.node_count() > 1) {
            auto subcomps = brute_sccs(sub);
            CHECK(subcomps.size() == 1);
        }
    }
}

TEST_CASE("largest_scc keeps original ids and labels") {
    // 0->1->0 is the SCC; 2 dangles.
    DirectedGraph g(3, {{0, 1}, {1, 0}, {1, 2}});
    g.set_labels({{"x"}, {"y"}, {"z"}});
    DirectedGraph sub = largest_scc(g);
    REQUIRE(sub.node_count() == 2);
    CHECK(sub.original_id(0) == 0);
    CHECK(sub.original_id(1) == 1);
    CHECK(sub.labels(0) == std::vector<std::string>{"x"});
    CHECK(sub.labels(1) == std::vector<std::string>{"y"});
}

TEST_CASE("powerlaw mass is a normalized truncated power law") {
    MassMap m = powerlaw_mass(2.0, 100);
    double sum = 0.0, z = 0.0;
    for (std::uint32_t d = 1; d <= 100; ++d) z += std::pow(d, -2.0);
    for (const auto& [label, mass] : m) sum += mass;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.at("1") == doctest::Approx(1.0 / z));
    CHECK(m.at("100") == doctest::Approx(std::pow(100.0, -2.0) / z));
}

TEST_CASE("generator: deterministic, capped, degenerate cap") {
    DirectedGraph a = generate_powerlaw_digraph(200, 2.0, 30, 9);
    DirectedGraph b = generate_powerlaw_digraph(200, 2.0, 30, 9);
    CHECK(a.edges() == b.edges());
    for (NodeId v = 0; v < a.node_count(); ++v) {
        CHECK(a.out_degree(v) <= 30);
        CHECK(a.in_degree(v) <= 30);
    }
    DirectedGraph c = generate_powerlaw_digraph(10, 1.0, 1, 3);
    for (NodeId v = 0; v < c.node_count(); ++v) CHECK(c.out_degree(v) <= 1);
}

TEST_CASE("generator: out-degree mass close to the target law (KS distance)") {
    DirectedGraph g = generate_powerlaw_digraph(1000, 2.0, 100, 17);
    GroundTruth t = ground_truth(g, LabelKind::OutDegree);
    MassMap target = powerlaw_mass(2.0, 100);
    double ks = 0.0, ce = 0.0, ct = 0.0;
    for (std::uint32_t d = 0; d <= 100; ++d) {
        Label l = std::to_string(d);
        auto it = t.mass.find(l);
        if (it != t.mass.end()) ce += it->second;
        auto jt = target.find(l);
        if (jt != target.end()) ct += jt->second;
        ks = std::max(ks, std::abs(ce - ct));
    }
    CHECK(ks < 0.05);
}

TEST_CASE("degree threshold for top fraction") {
    // Degrees [1 x9, 9]: only the hub survives a 10% cut.
    std::vector<std::pair<NodeId, NodeId>> e;
    for (NodeId leaf = 1; leaf <= 9; ++leaf) {
        e.emplace_back(0, leaf);
        e.emplace_back(leaf, 0);
    }
    DirectedGraph star(10, e);
    CHECK(degree_threshold_top_fraction(star, 0.1) == 9);

    // All degrees equal: threshold = that degree, set = all of V.
    DirectedGraph cyc(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK(degree_threshold_top_fraction(cyc, 0.1) == 2);

    // Sort-and-index oracle on a synthetic graph.
    DirectedGraph g = generate_powerlaw_digraph(200, 2.0, 50, 23);
    for (double f : {0.05, 0.1, 0.25}) {
        std::uint32_t t = degree_threshold_top_fraction(g, f);
        std::size_t at_or_above = 0;
        bool smaller_exists = false;
        std::set<std::uint32_t> present;
        for (NodeId v = 0; v < g.node_count(); ++v) present.insert(g.und_degree(v));
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (g.und_degree(v) >= t) ++at_or_above;
        CHECK(at_or_above <= static_cast<std::size_t>(f * g.node_count()) + 0);
        // The next smaller present degree would overshoot the fraction.
        auto it = present.find(t);
        REQUIRE(it != present.end());
        if (it != present.begin()) {
            --it;
            std::size_t above = 0;
            for (NodeId v = 0; v < g.node_count(); ++v)
                if (g.und_degree(v) >= *it) ++above;
            smaller_exists = above > static_cast<std::size_t>(f * g.node_count());
            CHECK(smaller_exists);
        }
    }
}

TEST_CASE("top-degree ground truth restricts to the high-degree set") {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (NodeId leaf = 1; leaf <= 9; ++leaf) {
        e.emplace_back(0, leaf);
        e.emplace_back(leaf, 0);
    }
    DirectedGraph star(10, e);
    star.set_labels({{"hub"}, {"leaf"}, {"leaf"}, {"leaf"}, {"leaf"}, {"leaf"},
                     {"leaf"}, {"leaf"}, {"leaf"}, {"leaf"}});
    GroundTruth t = ground_truth_top_degree(star, 9);
    CHECK(t.mass.at("hub") == doctest::Approx(1.0));
    CHECK(t.mass.count("leaf") == 0);
    CHECK_THROWS_AS(ground_truth_top_degree(star, 10), DataError);
}

TEST_CASE("attribute file loads by original id") {
    auto gpath = temp_file("dufs_t_attr_g.txt", "5 7\n7 5\n");
    auto apath = temp_file("dufs_t_attr_a.txt", "# comment\n5 red,blue\n7 red\n");
    DirectedGraph g = load_snap_edgelist(gpath);
    load_attributes(g, apath);
    CHECK(g.labels(0) == std::vector<std::string>{"red", "blue"});
    CHECK(g.labels(1) == std::vector<std::string>{"red"});

    auto bad = temp_file("dufs_t_attr_b.txt", "9 red\n");
    CHECK_THROWS_AS(load_attributes(g, bad), DataError);
    std::remove(gpath.c_str());
    std::remove(apath.c_str());
    std::remove(bad.c_str());
}
