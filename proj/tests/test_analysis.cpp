#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "dufs/analysis.hpp"

using namespace dufs;

namespace {

Estimate make_est(std::initializer_list<std::pair<Label, double>> masses) {
    Estimate e;
    e.estimator_id = "test";
    for (const auto& [l, v] : masses) e.mass[l] = v;
    return e;
}

GroundTruth degree_truth(std::initializer_list<std::pair<Label, double>> masses,
                         LabelKind kind = LabelKind::UndirectedDegree) {
    GroundTruth t;
    t.kind = kind;
    double mean = 0.0;
    for (const auto& [l, v] : masses) {
        t.mass[l] = v;
        mean += label_degree(l) * v;
    }
    t.mean_undirected_degree = mean;
    return t;
}

}  // namespace

TEST_CASE("empirical nrmse: exact runs give zero, hand case gives 0.2") {
    GroundTruth t = degree_truth({{"2", 0.5}, {"3", 0.5}});
    std::vector<Estimate> exact = {make_est({{"2", 0.5}, {"3", 0.5}}),
                                   make_est({{"2", 0.5}, {"3", 0.5}})};
    NrmseReport r = empirical_nrmse(exact, t);
    CHECK(r.per_label_nrmse.at("2") == doctest::Approx(0.0));
    CHECK(r.run_count == 2);

    // theta = 0.5, estimates {0.4, 0.6}: sqrt(0.01)/0.5 = 0.2.
    std::vector<Estimate> two = {make_est({{"2", 0.4}, {"3", 0.6}}),
                                 make_est({{"2", 0.6}, {"3", 0.4}})};
    NrmseReport r2 = empirical_nrmse(two, t);
    CHECK(r2.per_label_nrmse.at("2") == doctest::Approx(0.2));
    CHECK(r2.per_label_nrmse.at("3") == doctest::Approx(0.2));
}

TEST_CASE("empirical nrmse: missing labels count as zero estimates; zero truth excluded") {
    GroundTruth t = degree_truth({{"1", 0.5}, {"2", 0.5}});
    t.mass["3"] = 0.0;
    std::vector<Estimate> runs = {make_est({{"1", 0.5}}), make_est({{"1", 0.5}})};
    NrmseReport r = empirical_nrmse(runs, t);
    CHECK(r.per_label_nrmse.at("2") == doctest::Approx(1.0));  // full-mass error
    CHECK(r.per_label_nrmse.count("3") == 0);
}

TEST_CASE("empirical nrmse is permutation invariant over runs") {
    GroundTruth t = degree_truth({{"1", 0.3}, {"2", 0.7}});
    std::vector<Estimate> runs = {make_est({{"1", 0.2}, {"2", 0.8}}),
                                  make_est({{"1", 0.4}, {"2", 0.6}}),
                                  make_est({{"1", 0.3}, {"2", 0.7}})};
    NrmseReport a = empirical_nrmse(runs, t);
    std::reverse(runs.begin(), runs.end());
    NrmseReport b = empirical_nrmse(runs, t);
    CHECK(a.per_label_nrmse == b.per_label_nrmse);
}

TEST_CASE("head and tail splits") {
    // Mean degree of this truth is 1*0.6+2*0.2+10*0.1+100*0.1 = 12.
    GroundTruth t = degree_truth({{"1", 0.6}, {"2", 0.2}, {"10", 0.1}, {"100", 0.1}});
    std::vector<Estimate> runs(2, make_est({{"1", 0.5}, {"2", 0.2}, {"10", 0.1}, {"100", 0.1}}));
    NrmseReport r = empirical_nrmse(runs, t);
    CHECK(r.head_labels == std::vector<Label>{"1", "2", "10"});
    // 4 distinct degrees -> max(1, 4/100) = 1 tail label, the largest.
    CHECK(r.tail_labels == std::vector<Label>{"100"});
    CHECK(r.head_mean > 0.0);
    CHECK(r.tail_mean == doctest::Approx(0.0));
}

TEST_CASE("analytic node-sampling error: hand case 0.1 and degenerate mass") {
    GroundTruth t = degree_truth({{"2", 0.5}, {"1", 0.5}});
    AnalyticNrmse a = analytic_node_sampling_nrmse(t, 100);
    CHECK(a.per_label.at("2") == doctest::Approx(0.1));

    GroundTruth point = degree_truth({{"3", 1.0}});
    AnalyticNrmse b = analytic_node_sampling_nrmse(point, 100);
    CHECK(b.per_label.at("3") == doctest::Approx(0.0));
}

TEST_CASE("analytic edge-sampling error: regular graphs coincide with node sampling") {
    GroundTruth t = degree_truth({{"2", 0.5}, {"4", 0.5}});
    // pi_d = d theta_d / mean with mean = 3.
    AnalyticNrmse e = analytic_edge_sampling_nrmse(t, 100);
    CHECK(e.per_label.at("2") == doctest::Approx(std::sqrt((3.0 / 1.0 - 1.0) / 100)));

    // All nodes share degree 2: pi_d = theta_d, models coincide.
    GroundTruth reg = degree_truth({{"2", 1.0}});
    AnalyticNrmse en = analytic_edge_sampling_nrmse(reg, 100);
    AnalyticNrmse nn = analytic_node_sampling_nrmse(reg, 100);
    CHECK(en.per_label.at("2") == doctest::Approx(nn.per_label.at("2")));

    GroundTruth attr;
    attr.kind = LabelKind::Attribute;
    attr.mass["x"] = 1.0;
    CHECK_THROWS_AS(analytic_edge_sampling_nrmse(attr, 100), ConfigError);
}

TEST_CASE("node sampling beats edge sampling exactly below the mean degree") {
    MassMap target = powerlaw_mass(2.0, 50);
    GroundTruth t;
    t.kind = LabelKind::UndirectedDegree;
    t.mass = target;
    double mean = 0.0;
    for (const auto& [l, v] : target) mean += label_degree(l) * v;
    t.mean_undirected_degree = mean;
    AnalyticNrmse node = analytic_node_sampling_nrmse(t, 1000);
    AnalyticNrmse edge = analytic_edge_sampling_nrmse(t, 1000);
    for (const auto& [l, v] : node.per_label) {
        long long d = label_degree(l);
        if (static_cast<double>(d) < mean)
            CHECK(v < edge.per_label.at(l));
        else if (static_cast<double>(d) > mean)
            CHECK(v > edge.per_label.at(l));
    }
}

TEST_CASE("analytic errors scale as 1/sqrt(B)") {
    GroundTruth t = degree_truth({{"1", 0.7}, {"5", 0.3}});
    AnalyticNrmse a1 = analytic_node_sampling_nrmse(t, 250);
    AnalyticNrmse a4 = analytic_node_sampling_nrmse(t, 1000);
    for (const auto& [l, v] : a1.per_label) CHECK(a4.per_label.at(l) == doctest::Approx(v / 2));
    AnalyticNrmse e1 = analytic_edge_sampling_nrmse(t, 250);
    AnalyticNrmse e4 = analytic_edge_sampling_nrmse(t, 1000);
    for (const auto& [l, v] : e1.per_label) CHECK(e4.per_label.at(l) == doctest::Approx(v / 2));
}

TEST_CASE("analytic error is monotone decreasing in the true mass") {
    double prev = 1e300;
    for (double th : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        GroundTruth t = degree_truth({{"1", th}, {"2", 1.0 - th}});
        double v = analytic_node_sampling_nrmse(t, 100).per_label.at("1");
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("log-log slope recovers a known power law") {
    MassMap curve;
    for (int d = 1; d <= 64; ++d)
        curve[std::to_string(d)] = 3.0 * std::pow(static_cast<double>(d), 1.25);
    CHECK(loglog_slope(curve, 1, 64) == doctest::Approx(1.25).epsilon(1e-9));
    CHECK_THROWS_AS(loglog_slope(curve, 70, 80), DataError);
}

TEST_CASE("fitted analytic slopes match the closed-form exponents") {
    MassMap target = powerlaw_mass(2.0, 100);
    GroundTruth t;
    t.kind = LabelKind::UndirectedDegree;
    t.mass = target;
    double mean = 0.0;
    for (const auto& [l, v] : target) mean += label_degree(l) * v;
    t.mean_undirected_degree = mean;
    // For theta_d << 1, NRMSE ~ d^{beta/2} (node) and d^{(beta-1)/2} (edge).
    AnalyticNrmse node = analytic_node_sampling_nrmse(t, 100000);
    AnalyticNrmse edge = analytic_edge_sampling_nrmse(t, 100000);
    CHECK(loglog_slope(node.per_label, 4, 100) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(loglog_slope(edge.per_label, 4, 100) == doctest::Approx(0.5).epsilon(0.2));
    CHECK(node.has_powerlaw);
    CHECK(node.powerlaw.beta == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("joint error grid") {
    GroundTruth t;
    t.kind = LabelKind::JointDegree;
    t.mass[joint_label(1, 1)] = 0.5;
    t.mass[joint_label(2, 1)] = 0.5;
    std::vector<Estimate> runs(2, make_est({{joint_label(1, 1), 0.4}, {joint_label(2, 1), 0.6}}));
    NrmseReport r = joint_error_grid(runs, t);
    CHECK(r.per_label_nrmse.at("1,1") == doctest::Approx(0.2));

    GroundTruth single;
    single.kind = LabelKind::JointDegree;
    single.mass[joint_label(3, 4)] = 1.0;
    std::vector<Estimate> sr(2, make_est({{joint_label(3, 4), 0.9}}));
    NrmseReport one = joint_error_grid(sr, single);
    CHECK(one.per_label_nrmse.size() == 1);

    GroundTruth wrong = degree_truth({{"1", 1.0}});
    CHECK_THROWS_AS(joint_error_grid(runs, wrong), ConfigError);
}

TEST_CASE("identical reports give unit ratios") {
    GroundTruth t = degree_truth({{"1", 0.5}, {"2", 0.5}});
    std::vector<Estimate> runs = {make_est({{"1", 0.4}, {"2", 0.6}}),
                                  make_est({{"1", 0.55}, {"2", 0.45}})};
    NrmseReport r = empirical_nrmse(runs, t);
    MassMap ratio = nrmse_ratio(r, r);
    for (const auto& [l, v] : ratio) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("top-decile task rescales restricted estimates") {
    GroundTruth top;
    top.kind = LabelKind::Attribute;
    top.mass["hub"] = 1.0;
    // Restricted estimator mass targets f * conditional mass = 0.1.
    std::vector<Estimate> runs(2, make_est({{"hub", 0.1}}));
    TopDecileReport r = top_decile_attribute_task(runs, top, 0.1, 100);
    CHECK(r.report.per_label_nrmse.at("hub") == doctest::Approx(0.0));
    CHECK(r.node_sampling_baseline.per_label.at("hub") ==
          doctest::Approx(std::sqrt((1.0 / 0.1 - 1.0) / 100)));
    CHECK_THROWS_AS(top_decile_attribute_task(runs, top, 0.0, 100), ConfigError);
}

TEST_CASE("csv writers and plotspec") {
    GroundTruth t = degree_truth({{"1", 0.5}, {"2", 0.5}});
    std::vector<Estimate> runs(2, make_est({{"1", 0.5}, {"2", 0.5}}));
    NrmseReport r = empirical_nrmse(runs, t);
    std::ostringstream out;
    write_nrmse_csv(out, r, "hybrid");
    CHECK(out.str().find("label,nrmse,estimator_id") == 0);
    CHECK(out.str().find("head-mean") != std::string::npos);

    std::ostringstream aout;
    write_analytic_csv(aout, analytic_node_sampling_nrmse(t, 100));
    CHECK(aout.str().find("node-sampling") != std::string::npos);

    std::string spec = plotspec_json(LabelKind::OutDegree);
    CHECK(spec.find("log") != std::string::npos);
    CHECK(plotspec_json(LabelKind::Attribute).find("linear") != std::string::npos);
    CHECK(plotspec_json(LabelKind::JointDegree).find("grid") != std::string::npos);
}
