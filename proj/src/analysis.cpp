#include "dufs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace dufs {

namespace {

bool single_degree_kind(LabelKind kind) {
    return kind == LabelKind::OutDegree || kind == LabelKind::InDegree ||
           kind == LabelKind::UndirectedDegree;
}

double mass_mean_degree(const MassMap& mass) {
    double mean = 0.0;
    for (const auto& [label, th] : mass) mean += static_cast<double>(label_degree(label)) * th;
    return mean;
}

void head_tail_split(NrmseReport& report, const MassMap& truth_mass) {
    double mean = mass_mean_degree(truth_mass);
    std::vector<long long> degrees;
    for (const auto& [label, th] : truth_mass)
        if (th > 0.0) degrees.push_back(label_degree(label));
    std::sort(degrees.begin(), degrees.end());
    // Tail: the largest 1% of distinct degree values present, at least one.
    std::size_t tail_count = std::max<std::size_t>(1, degrees.size() / 100);
    std::size_t tail_from = degrees.size() - tail_count;
    double head_sum = 0.0, tail_sum = 0.0;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        Label label = std::to_string(degrees[i]);
        auto it = report.per_label_nrmse.find(label);
        if (it == report.per_label_nrmse.end()) continue;
        if (static_cast<double>(degrees[i]) < mean) {
            report.head_labels.push_back(label);
            head_sum += it->second;
        }
        if (i >= tail_from) {
            report.tail_labels.push_back(label);
            tail_sum += it->second;
        }
    }
    if (!report.head_labels.empty()) report.head_mean = head_sum / report.head_labels.size();
    if (!report.tail_labels.empty()) report.tail_mean = tail_sum / report.tail_labels.size();
}

}  // namespace

NrmseReport empirical_nrmse(const std::vector<Estimate>& runs, const GroundTruth& truth) {
    if (runs.empty()) throw ConfigError("nrmse needs at least one run");
    NrmseReport report;
    report.run_count = runs.size();
    const double r = static_cast<double>(runs.size());
    for (const auto& [label, th] : truth.mass) {
        if (th <= 0.0) continue;
        double sq = 0.0;
        for (const auto& run : runs) {
            auto it = run.mass.find(label);
            double hat = it == run.mass.end() ? 0.0 : it->second;
            sq += (hat - th) * (hat - th);
        }
        report.per_label_nrmse[label] = std::sqrt(sq / r) / th;
    }
    if (single_degree_kind(truth.kind)) head_tail_split(report, truth.mass);
    return report;
}

AnalyticNrmse analytic_node_sampling_nrmse(const GroundTruth& truth, std::int64_t budget) {
    if (budget <= 0) throw ConfigError("analytic nrmse needs a positive budget");
    AnalyticNrmse a;
    a.model = SamplingModel::NodeSampling;
    const double b = static_cast<double>(budget);
    for (const auto& [label, th] : truth.mass) {
        if (th <= 0.0) continue;
        a.per_label[label] = std::sqrt((1.0 / th - 1.0) / b);
    }
    if (single_degree_kind(truth.kind)) {
        // Least-squares power-law fit log th = -beta log d - log Z.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t n = 0;
        long long dmax = 0;
        for (const auto& [label, th] : truth.mass) {
            long long d = label_degree(label);
            if (d <= 0 || th <= 0.0) continue;
            double x = std::log(static_cast<double>(d)), y = std::log(th);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++n;
            dmax = std::max(dmax, d);
        }
        if (n >= 2 && sxx * n - sx * sx > 0) {
            double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            double intercept = (sy - slope * sx) / n;
            a.has_powerlaw = true;
            a.powerlaw.beta = -slope;
            a.powerlaw.normalizer = std::exp(-intercept);
            a.powerlaw.tail_cutoff = static_cast<std::uint32_t>(dmax);
        }
    }
    return a;
}

AnalyticNrmse analytic_edge_sampling_nrmse(const GroundTruth& truth, std::int64_t budget) {
    if (budget <= 0) throw ConfigError("analytic nrmse needs a positive budget");
    if (!single_degree_kind(truth.kind))
        throw ConfigError("edge-sampling analytic nrmse needs a degree label kind");
    AnalyticNrmse a;
    a.model = SamplingModel::EdgeSampling;
    const double b = static_cast<double>(budget);
    const double mean = mass_mean_degree(truth.mass);
    if (mean <= 0.0) throw DataError("degenerate degree distribution");
    for (const auto& [label, th] : truth.mass) {
        long long d = label_degree(label);
        if (th <= 0.0 || d <= 0) continue;
        double pi = static_cast<double>(d) * th / mean;
        a.per_label[label] = std::sqrt((1.0 / pi - 1.0) / b);
    }
    return a;
}

double loglog_slope(const MassMap& per_degree_nrmse, long long degree_min, long long degree_max) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (const auto& [label, value] : per_degree_nrmse) {
        long long d = label_degree(label);
        if (d < degree_min || d > degree_max || d <= 0 || value <= 0.0) continue;
        double x = std::log(static_cast<double>(d)), y = std::log(value);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n < 2) throw DataError("too few points for a log-log fit");
    double denom = n * sxx - sx * sx;
    if (denom <= 0.0) throw DataError("degenerate log-log fit");
    return (n * sxy - sx * sy) / denom;
}

NrmseReport joint_error_grid(const std::vector<Estimate>& runs, const GroundTruth& truth) {
    if (truth.kind != LabelKind::JointDegree)
        throw ConfigError("joint error grid needs joint-degree truth");
    return empirical_nrmse(runs, truth);
}

MassMap nrmse_ratio(const NrmseReport& a, const NrmseReport& b) {
    MassMap out;
    for (const auto& [label, av] : a.per_label_nrmse) {
        auto it = b.per_label_nrmse.find(label);
        if (it == b.per_label_nrmse.end() || it->second <= 0.0) continue;
        out[label] = av / it->second;
    }
    return out;
}

TopDecileReport top_decile_attribute_task(const std::vector<Estimate>& runs,
                                          const GroundTruth& truth_top,
                                          double top_fraction, std::int64_t budget) {
    if (top_fraction <= 0.0 || top_fraction > 1.0)
        throw ConfigError("top fraction must be in (0, 1]");
    // Restricted estimates target f * conditional mass; rescale to the
    // conditional distribution before comparing.
    std::vector<Estimate> scaled = runs;
    for (auto& run : scaled)
        for (auto& [label, mass] : run.mass) mass /= top_fraction;
    TopDecileReport out;
    out.report = empirical_nrmse(scaled, truth_top);
    GroundTruth unconditional = truth_top;
    for (auto& [label, mass] : unconditional.mass) mass *= top_fraction;
    out.node_sampling_baseline = analytic_node_sampling_nrmse(unconditional, budget);
    return out;
}

void write_nrmse_csv(std::ostream& out, const NrmseReport& report,
                     const std::string& estimator_id) {
    out << "label,nrmse,estimator_id\n";
    out.precision(17);
    for (const auto& [label, value] : report.per_label_nrmse)
        out << '"' << label << "\"," << value << ',' << estimator_id << '\n';
    if (!report.head_labels.empty())
        out << "\"head-mean\"," << report.head_mean << ',' << estimator_id << '\n';
    if (!report.tail_labels.empty())
        out << "\"tail-mean\"," << report.tail_mean << ',' << estimator_id << '\n';
}

void write_analytic_csv(std::ostream& out, const AnalyticNrmse& a) {
    const char* model = a.model == SamplingModel::NodeSampling ? "node-sampling" : "edge-sampling";
    out << "label,nrmse,model\n";
    out.precision(17);
    for (const auto& [label, value] : a.per_label)
        out << '"' << label << "\"," << value << ',' << model << '\n';
}

std::string plotspec_json(LabelKind kind) {
    nlohmann::json spec;
    spec["x"] = label_kind_name(kind);
    spec["y"] = "nrmse";
    bool degree = kind != LabelKind::Attribute;
    spec["x_scale"] = degree ? "log" : "linear";
    spec["y_scale"] = degree ? "log" : "linear";
    if (kind == LabelKind::JointDegree) {
        spec["layout"] = "grid";
        spec["x"] = "in-degree";
        spec["facet"] = "out-degree";
    }
    return spec.dump(2);
}

}  // namespace dufs
