#ifndef DUFS_ANALYSIS_HPP
#define DUFS_ANALYSIS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dufs/common.hpp"
#include "dufs/estimate.hpp"
#include "dufs/graph.hpp"

namespace dufs {

struct NrmseReport {
    MassMap per_label_nrmse;
    std::size_t run_count = 0;
    std::vector<Label> head_labels;  // degrees below the mean
    std::vector<Label> tail_labels;  // largest 1% of distinct degree values
    double head_mean = 0.0;
    double tail_mean = 0.0;
};

enum class SamplingModel { NodeSampling, EdgeSampling };

struct PowerlawFit {
    double beta = 0.0;
    double normalizer = 0.0;  // Z
    std::uint32_t tail_cutoff = 0;  // tau
};

struct AnalyticNrmse {
    SamplingModel model = SamplingModel::NodeSampling;
    MassMap per_label;
    bool has_powerlaw = false;
    PowerlawFit powerlaw;
};

/// NRMSE(l) = sqrt(mean_r (theta_hat_r - theta)^2) / theta over R runs.
/// Labels missing from a run contribute theta_hat = 0; labels with zero
/// true mass are excluded.
NrmseReport empirical_nrmse(const std::vector<Estimate>& runs, const GroundTruth& truth);

/// NRMSE = sqrt((1/theta_d - 1)/B) for uniform node sampling.
AnalyticNrmse analytic_node_sampling_nrmse(const GroundTruth& truth, std::int64_t budget);

/// NRMSE = sqrt((1/pi_d - 1)/B) with pi_d = d*theta_d/mean_degree, for
/// uniform edge sampling. Degree label kinds only.
AnalyticNrmse analytic_edge_sampling_nrmse(const GroundTruth& truth, std::int64_t budget);

/// Least-squares slope of log(nrmse) against log(degree) over
/// [degree_min, degree_max].
double loglog_slope(const MassMap& per_degree_nrmse, long long degree_min, long long degree_max);

/// Per-cell NRMSE for the joint (in-degree, out-degree) label kind.
NrmseReport joint_error_grid(const std::vector<Estimate>& runs, const GroundTruth& truth);

/// Per-label ratio a/b over labels present in both reports.
MassMap nrmse_ratio(const NrmseReport& a, const NrmseReport& b);

/// Attribute NRMSE over the top-degree node set. `runs` must come from
/// threshold-restricted summaries; their masses are rescaled by the true
/// top-set fraction before comparison. Attaches the node-sampling
/// analytic baseline.
struct TopDecileReport {
    NrmseReport report;
    AnalyticNrmse node_sampling_baseline;
};
TopDecileReport top_decile_attribute_task(const std::vector<Estimate>& runs,
                                          const GroundTruth& truth_top,
                                          double top_fraction, std::int64_t budget);

void write_nrmse_csv(std::ostream& out, const NrmseReport& report, const std::string& estimator_id);
void write_analytic_csv(std::ostream& out, const AnalyticNrmse& a);

/// Axis/scale hints for external plotting.
std::string plotspec_json(LabelKind kind);

}  // namespace dufs

#endif
