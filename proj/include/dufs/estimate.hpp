#ifndef DUFS_ESTIMATE_HPP
#define DUFS_ESTIMATE_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dufs/common.hpp"
#include "dufs/walk.hpp"

namespace dufs {

/// Sufficient statistics of a SampleLog for the hybrid estimator family.
/// Biases are real-valued (deg + w with fractional w).
struct HybridSummary {
    MassMap n_per_label;                              // n_i
    std::map<Label, std::map<double, double>, LabelLess> m_per_label_bias;  // m_{i,j}
    MassMap m_per_label;                              // m_i
    MassMap mu_per_label;                             // mu_i = sum_j m_{i,j}/j
    double node_samples = 0.0;                        // N
    double edge_samples = 0.0;                        // M
    double max_bias = 0.0;                            // Z

    /// d_hat = M / sum_i mu_i; 0 when M = 0 (flagged by callers).
    double mean_degree_hat() const;
};

struct Estimate {
    MassMap mass;
    std::string estimator_id;
    struct Diagnostics {
        int iterations = 0;
        double grad_norm = 0.0;
        double fixed_point_residual = 0.0;
        int zeroed_labels = 0;
        bool converged = true;
        bool warning = false;
    } diagnostics;
};

/// Count node and edge samples per label. For the attribute kind a sample
/// contributes to every label it carries; with degree_threshold > 0 only
/// samples whose node has und_degree >= threshold contribute labels (N and
/// M still count every sample).
HybridSummary summarize(const SampleLog& log, LabelKind kind, std::uint32_t degree_threshold = 0);

/// Self-normalizing edge-based estimator over walk samples only:
/// theta_l = [sum 1{l}/bias] / [sum 1/bias].
Estimate edge_based_estimate(const SampleLog& log, LabelKind kind);

/// MLE of the partition-constrained likelihood via gradient ascent in
/// softmax parameters (last label pinned). Restricted to partition label
/// kinds.
Estimate hybrid_mle_gradient(const HybridSummary& summary, double tol = 1e-8, int max_iter = 10000);

/// Same stationary point via fixed-point (EM) iteration.
Estimate hybrid_mle_em(const HybridSummary& summary, double tol = 1e-12, int max_iter = 10000);

/// Closed form theta_i = (n_i+m_i) / (N + M*(m_i/mu_i)/d_hat); reduces to
/// n_i/N when m_i = 0. Per-label: masses are not renormalized.
Estimate hybrid_nonrecursive(const HybridSummary& summary);

/// Zero every label with m_i = 0. No renormalization.
Estimate apply_variance_reduction(Estimate est, const HybridSummary& summary);

/// Degree-label special case with known mean degree:
/// theta_i = (n_i+m_i) / (N + M*i/mean_degree).
Estimate mvue_degree_estimate(const HybridSummary& summary, double mean_degree);

/// Log-likelihood of the hybrid model at a given mass vector, up to an
/// additive constant. Shared by the optimizer and by test oracles.
double hybrid_log_likelihood(const HybridSummary& summary, const MassMap& theta);

void write_estimate_csv(std::ostream& out, const std::vector<Estimate>& runs);

}  // namespace dufs

#endif
