#include "dufs/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace dufs {

double HybridSummary::mean_degree_hat() const {
    double mu_total = 0.0;
    for (const auto& [label, mu] : mu_per_label) mu_total += mu;
    return mu_total > 0.0 ? edge_samples / mu_total : 0.0;
}

namespace {

std::vector<Label> record_labels(const SampleRecord& r, LabelKind kind) {
    switch (kind) {
        case LabelKind::OutDegree: return {std::to_string(r.out_degree)};
        case LabelKind::InDegree: return {std::to_string(r.in_degree)};
        case LabelKind::UndirectedDegree: return {std::to_string(r.und_degree)};
        case LabelKind::JointDegree: return {joint_label(r.in_degree, r.out_degree)};
        case LabelKind::Attribute: return r.attrs;
    }
    return {};
}

}  // namespace

HybridSummary summarize(const SampleLog& log, LabelKind kind, std::uint32_t degree_threshold) {
    HybridSummary s;
    s.node_samples = static_cast<double>(log.initial_nodes.size());
    s.edge_samples = static_cast<double>(log.walk_samples.size());
    for (const auto& r : log.initial_nodes) {
        if (degree_threshold > 0 && r.und_degree < degree_threshold) continue;
        for (const auto& label : record_labels(r, kind)) s.n_per_label[label] += 1.0;
    }
    for (const auto& r : log.walk_samples) {
        double bias = r.weight;
        if (bias <= 0.0) throw DataError("walk sample with non-positive bias");
        s.max_bias = std::max(s.max_bias, bias);
        if (degree_threshold > 0 && r.und_degree < degree_threshold) continue;
        for (const auto& label : record_labels(r, kind)) {
            s.m_per_label_bias[label][bias] += 1.0;
            s.m_per_label[label] += 1.0;
            s.mu_per_label[label] += 1.0 / bias;
        }
    }
    return s;
}

Estimate edge_based_estimate(const SampleLog& log, LabelKind kind) {
    if (log.walk_samples.empty()) throw DataError("edge-based estimator needs walk samples");
    MassMap numer;
    double denom = 0.0;
    for (const auto& r : log.walk_samples) {
        if (r.weight <= 0.0) throw DataError("walk sample with non-positive bias");
        double inv = 1.0 / r.weight;
        denom += inv;
        for (const auto& label : record_labels(r, kind)) numer[label] += inv;
    }
    Estimate est;
    est.estimator_id = "edge";
    for (const auto& [label, v] : numer) est.mass[label] = v / denom;
    return est;
}

namespace {

struct LikelihoodTerms {
    std::vector<Label> labels;
    std::vector<double> counts;  // n_i + m_i
    std::vector<double> ratio;   // m_i / mu_i, 0 when m_i = 0
};

LikelihoodTerms likelihood_terms(const HybridSummary& s) {
    LikelihoodTerms t;
    MassMap total = s.n_per_label;
    for (const auto& [label, m] : s.m_per_label) total[label] += m;
    for (const auto& [label, c] : total) {
        if (c <= 0.0) continue;
        t.labels.push_back(label);
        t.counts.push_back(c);
        auto it = s.m_per_label.find(label);
        double m = it == s.m_per_label.end() ? 0.0 : it->second;
        t.ratio.push_back(m > 0.0 ? m / s.mu_per_label.at(label) : 0.0);
    }
    return t;
}

}  // namespace

double hybrid_log_likelihood(const HybridSummary& summary, const MassMap& theta) {
    LikelihoodTerms t = likelihood_terms(summary);
    double ll = 0.0, mass_sum = 0.0, edge_sum = 0.0;
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
        auto it = theta.find(t.labels[i]);
        double th = it == theta.end() ? 0.0 : it->second;
        if (th <= 0.0) return -std::numeric_limits<double>::infinity();
        ll += t.counts[i] * std::log(th);
        mass_sum += th;
        edge_sum += th * t.ratio[i];
    }
    if (summary.node_samples > 0.0) ll -= summary.node_samples * std::log(mass_sum);
    if (summary.edge_samples > 0.0) {
        if (edge_sum <= 0.0) return -std::numeric_limits<double>::infinity();
        ll -= summary.edge_samples * std::log(edge_sum);
    }
    return ll;
}

Estimate hybrid_mle_gradient(const HybridSummary& summary, double tol, int max_iter) {
    LikelihoodTerms t = likelihood_terms(summary);
    const std::size_t k = t.labels.size();
    Estimate est;
    est.estimator_id = "hybrid-mle";
    if (k == 0) throw DataError("no labeled samples to estimate from");
    const double N = summary.node_samples, M = summary.edge_samples;

    std::vector<double> beta(k, 0.0), theta(k), grad(k);
    auto softmax = [&](const std::vector<double>& b, std::vector<double>& th) {
        double bmax = *std::max_element(b.begin(), b.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += (th[i] = std::exp(b[i] - bmax));
        for (auto& x : th) x /= sum;
    };
    auto objective = [&](const std::vector<double>& th) {
        double ll = 0.0, edge_sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            ll += t.counts[i] * std::log(th[i]);
            edge_sum += th[i] * t.ratio[i];
        }
        if (M > 0.0) ll -= M * std::log(edge_sum);
        return ll;
    };

    softmax(beta, theta);
    double ll = objective(theta);
    int it = 0;
    double gnorm = 0.0;
    bool converged = false;
    std::vector<double> trial_beta(k), trial_theta(k);
    for (; it < max_iter; ++it) {
        double D = 0.0;
        for (std::size_t i = 0; i < k; ++i) D += theta[i] * t.ratio[i];
        gnorm = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            grad[i] = t.counts[i] - N * theta[i];
            if (M > 0.0 && D > 0.0) grad[i] -= M * theta[i] * t.ratio[i] / D;
            gnorm = std::max(gnorm, std::abs(grad[i]));
        }
        if (gnorm < tol) {
            converged = true;
            break;
        }
        // Backtracking line search on the Armijo condition.
        double step = 1.0 / (N + M);
        double gsq = 0.0;
        for (double g : grad) gsq += g * g;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < k; ++i) trial_beta[i] = beta[i] + step * grad[i];
            double pin = trial_beta.back();
            for (auto& b : trial_beta) b -= pin;
            softmax(trial_beta, trial_theta);
            double trial_ll = objective(trial_theta);
            if (trial_ll >= ll + 1e-4 * step * gsq) {
                beta = trial_beta;
                theta = trial_theta;
                ll = trial_ll;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }

    // The line search can stall from floating-point ties just above the
    // tolerance; polish with the self-consistency fixed point, which shares
    // the same stationary points.
    for (int polish = 0; !converged && polish < 1000; ++polish, ++it) {
        double D = 0.0;
        for (std::size_t i = 0; i < k; ++i) D += theta[i] * t.ratio[i];
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double denom = N + (D > 0.0 ? M * t.ratio[i] / D : 0.0);
            trial_theta[i] = denom > 0.0 ? t.counts[i] / denom : theta[i];
            sum += trial_theta[i];
        }
        if (sum <= 0.0) break;
        bool changed = false;
        for (std::size_t i = 0; i < k; ++i) {
            trial_theta[i] /= sum;
            changed = changed || trial_theta[i] != theta[i];
        }
        theta = trial_theta;
        D = 0.0;
        for (std::size_t i = 0; i < k; ++i) D += theta[i] * t.ratio[i];
        gnorm = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double g = t.counts[i] - N * theta[i];
            if (M > 0.0 && D > 0.0) g -= M * theta[i] * t.ratio[i] / D;
            gnorm = std::max(gnorm, std::abs(g));
        }
        if (gnorm < tol) converged = true;
        if (!changed) break;
    }

    // Fixed-point residual against the self-consistency equation.
    double D = 0.0;
    for (std::size_t i = 0; i < k; ++i) D += theta[i] * t.ratio[i];
    double resid = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double denom = N + (D > 0.0 ? M * t.ratio[i] / D : 0.0);
        if (denom > 0.0) resid = std::max(resid, std::abs(theta[i] - t.counts[i] / denom));
    }

    for (std::size_t i = 0; i < k; ++i) est.mass[t.labels[i]] = theta[i];
    est.diagnostics.iterations = it;
    est.diagnostics.grad_norm = gnorm;
    est.diagnostics.fixed_point_residual = resid;
    est.diagnostics.converged = converged;
    est.diagnostics.warning = !converged;
    return est;
}

Estimate hybrid_mle_em(const HybridSummary& summary, double tol, int max_iter) {
    LikelihoodTerms t = likelihood_terms(summary);
    const std::size_t k = t.labels.size();
    Estimate est;
    est.estimator_id = "hybrid-em";
    if (k == 0) throw DataError("no labeled samples to estimate from");
    const double N = summary.node_samples, M = summary.edge_samples;

    std::vector<double> theta(k), next(k);
    for (std::size_t i = 0; i < k; ++i) theta[i] = t.counts[i] / (N + M);
    int it = 0;
    double delta = 0.0;
    bool converged = false;
    for (; it < max_iter; ++it) {
        double D = 0.0;
        for (std::size_t i = 0; i < k; ++i) D += theta[i] * t.ratio[i];
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double denom = N + (D > 0.0 ? M * t.ratio[i] / D : 0.0);
            next[i] = denom > 0.0 ? t.counts[i] / denom : 0.0;
            sum += next[i];
        }
        if (sum > 0.0)
            for (auto& x : next) x /= sum;
        delta = 0.0;
        for (std::size_t i = 0; i < k; ++i) delta = std::max(delta, std::abs(next[i] - theta[i]));
        theta.swap(next);
        if (delta < tol) {
            converged = true;
            break;
        }
    }

    for (std::size_t i = 0; i < k; ++i) est.mass[t.labels[i]] = theta[i];
    est.diagnostics.iterations = it;
    est.diagnostics.fixed_point_residual = delta;
    est.diagnostics.converged = converged;
    est.diagnostics.warning = !converged;
    return est;
}

Estimate hybrid_nonrecursive(const HybridSummary& summary) {
    LikelihoodTerms t = likelihood_terms(summary);
    Estimate est;
    est.estimator_id = "hybrid";
    if (t.labels.empty()) throw DataError("no labeled samples to estimate from");
    const double N = summary.node_samples, M = summary.edge_samples;
    const double d_hat = summary.mean_degree_hat();
    if (M <= 0.0 || d_hat <= 0.0) est.diagnostics.warning = true;
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
        double value;
        if (t.ratio[i] > 0.0 && d_hat > 0.0) {
            value = t.counts[i] / (N + M * t.ratio[i] / d_hat);
        } else {
            value = N > 0.0 ? t.counts[i] / N : 0.0;
        }
        est.mass[t.labels[i]] = value;
    }
    return est;
}

Estimate apply_variance_reduction(Estimate est, const HybridSummary& summary) {
    int zeroed = 0;
    for (auto& [label, mass] : est.mass) {
        auto it = summary.m_per_label.find(label);
        if (it == summary.m_per_label.end() || it->second <= 0.0) {
            if (mass != 0.0) ++zeroed;
            mass = 0.0;
        }
    }
    est.diagnostics.zeroed_labels = zeroed;
    return est;
}

Estimate mvue_degree_estimate(const HybridSummary& summary, double mean_degree) {
    if (mean_degree <= 0.0) throw ConfigError("mvue needs a positive mean degree");
    LikelihoodTerms t = likelihood_terms(summary);
    Estimate est;
    est.estimator_id = "mvue";
    if (t.labels.empty()) throw DataError("no labeled samples to estimate from");
    const double N = summary.node_samples, M = summary.edge_samples;
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
        double degree = static_cast<double>(label_degree(t.labels[i]));
        est.mass[t.labels[i]] = t.counts[i] / (N + M * degree / mean_degree);
    }
    return est;
}

void write_estimate_csv(std::ostream& out, const std::vector<Estimate>& runs) {
    out << "run,label,mass,estimator_id,iterations,grad_norm,fixed_point_residual,"
           "zeroed_labels,converged,warning\n";
    out.precision(17);
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& est = runs[r];
        const auto& d = est.diagnostics;
        for (const auto& [label, mass] : est.mass) {
            out << r << ",\"" << label << "\"," << mass << ',' << est.estimator_id << ','
                << d.iterations << ',' << d.grad_norm << ',' << d.fixed_point_residual << ','
                << d.zeroed_labels << ',' << (d.converged ? 1 : 0) << ',' << (d.warning ? 1 : 0)
                << '\n';
        }
    }
}

}  // namespace dufs
