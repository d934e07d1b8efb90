#pragma once

#include <spstorm/core.hpp>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spstorm {

/// chi(x; alpha) = ||prox_{alpha r}(x - alpha grad f(x)) - x|| / alpha.
double gradient_mapping_norm(const ProblemInstance& instance, const Vector& x, double alpha);

struct SupportMetricsReport {
    std::size_t epochs = 0;
    std::size_t total_identifications = 0;
    std::optional<std::size_t> first_identification;             // 1-based epoch
    std::optional<std::size_t> first_consistent_identification;  // 1-based epoch
    double last_iterate_recovery = 0.0;
};

/// supports[e] is the support at epoch e + 1.
SupportMetricsReport support_metrics(std::span<const SupportSet> supports, const SupportSet& s_star);

/// Same metrics from per-epoch match flags and the last support's symmetric
/// difference with S*; used when only support hashes are stored.
SupportMetricsReport support_metrics(const std::vector<bool>& matches, std::size_t last_symmetric_difference,
                                     std::size_t star_size);

enum class Better { LOWER, HIGHER };

struct ScoreEntry {
    std::string name;
    double value = 0.0;
    bool failed = false;
};

struct ScoreResult {
    std::vector<double> raw;         // same order as the input
    std::vector<double> normalized;  // raw / sum(raw), or all zero when all_failed
    bool all_failed = false;
};

/// With A entries the best distinct value scores A, the next distinct value
/// A - 1, and so on; tied values share a score and failures score 0.
ScoreResult score_algorithms(const std::vector<ScoreEntry>& entries, Better better);

/// (F_j - F*) / max(1, F*) with F* the smallest finite entry (or the hint if
/// smaller). Failed algorithms (nullopt or non-finite) map to +infinity.
std::map<std::string, double> objective_gap(const std::map<std::string, std::optional<double>>& best,
                                            std::optional<double> f_star_hint = std::nullopt);

struct NondegeneracyConstants {
    double Delta = 1.0;
    double Delta_star = 1.0;
    double delta_min = 1.0;
    double delta_star = 1.0;
};

NondegeneracyConstants nondegeneracy_constants(const GroupPartition& partition, const Vector& x_star,
                                               const Vector& grad_at_star);

struct SufficientConditionReport {
    bool hypothesis1 = false;  // inactive-block closeness of z to the optimal prox input
    bool hypothesis2 = false;  // ||y - x*|| < Delta*
    double hypothesis1_max = 0.0;
    double distance = 0.0;
    SupportSet support_y;
    SupportSet support_star;
    bool support_within_star = false;    // S(y) subset of S(x*)
    bool star_within_support = false;    // S(x*) subset of S(y)
    bool implications_hold = false;      // h1 => first containment, h2 => second
};

/// Evaluates the support-containment predicate at y = prox(z, alpha).
SufficientConditionReport sufficient_condition_check(const GroupPartition& partition, const Vector& z, double alpha,
                                                     const Vector& x_star, const Vector& grad_at_star,
                                                     double delta_star, double Delta_star);

struct EnvelopeScales {
    double u_constant = 1.0;          // multiplies U(k)
    double iterate_constant = 1.0;    // multiplies the structural factor of c2_bar
    double initial_distance_sq = 1.0; // ||x_{k_underline} - x*||^2
};

struct EnvelopePoint {
    std::size_t k = 0;
    double U = 0.0;
    double iterate_bound = 0.0;  // bound on ||x_k - x*||^2
};

std::vector<EnvelopePoint> theory_envelopes(const TheoryConstants& constants, std::span<const std::size_t> ks,
                                            const EnvelopeScales& scales = {});

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least squares fit of log(value) against log(k).
RateFit rate_fit(std::span<const double> ks, std::span<const double> values);

}  // namespace spstorm
