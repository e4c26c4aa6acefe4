#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gwcp/core.hpp"

namespace gwcp {

// Groups are indexed 0..K-1 throughout the C++ API. The CLI and calibration
// files use 1-based labels and translate at the boundary.

/// Calibration scores partitioned into K groups. Empty groups are allowed,
/// but at least one score must be present overall.
class GroupedScores {
public:
    explicit GroupedScores(std::vector<std::vector<double>> scores_by_group);

    /// Builds K groups from parallel (0-based label, score) sequences.
    static GroupedScores from_labels(std::size_t num_groups, std::span<const std::size_t> labels,
                                     std::span<const double> scores);

    std::size_t num_groups() const noexcept { return groups_.size(); }
    std::size_t total() const noexcept { return total_; }
    std::size_t count(std::size_t k) const { return groups_.at(k).size(); }
    std::span<const double> group(std::size_t k) const { return groups_.at(k); }
    std::vector<std::size_t> counts() const;

private:
    std::vector<std::vector<double>> groups_;
    std::size_t total_ = 0;
};

/// Probability vector over K groups (entries >= 0, sum within 1e-9 of 1).
class GroupSimplex {
public:
    explicit GroupSimplex(std::vector<double> probs);
    static GroupSimplex uniform(std::size_t num_groups);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t k) const { return probs_.at(k); }
    std::span<const double> probs() const noexcept { return probs_; }

private:
    std::vector<double> probs_;
};

/// A single score threshold, or one threshold per test group.
class ThresholdRule {
public:
    enum class Kind { global, per_group };

    static ThresholdRule global(ExtendedScore threshold);
    static ThresholdRule per_group(std::vector<ExtendedScore> thresholds);

    Kind kind() const noexcept { return kind_; }
    ExtendedScore global_threshold() const;
    std::span<const ExtendedScore> group_thresholds() const noexcept { return thresholds_; }

    /// Threshold applied to a test point from the given group.
    ExtendedScore threshold_for(std::size_t group) const;

    friend bool operator==(const ThresholdRule&, const ThresholdRule&) = default;

private:
    ThresholdRule(Kind kind, std::vector<ExtendedScore> thresholds)
        : kind_(kind), thresholds_(std::move(thresholds)) {}

    Kind kind_;
    std::vector<ExtendedScore> thresholds_;
};

enum class WeightSource { oracle, pretraining, calibration };

/// Inputs selecting where the group proportions p_k behind w_k = q_k / p_k come from.
struct WeightOptions {
    WeightSource source = WeightSource::calibration;
    /// True training proportions; required for WeightSource::oracle.
    std::optional<GroupSimplex> p_true;
    /// Group counts of the pretraining sample; required for WeightSource::pretraining.
    std::vector<std::int64_t> pretrain_counts;
    /// When set, a +inf atom carrying this group's weight is added (WCP with
    /// the test point's own weight).
    std::optional<std::size_t> test_atom_group;
};

/// Ordinary split conformal threshold at level (1 - alpha)(1 + 1/n).
ExtendedScore split_cp_threshold(std::span<const double> scores, double alpha);

/// Weighted quantile at level 1 - alpha of the atoms (s_i, w_i) plus (+inf, test_weight).
ExtendedScore wcp_threshold(std::span<const double> scores, std::span<const double> weights,
                            double test_weight, double alpha);

/// Mixture sum_k q_k * empirical(group k), with an unobserved group
/// contributing a point mass at +inf.
WeightedScoreDistribution group_mixture(const GroupedScores& grouped, const GroupSimplex& q);

ThresholdRule gwcp_threshold(const GroupedScores& grouped, const GroupSimplex& q, double alpha);

/// GWCP with q uniform over the observed groups only.
ThresholdRule gwcp_unobserved_threshold(const GroupedScores& grouped, double alpha);

/// Per-group thresholds at levels 1 - alpha_k, alpha_k = alpha - q_k / n_k
/// (alpha when n_k = 0); negative alpha_k gives +inf.
ThresholdRule corrected_gwcp_thresholds(const GroupedScores& grouped, const GroupSimplex& q,
                                        double alpha);

/// Group weights w_k = q_k / p_k for the chosen source. Groups with q_k = 0
/// get weight 0. Throws UndefinedWeight when a needed p_k is zero.
std::vector<double> estimated_group_weights(const GroupedScores& grouped, const GroupSimplex& q,
                                            const WeightOptions& options);

/// WCP threshold with every calibration score weighted by its group's
/// estimated weight. With the calibration source and no test atom this is
/// exactly gwcp_threshold.
ThresholdRule estimated_weight_threshold(const GroupedScores& grouped, const GroupSimplex& q,
                                         const WeightOptions& options, double alpha);

/// True iff test_score <= the rule's threshold for test_group.
bool covers(const ThresholdRule& rule, std::size_t test_group, double test_score);

struct Interval {
    double lower;
    double upper;
};

/// [center - q, center + q] for the residual score |y - center|.
Interval prediction_interval(const ThresholdRule& rule, std::size_t test_group, double center);

}  // namespace gwcp
