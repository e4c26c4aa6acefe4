#include "gwcp/conformal.hpp"

#include <cmath>
#include <string>

namespace gwcp {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

void check_matching(const GroupedScores& grouped, const GroupSimplex& q) {
    if (grouped.num_groups() != q.size()) {
        throw Error("number of groups (" + std::to_string(grouped.num_groups()) +
                    ") does not match length of q (" + std::to_string(q.size()) + ")");
    }
}

WeightedScoreDistribution observed_uniform_mixture(const GroupedScores& grouped) {
    std::size_t observed = 0;
    for (std::size_t k = 0; k < grouped.num_groups(); ++k) {
        observed += grouped.count(k) > 0 ? 1 : 0;
    }
    std::vector<Atom> atoms;
    atoms.reserve(grouped.total());
    const double share = 1.0 / static_cast<double>(observed);
    for (std::size_t k = 0; k < grouped.num_groups(); ++k) {
        const auto scores = grouped.group(k);
        const double w = share / static_cast<double>(scores.size());
        for (double s : scores) {
            atoms.push_back({ExtendedScore(s), w});
        }
    }
    return WeightedScoreDistribution(std::move(atoms));
}

}  // namespace

GroupedScores::GroupedScores(std::vector<std::vector<double>> scores_by_group)
    : groups_(std::move(scores_by_group)) {
    if (groups_.empty()) {
        throw Error("at least one group is required");
    }
    for (const auto& g : groups_) {
        for (double s : g) {
            if (!std::isfinite(s)) {
                throw Error("calibration scores must be finite");
            }
        }
        total_ += g.size();
    }
    if (total_ == 0) {
        throw Error("calibration set is empty");
    }
}

GroupedScores GroupedScores::from_labels(std::size_t num_groups,
                                         std::span<const std::size_t> labels,
                                         std::span<const double> scores) {
    if (labels.size() != scores.size()) {
        throw Error("labels and scores differ in length");
    }
    std::vector<std::vector<double>> groups(num_groups);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= num_groups) {
            throw Error("group label " + std::to_string(labels[i]) + " out of range");
        }
        groups[labels[i]].push_back(scores[i]);
    }
    return GroupedScores(std::move(groups));
}

std::vector<std::size_t> GroupedScores::counts() const {
    std::vector<std::size_t> out;
    out.reserve(groups_.size());
    for (const auto& g : groups_) {
        out.push_back(g.size());
    }
    return out;
}

GroupSimplex::GroupSimplex(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw Error("group simplex needs at least one entry");
    }
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw Error("group probabilities must be finite and nonnegative");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw Error("group probabilities must sum to 1, got " + std::to_string(sum));
    }
}

GroupSimplex GroupSimplex::uniform(std::size_t num_groups) {
    if (num_groups == 0) {
        throw Error("group simplex needs at least one entry");
    }
    return GroupSimplex(std::vector<double>(num_groups, 1.0 / static_cast<double>(num_groups)));
}

ThresholdRule ThresholdRule::global(ExtendedScore threshold) {
    return ThresholdRule(Kind::global, {threshold});
}

ThresholdRule ThresholdRule::per_group(std::vector<ExtendedScore> thresholds) {
    if (thresholds.empty()) {
        throw Error("per-group rule needs at least one threshold");
    }
    return ThresholdRule(Kind::per_group, std::move(thresholds));
}

ExtendedScore ThresholdRule::global_threshold() const {
    if (kind_ != Kind::global) {
        throw Error("rule has per-group thresholds");
    }
    return thresholds_.front();
}

ExtendedScore ThresholdRule::threshold_for(std::size_t group) const {
    if (kind_ == Kind::global) {
        return thresholds_.front();
    }
    if (group >= thresholds_.size()) {
        throw Error("test group " + std::to_string(group) + " out of range");
    }
    return thresholds_[group];
}

ExtendedScore split_cp_threshold(std::span<const double> scores, double alpha) {
    check_alpha(alpha);
    if (scores.empty()) {
        throw Error("split conformal needs at least one calibration score");
    }
    const double n = static_cast<double>(scores.size());
    // (1 - alpha)(n + 1) / n rather than (1 - alpha)(1 + 1/n): the latter
    // rounds above 1 for e.g. alpha = 0.1, n = 9.
    const double level = (1.0 - alpha) * (n + 1.0) / n;
    return weighted_quantile(WeightedScoreDistribution::uniform(scores), level);
}

ExtendedScore wcp_threshold(std::span<const double> scores, std::span<const double> weights,
                            double test_weight, double alpha) {
    check_alpha(alpha);
    if (scores.size() != weights.size()) {
        throw Error("scores and weights differ in length");
    }
    std::vector<Atom> atoms;
    atoms.reserve(scores.size() + 1);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        atoms.push_back({ExtendedScore(scores[i]), weights[i]});
    }
    atoms.push_back({ExtendedScore::infinity(), test_weight});
    return weighted_quantile(WeightedScoreDistribution(std::move(atoms)), 1.0 - alpha);
}

WeightedScoreDistribution group_mixture(const GroupedScores& grouped, const GroupSimplex& q) {
    check_matching(grouped, q);
    std::vector<Atom> atoms;
    atoms.reserve(grouped.total() + grouped.num_groups());
    for (std::size_t k = 0; k < grouped.num_groups(); ++k) {
        const auto scores = grouped.group(k);
        if (scores.empty()) {
            atoms.push_back({ExtendedScore::infinity(), q[k]});
            continue;
        }
        const double w = q[k] / static_cast<double>(scores.size());
        for (double s : scores) {
            atoms.push_back({ExtendedScore(s), w});
        }
    }
    return WeightedScoreDistribution(std::move(atoms));
}

ThresholdRule gwcp_threshold(const GroupedScores& grouped, const GroupSimplex& q, double alpha) {
    check_alpha(alpha);
    return ThresholdRule::global(weighted_quantile(group_mixture(grouped, q), 1.0 - alpha));
}

ThresholdRule gwcp_unobserved_threshold(const GroupedScores& grouped, double alpha) {
    check_alpha(alpha);
    return ThresholdRule::global(weighted_quantile(observed_uniform_mixture(grouped), 1.0 - alpha));
}

ThresholdRule corrected_gwcp_thresholds(const GroupedScores& grouped, const GroupSimplex& q,
                                        double alpha) {
    check_alpha(alpha);
    const WeightedScoreDistribution mix = group_mixture(grouped, q);

    const std::size_t K = grouped.num_groups();
    std::vector<double> levels(K);
    for (std::size_t k = 0; k < K; ++k) {
        const std::size_t n_k = grouped.count(k);
        const double alpha_k = n_k > 0 ? alpha - q[k] / static_cast<double>(n_k) : alpha;
        // alpha_k < 0 means a level above 1, which the quantile maps to +inf.
        levels[k] = 1.0 - alpha_k;
    }
    return ThresholdRule::per_group(weighted_quantiles(mix, levels));
}

std::vector<double> estimated_group_weights(const GroupedScores& grouped, const GroupSimplex& q,
                                            const WeightOptions& options) {
    check_matching(grouped, q);
    const std::size_t K = grouped.num_groups();
    std::vector<double> p_hat(K);

    switch (options.source) {
        case WeightSource::calibration: {
            const double n = static_cast<double>(grouped.total());
            for (std::size_t k = 0; k < K; ++k) {
                p_hat[k] = static_cast<double>(grouped.count(k)) / n;
            }
            break;
        }
        case WeightSource::pretraining: {
            if (options.pretrain_counts.size() != K) {
                throw Error("pretraining counts must have one entry per group");
            }
            std::int64_t total = 0;
            for (std::size_t k = 0; k < K; ++k) {
                if (options.pretrain_counts[k] <= 0) {
                    throw UndefinedWeight("undefined weight: group " + std::to_string(k + 1) +
                                          " has no pretraining observations");
                }
                total += options.pretrain_counts[k];
            }
            for (std::size_t k = 0; k < K; ++k) {
                p_hat[k] = static_cast<double>(options.pretrain_counts[k]) /
                           static_cast<double>(total);
            }
            break;
        }
        case WeightSource::oracle: {
            if (!options.p_true || options.p_true->size() != K) {
                throw Error("oracle weights need true proportions for every group");
            }
            for (std::size_t k = 0; k < K; ++k) {
                p_hat[k] = (*options.p_true)[k];
            }
            break;
        }
    }

    std::vector<double> weights(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        if (q[k] == 0.0) {
            continue;
        }
        if (p_hat[k] == 0.0) {
            throw UndefinedWeight("undefined weight: estimated proportion of group " +
                                  std::to_string(k + 1) + " is zero");
        }
        weights[k] = q[k] / p_hat[k];
    }
    return weights;
}

ThresholdRule estimated_weight_threshold(const GroupedScores& grouped, const GroupSimplex& q,
                                         const WeightOptions& options, double alpha) {
    check_alpha(alpha);
    if (options.test_atom_group && *options.test_atom_group >= grouped.num_groups()) {
        throw Error("test group out of range");
    }
    const std::vector<double> group_weights = estimated_group_weights(grouped, q, options);

    std::vector<double> scores;
    std::vector<double> weights;
    scores.reserve(grouped.total());
    weights.reserve(grouped.total());
    for (std::size_t k = 0; k < grouped.num_groups(); ++k) {
        for (double s : grouped.group(k)) {
            scores.push_back(s);
            weights.push_back(group_weights[k]);
        }
    }
    const double test_weight =
        options.test_atom_group ? group_weights[*options.test_atom_group] : 0.0;
    return ThresholdRule::global(wcp_threshold(scores, weights, test_weight, alpha));
}

bool covers(const ThresholdRule& rule, std::size_t test_group, double test_score) {
    return test_score <= rule.threshold_for(test_group).value();
}

Interval prediction_interval(const ThresholdRule& rule, std::size_t test_group, double center) {
    const ExtendedScore q = rule.threshold_for(test_group);
    if (!q.is_finite()) {
        const double inf = std::numeric_limits<double>::infinity();
        return {-inf, inf};
    }
    return {center - q.value(), center + q.value()};
}

}  // namespace gwcp
