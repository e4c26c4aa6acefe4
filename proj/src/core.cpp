#include "gwcp/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gwcp {

ExtendedScore::ExtendedScore(double value) : value_(value) {
    if (std::isnan(value) || value == -std::numeric_limits<double>::infinity()) {
        throw Error("score must be finite or +inf, got " + std::to_string(value));
    }
}

WeightedScoreDistribution::WeightedScoreDistribution(std::vector<Atom> atoms)
    : atoms_(std::move(atoms)) {
    for (const Atom& a : atoms_) {
        if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
            throw Error("atom weights must be finite and nonnegative");
        }
        total_ += a.weight;
    }
    if (!(total_ > 0.0)) {
        throw Error("empty distribution");
    }
}

WeightedScoreDistribution WeightedScoreDistribution::uniform(std::span<const double> scores) {
    std::vector<Atom> atoms;
    atoms.reserve(scores.size());
    for (double s : scores) {
        atoms.push_back({ExtendedScore(s), 1.0});
    }
    return WeightedScoreDistribution(std::move(atoms));
}

WeightedScoreDistribution normalize(const WeightedScoreDistribution& dist) {
    std::vector<Atom> atoms(dist.atoms().begin(), dist.atoms().end());
    const double total = dist.total_weight();
    for (Atom& a : atoms) {
        a.weight /= total;
    }
    return WeightedScoreDistribution(std::move(atoms));
}

namespace {

// Cumulative mass at the last atom of each tie group carrying positive weight.
struct Step {
    ExtendedScore score;
    double cumulative;
};

struct StepFunction {
    std::vector<Step> steps;
    double total = 0.0;
};

StepFunction cumulative_steps(const WeightedScoreDistribution& dist) {
    std::vector<Atom> sorted(dist.atoms().begin(), dist.atoms().end());
    std::sort(sorted.begin(), sorted.end(), [](const Atom& a, const Atom& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.weight < b.weight;
    });

    StepFunction f;
    double cumulative = 0.0;
    double group_weight = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cumulative += sorted[i].weight;
        group_weight += sorted[i].weight;
        const bool group_ends = i + 1 == sorted.size() || sorted[i + 1].score != sorted[i].score;
        if (group_ends) {
            if (group_weight > 0.0) {
                f.steps.push_back({sorted[i].score, cumulative});
            }
            group_weight = 0.0;
        }
    }
    f.total = cumulative;
    return f;
}

ExtendedScore lookup(const StepFunction& f, double tau) {
    if (!(tau > 0.0)) {
        throw Error("quantile level must be positive");
    }
    if (tau > 1.0) {
        return ExtendedScore::infinity();
    }
    const double target = tau - kMassTolerance;
    auto hit = std::partition_point(f.steps.begin(), f.steps.end(), [&](const Step& s) {
        return !(s.cumulative / f.total >= target);
    });
    return hit == f.steps.end() ? ExtendedScore::infinity() : hit->score;
}

}  // namespace

ExtendedScore weighted_quantile(const WeightedScoreDistribution& dist, double tau) {
    if (tau > 1.0) {
        return ExtendedScore::infinity();
    }
    return lookup(cumulative_steps(dist), tau);
}

std::vector<ExtendedScore> weighted_quantiles(const WeightedScoreDistribution& dist,
                                              std::span<const double> taus) {
    const StepFunction f = cumulative_steps(dist);
    std::vector<ExtendedScore> out;
    out.reserve(taus.size());
    for (double tau : taus) {
        out.push_back(lookup(f, tau));
    }
    return out;
}

WeightedScoreDistribution mixture(std::span<const WeightedScoreDistribution> components,
                                  std::span<const double> weights) {
    if (components.size() != weights.size()) {
        throw Error("mixture: components and weights differ in length");
    }
    double weight_sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw Error("mixture: weights must be finite and nonnegative");
        }
        weight_sum += w;
    }
    if (!(weight_sum > 0.0)) {
        throw Error("mixture: all mixture weights are zero");
    }

    std::vector<Atom> atoms;
    for (std::size_t c = 0; c < components.size(); ++c) {
        const double scale = weights[c] / components[c].total_weight();
        for (const Atom& a : components[c].atoms()) {
            atoms.push_back({a.score, a.weight * scale});
        }
    }
    return WeightedScoreDistribution(std::move(atoms));
}

}  // namespace gwcp
