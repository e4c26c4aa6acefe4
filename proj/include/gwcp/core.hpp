#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "gwcp/error.hpp"

namespace gwcp {

/// A score on the extended real line: any finite double, or +inf.
/// NaN and -inf are rejected at construction.
class ExtendedScore {
public:
    constexpr ExtendedScore() = default;
    explicit ExtendedScore(double value);

    static constexpr ExtendedScore infinity() noexcept {
        ExtendedScore s;
        s.value_ = std::numeric_limits<double>::infinity();
        return s;
    }

    constexpr double value() const noexcept { return value_; }
    constexpr bool is_finite() const noexcept {
        return value_ != std::numeric_limits<double>::infinity();
    }

    friend constexpr bool operator==(ExtendedScore, ExtendedScore) = default;
    friend constexpr auto operator<=>(ExtendedScore a, ExtendedScore b) {
        return a.value_ <=> b.value_;
    }

private:
    double value_ = 0.0;
};

struct Atom {
    ExtendedScore score;
    double weight = 0.0;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finite collection of weighted score atoms. Weights are nonnegative with a
/// positive total; atoms are kept in insertion order (not sorted).
class WeightedScoreDistribution {
public:
    explicit WeightedScoreDistribution(std::vector<Atom> atoms);

    /// Uniform unit weights over the given finite scores.
    static WeightedScoreDistribution uniform(std::span<const double> scores);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    double total_weight() const noexcept { return total_; }

private:
    std::vector<Atom> atoms_;
    double total_ = 0.0;
};

/// Absolute slack applied to the normalized cumulative mass when testing
/// whether it has reached the requested level. Covers rounding of sums like
/// 16 * (1/20) against 0.8; genuine mass gaps are many orders larger.
inline constexpr double kMassTolerance = 1e-10;

WeightedScoreDistribution normalize(const WeightedScoreDistribution& dist);

/// Smallest atom score s (positive weight) whose normalized cumulative mass
/// F(s) satisfies F(s) >= tau - kMassTolerance; +inf when tau > 1 or when no
/// finite atom reaches the level. Requires tau > 0.
ExtendedScore weighted_quantile(const WeightedScoreDistribution& dist, double tau);

/// Same as weighted_quantile for each level, sorting the atoms once.
std::vector<ExtendedScore> weighted_quantiles(const WeightedScoreDistribution& dist,
                                              std::span<const double> taus);

/// Mixture placing total mass weights[i] on the normalized components[i].
WeightedScoreDistribution mixture(std::span<const WeightedScoreDistribution> components,
                                  std::span<const double> weights);

}  // namespace gwcp
