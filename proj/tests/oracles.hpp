#pragma once

// Reference implementations used only by the tests. They are written
// independently of the library: brute force over candidate scores, with
// masses re-summed from scratch for each candidate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct WeightedAtom {
    double score;
    double weight;
};

/// Smallest score s carried by a positive-weight atom with
/// sum_{score <= s} weight / total >= tau - 1e-10; +inf when tau > 1.
inline double weighted_quantile(const std::vector<WeightedAtom>& atoms, double tau) {
    if (tau > 1.0) return kInf;
    double total = 0.0;
    for (const auto& a : atoms) total += a.weight;
    double best = kInf;
    for (const auto& candidate : atoms) {
        if (candidate.weight <= 0.0 || candidate.score >= best) continue;
        double mass = 0.0;
        for (const auto& a : atoms) {
            if (a.score <= candidate.score) mass += a.weight;
        }
        if (mass / total >= tau - 1e-10) best = candidate.score;
    }
    return best;
}

/// ceil(level * n)-th order statistic of the scores, +inf past the end.
inline double order_statistic_quantile(std::vector<double> scores, double level) {
    std::sort(scores.begin(), scores.end());
    const double n = static_cast<double>(scores.size());
    const auto rank = static_cast<std::size_t>(std::ceil(level * n - 1e-9));
    if (rank == 0) return scores.front();
    if (rank > scores.size()) return kInf;
    return scores[rank - 1];
}

/// GWCP by explicit enumeration: atom (s, q_k / n_k) for each score of group k,
/// (+inf, q_k) for each empty group, then the brute-force quantile.
inline double gwcp(const std::vector<std::vector<double>>& groups, const std::vector<double>& q,
                   double alpha) {
    std::vector<WeightedAtom> atoms;
    for (std::size_t k = 0; k < groups.size(); ++k) {
        if (groups[k].empty()) {
            atoms.push_back({kInf, q[k]});
            continue;
        }
        for (double s : groups[k]) {
            atoms.push_back({s, q[k] / static_cast<double>(groups[k].size())});
        }
    }
    return weighted_quantile(atoms, 1.0 - alpha);
}

}  // namespace oracle
