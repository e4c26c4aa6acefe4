#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "gwcp/conformal.hpp"

namespace gwcp {

enum class BoundForm { closed, monte_carlo };

/// A coverage lower bound. Closed forms carry trials = 0 and std_error = 0.
struct BoundEstimate {
    double value = 0.0;
    BoundForm form = BoundForm::closed;
    std::size_t trials = 0;
    double std_error = 0.0;
};

/// 1 - alpha - max over observed groups of q_k / n_k.
BoundEstimate thm1_bound(const GroupSimplex& q, std::span<const std::size_t> counts, double alpha);

/// min_k p_k >= 8 ln(n) / n.
bool multinomial_hypothesis_holds(const GroupSimplex& p, std::size_t n);

/// 1 - alpha - 4 max_k(q_k / p_k) / n; throws HypothesisNotMet outside
/// multinomial_hypothesis_holds.
BoundEstimate thm2_closed_bound(const GroupSimplex& q, const GroupSimplex& p, std::size_t n,
                                double alpha);

/// 1 - alpha - 4 / (K n min_k p_k), same hypothesis as thm2_closed_bound.
BoundEstimate corollary_closed_bound(const GroupSimplex& p, std::size_t n, double alpha);

/// Monte Carlo estimate of the expectation form for the unobserved-groups
/// variant: (1 - alpha) - E[1 / (K min_{n_k>0} n_k) + (1 - alpha) #{n_k = 0} / K]
/// with (n_1..n_K) ~ Multinomial(n; p).
BoundEstimate corollary_empirical_bound(const GroupSimplex& p, std::size_t n, double alpha,
                                        std::size_t trials, std::uint64_t seed);

/// Monte Carlo estimate of 1 - alpha - E|w_hat - w| / 2 for weights estimated
/// from a pretraining sample of size n with add-one smoothing. The inner
/// expectation over X is the exact finite sum over groups.
BoundEstimate lei_bound_empirical(const GroupSimplex& p, const GroupSimplex& q, std::size_t n,
                                  double alpha, std::size_t trials, std::uint64_t seed);

/// Exact coverage 1 - alpha - 1 / (K (n1 + 1)) of the worst-case construction.
/// Requires (1 - alpha) K to be an integer.
double tight_example_coverage(std::size_t num_groups, std::size_t n1, double alpha);

}  // namespace gwcp
