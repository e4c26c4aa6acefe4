#include "gwcp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "gwcp/random.hpp"
#include "parallel.hpp"

namespace gwcp {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

double min_prob(const GroupSimplex& p) {
    const auto probs = p.probs();
    return *std::min_element(probs.begin(), probs.end());
}

void require_hypothesis(const GroupSimplex& p, std::size_t n) {
    if (!multinomial_hypothesis_holds(p, n)) {
        throw HypothesisNotMet("hypothesis of Theorem 2 closed form not met: min_k p_k = " +
                               std::to_string(min_prob(p)) + " < 8 ln(n)/n = " +
                               std::to_string(8.0 * std::log(static_cast<double>(n)) /
                                              static_cast<double>(n)));
    }
}

// Mean and standard error of per-trial values, summed in trial order.
BoundEstimate monte_carlo(double base, const std::vector<double>& penalties) {
    const double T = static_cast<double>(penalties.size());
    double sum = 0.0;
    for (double v : penalties) sum += v;
    const double mean = sum / T;
    double sq = 0.0;
    for (double v : penalties) sq += (v - mean) * (v - mean);
    const double se = penalties.size() > 1 ? std::sqrt(sq / (T - 1.0) / T) : 0.0;
    return {base - mean, BoundForm::monte_carlo, penalties.size(), se};
}

}  // namespace

BoundEstimate thm1_bound(const GroupSimplex& q, std::span<const std::size_t> counts,
                         double alpha) {
    check_alpha(alpha);
    if (counts.size() != q.size()) {
        throw Error("counts must have one entry per group");
    }
    double worst = -1.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] > 0) {
            worst = std::max(worst, q[k] / static_cast<double>(counts[k]));
        }
    }
    if (worst < 0.0) {
        throw Error("all group counts are zero");
    }
    return {1.0 - (alpha + worst), BoundForm::closed, 0, 0.0};
}

bool multinomial_hypothesis_holds(const GroupSimplex& p, std::size_t n) {
    if (n == 0) return false;
    const double nd = static_cast<double>(n);
    return min_prob(p) >= 8.0 * std::log(nd) / nd;
}

BoundEstimate thm2_closed_bound(const GroupSimplex& q, const GroupSimplex& p, std::size_t n,
                                double alpha) {
    check_alpha(alpha);
    if (q.size() != p.size()) {
        throw Error("q and p must have the same number of groups");
    }
    require_hypothesis(p, n);
    double worst = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        worst = std::max(worst, q[k] / p[k]);
    }
    return {1.0 - (alpha + 4.0 * worst / static_cast<double>(n)), BoundForm::closed, 0, 0.0};
}

BoundEstimate corollary_closed_bound(const GroupSimplex& p, std::size_t n, double alpha) {
    check_alpha(alpha);
    require_hypothesis(p, n);
    const double K = static_cast<double>(p.size());
    return {1.0 - (alpha + 4.0 / (K * static_cast<double>(n) * min_prob(p))), BoundForm::closed, 0,
            0.0};
}

BoundEstimate corollary_empirical_bound(const GroupSimplex& p, std::size_t n, double alpha,
                                        std::size_t trials, std::uint64_t seed) {
    check_alpha(alpha);
    if (trials == 0) throw Error("trials must be positive");
    if (n == 0) throw Error("sample size must be positive");

    const double K = static_cast<double>(p.size());
    std::vector<double> penalties(trials);
    detail::parallel_for(trials, [&](std::size_t t) {
        Engine engine = trial_engine(seed, t);
        const auto counts = sample_multinomial(n, p.probs(), engine);
        std::size_t smallest = std::numeric_limits<std::size_t>::max();
        std::size_t unobserved = 0;
        for (std::size_t c : counts) {
            if (c == 0) {
                ++unobserved;
            } else {
                smallest = std::min(smallest, c);
            }
        }
        penalties[t] = 1.0 / (K * static_cast<double>(smallest)) +
                       (1.0 - alpha) * static_cast<double>(unobserved) / K;
    });
    return monte_carlo(1.0 - alpha, penalties);
}

BoundEstimate lei_bound_empirical(const GroupSimplex& p, const GroupSimplex& q, std::size_t n,
                                  double alpha, std::size_t trials, std::uint64_t seed) {
    check_alpha(alpha);
    if (trials == 0) throw Error("trials must be positive");
    if (p.size() != q.size()) {
        throw Error("q and p must have the same number of groups");
    }
    const std::size_t K = p.size();

    std::vector<double> w(K, 0.0);
    double w_mean = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        if (p[k] == 0.0) {
            if (q[k] > 0.0) throw UndefinedWeight("true weight undefined: p_k = 0 < q_k");
            continue;
        }
        w[k] = q[k] / p[k];
        w_mean += p[k] * w[k];
    }

    std::vector<double> penalties(trials);
    detail::parallel_for(trials, [&](std::size_t t) {
        Engine engine = trial_engine(seed, t);
        const auto counts = sample_multinomial(n, p.probs(), engine);
        const double denom = static_cast<double>(n + K);
        std::vector<double> w_hat(K);
        double w_hat_mean = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double p_hat = (static_cast<double>(counts[k]) + 1.0) / denom;
            w_hat[k] = q[k] / p_hat;
            w_hat_mean += p[k] * w_hat[k];
        }
        double gap = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            gap += p[k] * std::abs(w_hat[k] / w_hat_mean - w[k] / w_mean);
        }
        penalties[t] = gap / 2.0;
    });
    return monte_carlo(1.0 - alpha, penalties);
}

double tight_example_coverage(std::size_t num_groups, std::size_t n1, double alpha) {
    check_alpha(alpha);
    if (n1 == 0) throw Error("n1 must be at least 1");
    const double K = static_cast<double>(num_groups);
    const double covered_groups = (1.0 - alpha) * K;
    if (std::abs(covered_groups - std::round(covered_groups)) > 1e-9) {
        throw Error("(1 - alpha) K must be an integer");
    }
    return 1.0 - (alpha + 1.0 / (K * (static_cast<double>(n1) + 1.0)));
}

}  // namespace gwcp
