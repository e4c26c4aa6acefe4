#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gwcp/conformal.hpp"
#include "gwcp/random.hpp"

namespace gwcp {

// Score laws. Uniform samples the half-open range [lower, upper).
struct UniformLaw {
    double lower;
    double upper;
};
/// |N(mean, 1)|
struct AbsNormalLaw {
    double mean;
};
/// N(mean, 1)
struct NormalLaw {
    double mean;
};
struct PointMassLaw {
    double value;
};

using ScoreLaw = std::variant<UniformLaw, AbsNormalLaw, NormalLaw, PointMassLaw>;

double sample_score(const ScoreLaw& law, Engine& engine);

/// One score law per group.
class GroupModel {
public:
    explicit GroupModel(std::vector<ScoreLaw> laws);

    std::size_t num_groups() const noexcept { return laws_.size(); }
    const ScoreLaw& law(std::size_t k) const { return laws_.at(k); }

private:
    std::vector<ScoreLaw> laws_;
};

/// How many calibration points each group receives.
class SamplingScheme {
public:
    struct Fixed {
        std::vector<std::size_t> counts;
    };
    struct Multinomial {
        GroupSimplex p;
        std::size_t n;
    };

    static SamplingScheme fixed(std::vector<std::size_t> counts);
    static SamplingScheme multinomial(GroupSimplex p, std::size_t n);

    std::size_t num_groups() const;
    const std::variant<Fixed, Multinomial>& kind() const noexcept { return kind_; }

private:
    explicit SamplingScheme(std::variant<Fixed, Multinomial> kind) : kind_(std::move(kind)) {}
    std::variant<Fixed, Multinomial> kind_;
};

GroupedScores draw_calibration(const GroupModel& model, const SamplingScheme& scheme,
                               Engine& engine);

struct TestPoint {
    std::size_t group;
    double score;
};

TestPoint draw_test(const GroupModel& model, const GroupSimplex& q, Engine& engine);

enum class Method { gwcp, gwcp_unobserved, corrected_gwcp, wcp_plus, estimated_weight };

struct MethodSpec {
    Method method = Method::gwcp;
    /// Used by Method::estimated_weight.
    WeightSource source = WeightSource::calibration;
    /// Training proportions: the oracle weights, and the law of the
    /// pretraining sample for WeightSource::pretraining.
    std::optional<GroupSimplex> train_probs;
    /// Size of the pretraining sample for WeightSource::pretraining.
    std::size_t pretrain_size = 0;
};

/// Monte Carlo coverage with a 95% normal-approximation interval.
/// `trials` counts the trials that produced a prediction set; trials whose
/// estimated weights were undefined are dropped and show up only in
/// `attempted_trials`.
struct CoverageSummary {
    double mean_coverage = 0.0;
    std::size_t trials = 0;
    std::size_t attempted_trials = 0;
    double ci_half_width = 0.0;
    std::uint64_t seed = 0;
};

/// 1.96 sqrt(m (1 - m) / trials).
double ci_half_width(double mean, std::size_t trials);

/// Each trial draws a calibration set, a test point from q and (for the
/// pretraining source) a pretraining sample, all from the substream
/// (seed, trial index), and records whether the method's set covers.
CoverageSummary run_coverage(const GroupModel& model, const SamplingScheme& scheme,
                             const GroupSimplex& q, double alpha, const MethodSpec& method,
                             std::size_t trials, std::uint64_t seed);

// Building blocks of the fixed-group-size experiments.

enum class SizeRegime { all_small, one_small, none_small };

/// Group k ~ Uniform[k/K, (k+1)/K) for k = 0..K-1.
GroupModel staircase_model(std::size_t num_groups);

/// AllSmall: every n_k = 1. NoneSmall: every n_k = 100. OneSmall: n_k = 100
/// except the group whose score block ends at the 0.8 quantile
/// (index 0.8K - 1), which has n_k = 1. K must be a multiple of 5.
std::vector<std::size_t> regime_counts(SizeRegime regime, std::size_t num_groups);

/// Worst-case construction: group 0 ~ U[0,1), groups 1..(1-alpha)K-1 ~ U[-1,0),
/// the remaining alpha K groups ~ U[1,2).
GroupModel tight_example_model(std::size_t num_groups, double alpha);

struct ExperimentRow {
    std::string regime;
    std::int64_t param = 0;
    std::string method;
    double value = 0.0;
    double ci_half_width = 0.0;
    std::size_t trials = 0;
    std::size_t attempted_trials = 0;
    std::uint64_t seed = 0;
};

/// Rows sorted lexicographically by (regime, param, method).
struct ExperimentTable {
    std::string experiment;
    std::vector<ExperimentRow> rows;
};

struct ExperimentOptions {
    std::uint64_t seed = 0;
    /// Overrides the default trial count (100 for bound curves, 2000 for coverage).
    std::optional<std::size_t> trials;
};

/// Estimated prior-work bound versus n for K = 10, K = floor(sqrt(n)), K = n/10.
ExperimentTable figure1_experiment(const ExperimentOptions& options = {});
/// GWCP coverage versus K in the AllSmall / OneSmall / NoneSmall regimes.
ExperimentTable figure2_experiment(const ExperimentOptions& options = {});
/// Figure 1 plus the unobserved-groups corollary bound on the same draws.
ExperimentTable figure3_experiment(const ExperimentOptions& options = {});
/// Figure 2 with corrected GWCP.
ExperimentTable figure4_experiment(const ExperimentOptions& options = {});
/// Coverage of group-weighted WCP with pretraining, calibration and oracle weights.
ExperimentTable figure5_experiment(const ExperimentOptions& options = {});

/// Dispatches "fig1".."fig5".
ExperimentTable run_experiment(std::string_view figure, const ExperimentOptions& options = {});

}  // namespace gwcp
