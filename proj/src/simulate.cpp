#include "gwcp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "gwcp/bounds.hpp"
#include "parallel.hpp"

namespace gwcp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::size_t kBoundTrials = 100;
constexpr std::size_t kCoverageTrials = 2000;

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t regime, std::uint64_t param) {
    return derive_seed(derive_seed(seed, regime), param);
}

ThresholdRule threshold_for_trial(const MethodSpec& spec, const GroupedScores& grouped,
                                  const GroupSimplex& q, double alpha, std::size_t test_group,
                                  Engine& engine) {
    switch (spec.method) {
        case Method::gwcp:
            return gwcp_threshold(grouped, q, alpha);
        case Method::gwcp_unobserved:
            return gwcp_unobserved_threshold(grouped, alpha);
        case Method::corrected_gwcp:
            return corrected_gwcp_thresholds(grouped, q, alpha);
        case Method::wcp_plus: {
            WeightOptions options;
            options.source = WeightSource::calibration;
            options.test_atom_group = test_group;
            return estimated_weight_threshold(grouped, q, options, alpha);
        }
        case Method::estimated_weight: {
            WeightOptions options;
            options.source = spec.source;
            options.p_true = spec.train_probs;
            if (spec.source == WeightSource::pretraining) {
                const auto counts =
                    sample_multinomial(spec.pretrain_size, spec.train_probs->probs(), engine);
                options.pretrain_counts.assign(counts.begin(), counts.end());
            }
            return estimated_weight_threshold(grouped, q, options, alpha);
        }
    }
    throw Error("unknown method");
}

void validate_method(const MethodSpec& spec, std::size_t num_groups) {
    if (spec.method != Method::estimated_weight) return;
    if (spec.source == WeightSource::calibration) return;
    if (!spec.train_probs || spec.train_probs->size() != num_groups) {
        throw Error("estimated weights need training proportions for every group");
    }
    if (spec.source == WeightSource::pretraining && spec.pretrain_size == 0) {
        throw Error("pretraining sample size must be positive");
    }
}

}  // namespace

double sample_score(const ScoreLaw& law, Engine& engine) {
    return std::visit(
        Overloaded{
            [&](const UniformLaw& u) {
                return std::uniform_real_distribution<double>(u.lower, u.upper)(engine);
            },
            [&](const AbsNormalLaw& a) {
                return std::abs(std::normal_distribution<double>(a.mean, 1.0)(engine));
            },
            [&](const NormalLaw& g) {
                return std::normal_distribution<double>(g.mean, 1.0)(engine);
            },
            [](const PointMassLaw& p) { return p.value; },
        },
        law);
}

GroupModel::GroupModel(std::vector<ScoreLaw> laws) : laws_(std::move(laws)) {
    if (laws_.empty()) {
        throw Error("group model needs at least one group");
    }
    for (const ScoreLaw& law : laws_) {
        if (const auto* u = std::get_if<UniformLaw>(&law); u && !(u->lower < u->upper)) {
            throw Error("uniform law needs lower < upper");
        }
    }
}

SamplingScheme SamplingScheme::fixed(std::vector<std::size_t> counts) {
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    if (total == 0) {
        throw Error("fixed counts must have a positive total");
    }
    return SamplingScheme(Fixed{std::move(counts)});
}

SamplingScheme SamplingScheme::multinomial(GroupSimplex p, std::size_t n) {
    if (n == 0) {
        throw Error("multinomial sample size must be positive");
    }
    return SamplingScheme(Multinomial{std::move(p), n});
}

std::size_t SamplingScheme::num_groups() const {
    return std::visit(Overloaded{
                          [](const Fixed& f) { return f.counts.size(); },
                          [](const Multinomial& m) { return m.p.size(); },
                      },
                      kind_);
}

GroupedScores draw_calibration(const GroupModel& model, const SamplingScheme& scheme,
                               Engine& engine) {
    if (scheme.num_groups() != model.num_groups()) {
        throw Error("sampling scheme and model disagree on the number of groups");
    }
    const std::vector<std::size_t> counts =
        std::visit(Overloaded{
                       [](const SamplingScheme::Fixed& f) { return f.counts; },
                       [&](const SamplingScheme::Multinomial& m) {
                           return sample_multinomial(m.n, m.p.probs(), engine);
                       },
                   },
                   scheme.kind());

    std::vector<std::vector<double>> groups(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        groups[k].reserve(counts[k]);
        for (std::size_t i = 0; i < counts[k]; ++i) {
            groups[k].push_back(sample_score(model.law(k), engine));
        }
    }
    return GroupedScores(std::move(groups));
}

TestPoint draw_test(const GroupModel& model, const GroupSimplex& q, Engine& engine) {
    if (q.size() != model.num_groups()) {
        throw Error("q and model disagree on the number of groups");
    }
    const std::size_t k = sample_categorical(q.probs(), engine);
    return {k, sample_score(model.law(k), engine)};
}

double ci_half_width(double mean, std::size_t trials) {
    if (trials == 0) return 0.0;
    return 1.96 * std::sqrt(mean * (1.0 - mean) / static_cast<double>(trials));
}

CoverageSummary run_coverage(const GroupModel& model, const SamplingScheme& scheme,
                             const GroupSimplex& q, double alpha, const MethodSpec& method,
                             std::size_t trials, std::uint64_t seed) {
    if (trials == 0) {
        throw Error("trials must be positive");
    }
    if (scheme.num_groups() != model.num_groups() || q.size() != model.num_groups()) {
        throw Error("model, scheme and q disagree on the number of groups");
    }
    validate_method(method, model.num_groups());

    // 1 covered, 0 missed, -1 discarded (weights undefined).
    std::vector<signed char> outcome(trials, 0);
    detail::parallel_for(trials, [&](std::size_t t) {
        Engine engine = trial_engine(seed, t);
        const GroupedScores grouped = draw_calibration(model, scheme, engine);
        const TestPoint test = draw_test(model, q, engine);
        try {
            const ThresholdRule rule =
                threshold_for_trial(method, grouped, q, alpha, test.group, engine);
            outcome[t] = covers(rule, test.group, test.score) ? 1 : 0;
        } catch (const UndefinedWeight&) {
            outcome[t] = -1;
        }
    });

    std::size_t covered = 0;
    std::size_t effective = 0;
    for (signed char o : outcome) {
        if (o < 0) continue;
        ++effective;
        covered += static_cast<std::size_t>(o);
    }
    if (effective == 0) {
        throw Error("every trial was discarded because the estimated weights were undefined");
    }
    CoverageSummary summary;
    summary.mean_coverage = static_cast<double>(covered) / static_cast<double>(effective);
    summary.trials = effective;
    summary.attempted_trials = trials;
    summary.ci_half_width = ci_half_width(summary.mean_coverage, effective);
    summary.seed = seed;
    return summary;
}

GroupModel staircase_model(std::size_t num_groups) {
    std::vector<ScoreLaw> laws;
    const double K = static_cast<double>(num_groups);
    for (std::size_t k = 0; k < num_groups; ++k) {
        laws.emplace_back(UniformLaw{static_cast<double>(k) / K, static_cast<double>(k + 1) / K});
    }
    return GroupModel(std::move(laws));
}

std::vector<std::size_t> regime_counts(SizeRegime regime, std::size_t num_groups) {
    if (num_groups == 0 || num_groups % 5 != 0) {
        throw Error("number of groups must be a positive multiple of 5");
    }
    switch (regime) {
        case SizeRegime::all_small:
            return std::vector<std::size_t>(num_groups, 1);
        case SizeRegime::none_small:
            return std::vector<std::size_t>(num_groups, 100);
        case SizeRegime::one_small: {
            std::vector<std::size_t> counts(num_groups, 100);
            counts[num_groups / 5 * 4 - 1] = 1;
            return counts;
        }
    }
    throw Error("unknown regime");
}

GroupModel tight_example_model(std::size_t num_groups, double alpha) {
    const double covered = (1.0 - alpha) * static_cast<double>(num_groups);
    const auto below = static_cast<std::size_t>(std::llround(covered));
    if (std::abs(covered - static_cast<double>(below)) > 1e-9 || below == 0) {
        throw Error("(1 - alpha) K must be a positive integer");
    }
    std::vector<ScoreLaw> laws;
    laws.emplace_back(UniformLaw{0.0, 1.0});
    for (std::size_t k = 1; k < num_groups; ++k) {
        if (k < below) {
            laws.emplace_back(UniformLaw{-1.0, 0.0});
        } else {
            laws.emplace_back(UniformLaw{1.0, 2.0});
        }
    }
    return GroupModel(std::move(laws));
}

namespace {

struct GrowthRegime {
    const char* label;
    std::size_t (*groups)(std::size_t n);
};

constexpr GrowthRegime kGrowthRegimes[] = {
    {"K=10", [](std::size_t) -> std::size_t { return 10; }},
    {"K=floor(sqrt(n))",
     [](std::size_t n) { return static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)))); }},
    {"K=n/10", [](std::size_t n) { return n / 10; }},
};

ExperimentTable bound_curves(const char* name, bool with_corollary,
                             const ExperimentOptions& options) {
    constexpr double alpha = 0.1;
    const std::size_t trials = options.trials.value_or(kBoundTrials);
    ExperimentTable table{name, {}};
    for (std::size_t r = 0; r < std::size(kGrowthRegimes); ++r) {
        const GrowthRegime& regime = kGrowthRegimes[r];
        for (std::size_t n = 100; n <= 1000; n += 10) {
            const GroupSimplex uniform = GroupSimplex::uniform(regime.groups(n));
            // Both bounds read the same (seed, trial) substreams, so they see
            // the same multinomial counts.
            const std::uint64_t seed = point_seed(options.seed, r, n);
            auto add = [&](const char* method, const BoundEstimate& b) {
                table.rows.push_back({regime.label, static_cast<std::int64_t>(n), method, b.value,
                                      1.96 * b.std_error, b.trials, b.trials, options.seed});
            };
            if (with_corollary) {
                add("corollary", corollary_empirical_bound(uniform, n, alpha, trials, seed));
            }
            add("lei", lei_bound_empirical(uniform, uniform, n, alpha, trials, seed));
        }
    }
    return table;
}

ExperimentTable fixed_size_coverage(const char* name, Method method,
                                    const ExperimentOptions& options) {
    constexpr double alpha = 0.2;
    constexpr std::pair<const char*, SizeRegime> regimes[] = {
        {"AllSmall", SizeRegime::all_small},
        {"OneSmall", SizeRegime::one_small},
        {"NoneSmall", SizeRegime::none_small},
    };
    const std::size_t trials = options.trials.value_or(kCoverageTrials);
    const char* label = method == Method::gwcp ? "gwcp" : "corrected_gwcp";
    ExperimentTable table{name, {}};
    for (std::size_t r = 0; r < std::size(regimes); ++r) {
        for (std::size_t K = 5; K <= 50; K += 5) {
            const GroupModel model = staircase_model(K);
            const SamplingScheme scheme =
                SamplingScheme::fixed(regime_counts(regimes[r].second, K));
            MethodSpec spec;
            spec.method = method;
            const CoverageSummary s = run_coverage(model, scheme, GroupSimplex::uniform(K), alpha,
                                                   spec, trials, point_seed(options.seed, r, K));
            table.rows.push_back({regimes[r].first, static_cast<std::int64_t>(K), label,
                                  s.mean_coverage, s.ci_half_width, s.trials, s.attempted_trials,
                                  options.seed});
        }
    }
    return table;
}

ExperimentTable sorted(ExperimentTable table) {
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const ExperimentRow& a, const ExperimentRow& b) {
                         return std::tie(a.regime, a.param, a.method) <
                                std::tie(b.regime, b.param, b.method);
                     });
    return table;
}

}  // namespace

ExperimentTable figure1_experiment(const ExperimentOptions& options) {
    return sorted(bound_curves("fig1", false, options));
}

ExperimentTable figure2_experiment(const ExperimentOptions& options) {
    return sorted(fixed_size_coverage("fig2", Method::gwcp, options));
}

ExperimentTable figure3_experiment(const ExperimentOptions& options) {
    return sorted(bound_curves("fig3", true, options));
}

ExperimentTable figure4_experiment(const ExperimentOptions& options) {
    return sorted(fixed_size_coverage("fig4", Method::corrected_gwcp, options));
}

ExperimentTable figure5_experiment(const ExperimentOptions& options) {
    constexpr double alpha = 0.2;
    constexpr std::size_t n = 100;
    constexpr std::size_t n_pretrain = 100;
    struct Setting {
        const char* label;
        std::vector<double> p;
        std::vector<double> theta;
    };
    const std::vector<Setting> settings = {
        {"Setting1", {0.2, 0.2, 0.2, 0.2, 0.2}, {20, 15, 10, 5, 0}},
        {"Setting2", {0.4, 0.25, 0.2, 0.1, 0.05}, {20, 15, 10, 5, 0}},
        {"Setting3", {0.4, 0.25, 0.2, 0.1, 0.05}, {0, 5, 10, 15, 20}},
    };
    constexpr std::pair<const char*, WeightSource> sources[] = {
        {"pretraining", WeightSource::pretraining},
        {"calibration", WeightSource::calibration},
        {"oracle", WeightSource::oracle},
    };

    const std::size_t trials = options.trials.value_or(kCoverageTrials);
    const GroupSimplex q = GroupSimplex::uniform(5);
    ExperimentTable table{"fig5", {}};
    for (std::size_t s = 0; s < settings.size(); ++s) {
        std::vector<ScoreLaw> laws;
        for (double theta : settings[s].theta) laws.emplace_back(AbsNormalLaw{theta});
        const GroupModel model(std::move(laws));
        const GroupSimplex p(settings[s].p);
        const SamplingScheme scheme = SamplingScheme::multinomial(p, n);
        // Shared per setting: every source sees the same calibration sets and test points.
        const std::uint64_t seed = point_seed(options.seed, s, n);
        for (const auto& [label, source] : sources) {
            MethodSpec spec;
            spec.method = Method::estimated_weight;
            spec.source = source;
            spec.train_probs = p;
            spec.pretrain_size = n_pretrain;
            const CoverageSummary c = run_coverage(model, scheme, q, alpha, spec, trials, seed);
            table.rows.push_back({settings[s].label, static_cast<std::int64_t>(n), label,
                                  c.mean_coverage, c.ci_half_width, c.trials, c.attempted_trials,
                                  options.seed});
        }
    }
    return sorted(std::move(table));
}

ExperimentTable run_experiment(std::string_view figure, const ExperimentOptions& options) {
    if (figure == "fig1") return figure1_experiment(options);
    if (figure == "fig2") return figure2_experiment(options);
    if (figure == "fig3") return figure3_experiment(options);
    if (figure == "fig4") return figure4_experiment(options);
    if (figure == "fig5") return figure5_experiment(options);
    throw Error("unknown experiment '" + std::string(figure) + "' (expected fig1..fig5)");
}

}  // namespace gwcp
