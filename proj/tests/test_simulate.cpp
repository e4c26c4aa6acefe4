#include <doctest.h>

#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gwcp/bounds.hpp"
#include "gwcp/simulate.hpp"

using gwcp::GroupModel;
using gwcp::GroupSimplex;
using gwcp::Method;
using gwcp::MethodSpec;
using gwcp::SamplingScheme;

namespace {

MethodSpec plain(Method m) {
    MethodSpec spec;
    spec.method = m;
    return spec;
}

}  // namespace

TEST_CASE("calibration draws") {
    auto engine = gwcp::trial_engine(0, 0);
    const GroupModel points({gwcp::PointMassLaw{3.0}, gwcp::PointMassLaw{7.0}});
    const auto fixed = gwcp::draw_calibration(points, SamplingScheme::fixed({1, 1}), engine);
    CHECK(fixed.group(0)[0] == 3.0);
    CHECK(fixed.group(1)[0] == 7.0);

    const auto multi =
        gwcp::draw_calibration(points, SamplingScheme::multinomial(GroupSimplex({1.0, 0.0}), 5), engine);
    CHECK(multi.count(0) == 5);
    CHECK(multi.count(1) == 0);

    CHECK_THROWS_AS(gwcp::draw_calibration(points, SamplingScheme::fixed({1, 1, 1}), engine),
                    gwcp::Error);
    CHECK_THROWS_AS(SamplingScheme::fixed({0, 0}), gwcp::Error);
    CHECK_THROWS_AS(GroupModel({gwcp::UniformLaw{1.0, 1.0}}), gwcp::Error);
}

TEST_CASE("test point draws") {
    auto engine = gwcp::trial_engine(0, 1);
    const GroupModel model({gwcp::PointMassLaw{1.0}, gwcp::PointMassLaw{2.0}, gwcp::PointMassLaw{3.0}});
    for (int i = 0; i < 100; ++i) {
        const auto t = gwcp::draw_test(model, GroupSimplex({0.0, 1.0, 0.0}), engine);
        CHECK(t.group == 1);
        CHECK(t.score == 2.0);
    }
}

TEST_CASE("score laws") {
    auto engine = gwcp::trial_engine(4, 4);
    for (int i = 0; i < 1000; ++i) {
        const double u = gwcp::sample_score(gwcp::UniformLaw{0.2, 0.4}, engine);
        CHECK(u >= 0.2);
        CHECK(u < 0.4);
        CHECK(gwcp::sample_score(gwcp::AbsNormalLaw{-3.0}, engine) >= 0.0);
    }
}

TEST_CASE("staircase model and regimes") {
    const auto model = gwcp::staircase_model(5);
    const auto& law = std::get<gwcp::UniformLaw>(model.law(3));
    CHECK(law.lower == doctest::Approx(0.6));
    CHECK(law.upper == doctest::Approx(0.8));

    CHECK(gwcp::regime_counts(gwcp::SizeRegime::all_small, 10) == std::vector<std::size_t>(10, 1));
    CHECK(gwcp::regime_counts(gwcp::SizeRegime::none_small, 5) == std::vector<std::size_t>(5, 100));
    const auto one = gwcp::regime_counts(gwcp::SizeRegime::one_small, 10);
    CHECK(one[7] == 1);
    CHECK(std::count(one.begin(), one.end(), 100) == 9);
    CHECK_THROWS_AS(gwcp::regime_counts(gwcp::SizeRegime::one_small, 7), gwcp::Error);
}

TEST_CASE("coverage is exactly one when unobserved mass exceeds alpha") {
    const GroupModel model({gwcp::NormalLaw{0.0}, gwcp::NormalLaw{5.0}});
    const auto s = gwcp::run_coverage(model, SamplingScheme::fixed({20, 0}), GroupSimplex({0.5, 0.5}),
                                      0.2, plain(Method::gwcp), 300, 1);
    CHECK(s.mean_coverage == 1.0);
    CHECK(s.ci_half_width == 0.0);
}

TEST_CASE("tight example coverage") {
    const auto model = gwcp::tight_example_model(10, 0.1);
    std::vector<std::size_t> counts(10, 100);
    counts[0] = 1;
    const auto s = gwcp::run_coverage(model, SamplingScheme::fixed(counts), GroupSimplex::uniform(10),
                                      0.1, plain(Method::gwcp), 4000, 7);
    CHECK(std::abs(s.mean_coverage - gwcp::tight_example_coverage(10, 1, 0.1)) <=
          2.0 * s.ci_half_width);
}

TEST_CASE("AllSmall at K = 5 lies between the Theorem 1 bound and the target") {
    const auto s = gwcp::run_coverage(gwcp::staircase_model(5),
                                      SamplingScheme::fixed(gwcp::regime_counts(gwcp::SizeRegime::all_small, 5)),
                                      GroupSimplex::uniform(5), 0.2, plain(Method::gwcp), 2000, 3);
    CHECK(s.mean_coverage >= 0.6 - s.ci_half_width);
    CHECK(s.mean_coverage <= 0.8);
    CHECK(s.trials == 2000);
    CHECK(s.attempted_trials == 2000);
}

TEST_CASE("multinomial sampling meets the theorem 2 bound") {
    const auto K = 10;
    std::vector<gwcp::ScoreLaw> laws;
    for (int k = 0; k < K; ++k) laws.emplace_back(gwcp::NormalLaw{static_cast<double>(k)});
    const GroupModel model(std::move(laws));
    const auto u = GroupSimplex::uniform(K);
    const auto s = gwcp::run_coverage(model, SamplingScheme::multinomial(u, 1000), u, 0.1,
                                      plain(Method::gwcp), 1000, 5);
    CHECK(s.mean_coverage >= gwcp::thm2_closed_bound(u, u, 1000, 0.1).value - 3.0 * s.ci_half_width);
}

TEST_CASE("coverage runs are reproducible") {
    const auto model = gwcp::staircase_model(10);
    const auto scheme = SamplingScheme::multinomial(GroupSimplex::uniform(10), 30);
    const auto q = GroupSimplex::uniform(10);
    for (Method m : {Method::gwcp, Method::gwcp_unobserved, Method::corrected_gwcp, Method::wcp_plus}) {
        const auto a = gwcp::run_coverage(model, scheme, q, 0.2, plain(m), 300, 11);
        const auto b = gwcp::run_coverage(model, scheme, q, 0.2, plain(m), 300, 11);
        CHECK(a.mean_coverage == b.mean_coverage);
        CHECK(a.trials == b.trials);
    }
}

TEST_CASE("estimated weight runs discard trials with undefined weights") {
    const GroupModel model({gwcp::AbsNormalLaw{0.0}, gwcp::AbsNormalLaw{3.0}});
    const GroupSimplex p({0.97, 0.03});
    MethodSpec spec;
    spec.method = Method::estimated_weight;
    spec.source = gwcp::WeightSource::calibration;
    spec.train_probs = p;
    const auto s = gwcp::run_coverage(model, SamplingScheme::multinomial(p, 30), GroupSimplex::uniform(2),
                                      0.2, spec, 400, 2);
    CHECK(s.attempted_trials == 400);
    CHECK(s.trials < 400);
    CHECK(s.trials > 0);

    spec.source = gwcp::WeightSource::pretraining;
    spec.pretrain_size = 0;
    CHECK_THROWS_AS(gwcp::run_coverage(model, SamplingScheme::multinomial(p, 30),
                                       GroupSimplex::uniform(2), 0.2, spec, 10, 2),
                    gwcp::Error);
}

TEST_CASE("experiment tables") {
    gwcp::ExperimentOptions options;
    options.trials = 5;
    options.seed = 9;

    const auto fig1 = gwcp::figure1_experiment(options);
    CHECK(fig1.experiment == "fig1");
    CHECK(fig1.rows.size() == 3 * 91);
    for (const auto& r : fig1.rows) {
        CHECK(r.value <= 0.9);
        CHECK(r.method == "lei");
        CHECK(r.seed == 9);
    }

    const auto fig3 = gwcp::figure3_experiment(options);
    CHECK(fig3.rows.size() == 2 * 3 * 91);
    // Rows ordered by regime, then param, then method.
    for (std::size_t i = 1; i < fig3.rows.size(); ++i) {
        const auto& a = fig3.rows[i - 1];
        const auto& b = fig3.rows[i];
        CHECK(std::tie(a.regime, a.param, a.method) < std::tie(b.regime, b.param, b.method));
    }

    const auto fig4 = gwcp::figure4_experiment(options);
    CHECK(fig4.rows.size() == 30);
    std::set<std::string> regimes;
    for (const auto& r : fig4.rows) regimes.insert(r.regime);
    CHECK(regimes == std::set<std::string>{"AllSmall", "NoneSmall", "OneSmall"});

    const auto fig5 = gwcp::figure5_experiment(options);
    CHECK(fig5.rows.size() == 9);
    CHECK(fig5.rows.front().regime == "Setting1");
    CHECK(fig5.rows.front().method == "calibration");

    CHECK_THROWS_AS(gwcp::run_experiment("fig6", options), gwcp::Error);
}
