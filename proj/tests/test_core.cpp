#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gwcp/core.hpp"
#include "oracles.hpp"

using gwcp::Atom;
using gwcp::ExtendedScore;
using gwcp::WeightedScoreDistribution;

namespace {

const ExtendedScore kInf = ExtendedScore::infinity();

ExtendedScore es(double v) { return ExtendedScore(v); }

WeightedScoreDistribution dist(std::vector<std::pair<double, double>> pairs) {
    std::vector<Atom> atoms;
    for (auto [s, w] : pairs) atoms.push_back({es(s), w});
    return WeightedScoreDistribution(std::move(atoms));
}

struct Instance {
    std::vector<Atom> atoms;
    std::vector<oracle::WeightedAtom> plain;
};

Instance random_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> size(1, 100);
    std::uniform_int_distribution<int> level(0, 9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Instance inst;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
        const double u = unit(rng);
        // Few distinct scores so ties are common; some atoms at +inf.
        const double score = u < 0.1 ? oracle::kInf : static_cast<double>(level(rng));
        const double w = unit(rng) < 0.2 ? 0.0 : unit(rng);
        inst.atoms.push_back({ExtendedScore(score), w});
        inst.plain.push_back({score, w});
    }
    inst.atoms.push_back({es(-1.0), 0.5});
    inst.plain.push_back({-1.0, 0.5});
    return inst;
}

}  // namespace

TEST_CASE("extended scores reject nan and -inf") {
    CHECK_THROWS_AS(ExtendedScore(std::nan("")), gwcp::Error);
    CHECK_THROWS_AS(ExtendedScore(-std::numeric_limits<double>::infinity()), gwcp::Error);
    CHECK(es(1e300) < kInf);
    CHECK_FALSE(kInf.is_finite());
    CHECK(ExtendedScore(std::numeric_limits<double>::infinity()) == kInf);
}

TEST_CASE("distribution construction validates weights") {
    CHECK_THROWS_WITH(dist({{1.0, 0.0}}), "empty distribution");
    CHECK_THROWS_AS(dist({{1.0, -1.0}, {2.0, 3.0}}), gwcp::Error);
    CHECK_THROWS_AS(dist({{1.0, std::numeric_limits<double>::infinity()}}), gwcp::Error);
    CHECK_THROWS_WITH(WeightedScoreDistribution(std::vector<Atom>{}), "empty distribution");
    CHECK(dist({{1.0, 2.0}, {3.0, 0.5}}).total_weight() == 2.5);
}

TEST_CASE("normalize") {
    auto a = gwcp::normalize(dist({{1, 2}, {2, 2}}));
    CHECK(a.atoms()[0] == Atom{es(1), 0.5});
    CHECK(a.atoms()[1] == Atom{es(2), 0.5});

    auto b = gwcp::normalize(dist({{5, 1}}));
    CHECK(b.atoms()[0] == Atom{es(5), 1.0});

    auto c = gwcp::normalize(dist({{1, 1}, {2, 3}}));
    CHECK(c.atoms()[0].weight == 0.25);
    CHECK(c.atoms()[1].weight == 0.75);
}

TEST_CASE("weighted quantile examples") {
    const std::vector<double> five{1, 2, 3, 4, 5};
    CHECK(gwcp::weighted_quantile(WeightedScoreDistribution::uniform(five), 0.6) == es(3));
    CHECK(gwcp::weighted_quantile(dist({{1.0, 0.5}, {oracle::kInf, 0.5}}), 0.7) == kInf);
    CHECK(gwcp::weighted_quantile(dist({{1.0, 0.5}, {oracle::kInf, 0.5}}), 0.5) == es(1.0));
}

TEST_CASE("weighted quantile edge levels") {
    auto d = dist({{2, 1}, {1, 1}});
    CHECK_THROWS_AS(gwcp::weighted_quantile(d, 0.0), gwcp::Error);
    CHECK_THROWS_AS(gwcp::weighted_quantile(d, -0.5), gwcp::Error);
    CHECK_THROWS_AS(gwcp::weighted_quantile(d, std::nan("")), gwcp::Error);
    CHECK(gwcp::weighted_quantile(d, 1e-12) == es(1));
    CHECK(gwcp::weighted_quantile(d, 1.0) == es(2));
    CHECK(gwcp::weighted_quantile(d, 1.0 + 1e-12) == kInf);
    CHECK(gwcp::weighted_quantile(d, 7.0) == kInf);
}

TEST_CASE("zero-weight atoms are never returned") {
    auto d = dist({{0, 0.0}, {1, 1.0}, {2, 0.0}, {3, 1.0}});
    CHECK(gwcp::weighted_quantile(d, 1e-12) == es(1));
    CHECK(gwcp::weighted_quantile(d, 0.5) == es(1));
    CHECK(gwcp::weighted_quantile(d, 0.51) == es(3));
}

TEST_CASE("rational ties resolve at the exact boundary") {
    // Twenty atoms of mass 1/20: cumulative 16/20 must reach 0.8 at the 16th.
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 20; ++i) pairs.push_back({static_cast<double>(i), 1.0 / 20.0});
    CHECK(gwcp::weighted_quantile(dist(pairs), 0.8) == es(15));
    CHECK(gwcp::weighted_quantile(dist(pairs), 1.0 - 0.2) == es(15));
}

TEST_CASE("uniform weights give the order statistic quantile") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> scores(1 + rep % 37);
        for (double& s : scores) s = z(rng);
        const double tau = unit(rng);
        CHECK(gwcp::weighted_quantile(WeightedScoreDistribution::uniform(scores), tau).value() ==
              oracle::order_statistic_quantile(scores, tau));
    }
}

TEST_CASE("weighted quantile matches the brute-force oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> tau_dist(0.0, 1.2);
    for (int rep = 0; rep < 2000; ++rep) {
        const Instance inst = random_instance(rng);
        double tau = tau_dist(rng);
        if (tau == 0.0) tau = 0.5;
        const WeightedScoreDistribution d(inst.atoms);
        REQUIRE(gwcp::weighted_quantile(d, tau).value() == oracle::weighted_quantile(inst.plain, tau));
    }
}

TEST_CASE("batched quantiles agree with single evaluations") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> tau_dist(0.001, 1.1);
    for (int rep = 0; rep < 200; ++rep) {
        const Instance inst = random_instance(rng);
        const WeightedScoreDistribution d(inst.atoms);
        std::vector<double> taus(7);
        for (double& t : taus) t = tau_dist(rng);
        const auto batch = gwcp::weighted_quantiles(d, taus);
        for (std::size_t i = 0; i < taus.size(); ++i) {
            CHECK(batch[i] == gwcp::weighted_quantile(d, taus[i]));
        }
    }
}

TEST_CASE("quantile is monotone in the level") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> tau_dist(0.001, 1.2);
    for (int rep = 0; rep < 300; ++rep) {
        const WeightedScoreDistribution d(random_instance(rng).atoms);
        double a = tau_dist(rng);
        double b = tau_dist(rng);
        if (a > b) std::swap(a, b);
        CHECK(gwcp::weighted_quantile(d, a) <= gwcp::weighted_quantile(d, b));
    }
}

TEST_CASE("quantile commutes with increasing transforms") {
    std::mt19937_64 rng(78);
    std::uniform_real_distribution<double> tau_dist(0.001, 1.2);
    auto g = [](double s) { return std::isinf(s) ? s : std::exp(s) + 3.0; };
    for (int rep = 0; rep < 300; ++rep) {
        const Instance inst = random_instance(rng);
        std::vector<Atom> mapped;
        for (const Atom& a : inst.atoms) mapped.push_back({es(g(a.score.value())), a.weight});
        const double tau = tau_dist(rng);
        CHECK(gwcp::weighted_quantile(WeightedScoreDistribution(mapped), tau).value() ==
              g(gwcp::weighted_quantile(WeightedScoreDistribution(inst.atoms), tau).value()));
    }
}

TEST_CASE("quantile is invariant to permutation, rescaling and splitting atoms") {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> tau_dist(0.001, 1.2);
    for (int rep = 0; rep < 300; ++rep) {
        const Instance inst = random_instance(rng);
        const double tau = tau_dist(rng);
        const auto expected = gwcp::weighted_quantile(WeightedScoreDistribution(inst.atoms), tau);

        auto permuted = inst.atoms;
        std::shuffle(permuted.begin(), permuted.end(), rng);
        CHECK(gwcp::weighted_quantile(WeightedScoreDistribution(permuted), tau) == expected);

        auto scaled = inst.atoms;
        for (Atom& a : scaled) a.weight *= 4.0;
        CHECK(gwcp::weighted_quantile(WeightedScoreDistribution(scaled), tau) == expected);

        std::vector<Atom> split;
        for (const Atom& a : inst.atoms) {
            split.push_back({a.score, a.weight * 0.5});
            split.push_back({a.score, a.weight * 0.5});
        }
        CHECK(gwcp::weighted_quantile(WeightedScoreDistribution(split), tau) == expected);
    }
}

TEST_CASE("mixture") {
    const std::vector<WeightedScoreDistribution> two{dist({{0, 1}}), dist({{1, 1}})};
    const std::vector<double> halves{0.5, 0.5};
    auto m = gwcp::mixture(two, halves);
    REQUIRE(m.size() == 2);
    CHECK(m.atoms()[0] == Atom{es(0), 0.5});
    CHECK(m.atoms()[1] == Atom{es(1), 0.5});

    const std::vector<WeightedScoreDistribution> one{dist({{1, 1}, {2, 3}})};
    const std::vector<double> unit{1.0};
    auto same = gwcp::normalize(gwcp::mixture(one, unit));
    CHECK(same.atoms()[0].weight == 0.25);
    CHECK(same.atoms()[1].weight == 0.75);

    const std::vector<WeightedScoreDistribution> three{dist({{0, 2}, {1, 5}}), dist({{3, 1}}),
                                                       dist({{4, 1}, {5, 1}, {6, 7}})};
    const std::vector<double> w{0.2, 0.3, 0.5};
    auto mixed = gwcp::normalize(gwcp::mixture(three, w));
    const auto atoms = mixed.atoms();
    CHECK(atoms[0].weight + atoms[1].weight == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(atoms[2].weight == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(atoms[3].weight + atoms[4].weight + atoms[5].weight ==
          doctest::Approx(0.5).epsilon(1e-14));

    const std::vector<double> zeros{0.0, 0.0};
    CHECK_THROWS_AS(gwcp::mixture(two, zeros), gwcp::Error);
    CHECK_THROWS_AS(gwcp::mixture(two, unit), gwcp::Error);
    const std::vector<double> negative{-0.5, 1.5};
    CHECK_THROWS_AS(gwcp::mixture(two, negative), gwcp::Error);
}
