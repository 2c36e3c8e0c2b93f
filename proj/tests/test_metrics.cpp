#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "persim/error.hpp"
#include "persim/metrics.hpp"
#include "persim/rng.hpp"

using namespace persim;

namespace {

// Random probability vector with exact unit sum (last entry takes the
// rounding slack).
std::vector<double> random_distribution(Rng &rng, std::size_t k) {
    std::vector<double> p(k);
    double total = 0.0;
    for (double &v : p) {
        v = rng.uniform_double() + 1e-3;
        total += v;
    }
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        p[i] /= total;
        partial += p[i];
    }
    p[k - 1] = 1.0 - partial;
    return p;
}

// Transport distance computed the slow, obviously-correct way: prefix sums
// into explicit CDF arrays, then the normalized absolute difference.
double reference_wasserstein(const std::vector<double> &p, const std::vector<double> &q) {
    std::vector<double> cp(p.size()), cq(q.size());
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        a += p[i];
        b += q[i];
        cp[i] = a;
        cq[i] = b;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        sum += std::abs(cp[i] - cq[i]);
    }
    return sum / static_cast<double>(p.size() - 1);
}

CrossSimObservation obs(const std::string &generator, PersonaTier tier,
                        const std::string &simulator, const std::string &question,
                        double alignment) {
    return CrossSimObservation{generator, tier, simulator, question, "population", alignment};
}

} // namespace

TEST_CASE("validate_distribution enforces the probability contract") {
    CHECK_NOTHROW(validate_distribution(std::vector<double>{0.2, 0.8}, "ok"));
    CHECK_NOTHROW(validate_distribution(std::vector<double>{0.0, 1.0}, "ok"));
    CHECK_THROWS_WITH_AS(validate_distribution(std::vector<double>{1.0}, "single"),
                         doctest::Contains("single"), DataError);
    CHECK_THROWS_AS(validate_distribution(std::vector<double>{1.2, -0.2}, "neg"), DataError);
    CHECK_THROWS_AS(validate_distribution(std::vector<double>{0.5, 0.6}, "sum"), DataError);
    CHECK_THROWS_AS(
        validate_distribution(std::vector<double>{std::numeric_limits<double>::quiet_NaN(), 1.0},
                              "nan"),
        DataError);
}

TEST_CASE("wasserstein_1d on pinned examples") {
    // CDF partial sums: |0.2-0.5| + |0.5-0.8| = 0.6, over K-1 = 2.
    CHECK(wasserstein_1d(std::vector<double>{0.2, 0.3, 0.5}, std::vector<double>{0.5, 0.3, 0.2}) ==
          doctest::Approx(0.3).epsilon(1e-12));
    // Identical distributions are at distance zero.
    CHECK(wasserstein_1d(std::vector<double>{0.25, 0.75}, std::vector<double>{0.25, 0.75}) ==
          doctest::Approx(0.0));
    // Opposite point masses span the whole scale.
    CHECK(wasserstein_1d(std::vector<double>{1, 0, 0, 0, 0}, std::vector<double>{0, 0, 0, 0, 1}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Binary case collapses to |p[0] - q[0]|.
    CHECK(wasserstein_1d(std::vector<double>{0.7, 0.3}, std::vector<double>{0.4, 0.6}) ==
          doctest::Approx(0.3).epsilon(1e-12));
    // Moving a point mass one category over costs 1/(K-1).
    CHECK(wasserstein_1d(std::vector<double>{0, 1, 0, 0}, std::vector<double>{0, 0, 1, 0}) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)wasserstein_1d(std::vector<double>{0.5, 0.5},
                                         std::vector<double>{0.2, 0.3, 0.5}),
                    DataError);
}

TEST_CASE("wasserstein_1d matches an independent CDF recomputation on random pairs") {
    Rng rng(20260815);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = static_cast<std::size_t>(rng.uniform_int(2, 10));
        const auto p = random_distribution(rng, k);
        const auto q = random_distribution(rng, k);
        CHECK(wasserstein_1d(p, q) == doctest::Approx(reference_wasserstein(p, q)).epsilon(1e-12));
    }
}

TEST_CASE("wasserstein_1d behaves like a bounded metric") {
    Rng rng(8675309);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = static_cast<std::size_t>(rng.uniform_int(2, 8));
        const auto p = random_distribution(rng, k);
        const auto q = random_distribution(rng, k);
        const auto r = random_distribution(rng, k);
        const double pq = wasserstein_1d(p, q);
        const double qr = wasserstein_1d(q, r);
        const double pr = wasserstein_1d(p, r);
        CHECK(pq >= 0.0);
        CHECK(pq <= 1.0);
        CHECK(pq == doctest::Approx(wasserstein_1d(q, p)).epsilon(1e-12)); // symmetry
        CHECK(wasserstein_1d(p, p) == doctest::Approx(0.0));               // identity
        CHECK(pr <= pq + qr + 1e-12);                                      // triangle inequality
    }
}

TEST_CASE("total_variation on pinned examples") {
    CHECK(total_variation(std::vector<double>{0.2, 0.3, 0.5}, std::vector<double>{0.5, 0.3, 0.2}) ==
          doctest::Approx(0.3).epsilon(1e-12));
    CHECK(total_variation(std::vector<double>{1, 0, 0}, std::vector<double>{0, 0, 1}) ==
          doctest::Approx(1.0));
    CHECK(total_variation(std::vector<double>{0.5, 0.5}, std::vector<double>{0.5, 0.5}) ==
          doctest::Approx(0.0));
}

TEST_CASE("ordinal and non-ordinal alignment use their own metrics") {
    // Mass split to the scale ends vs the middle: transport cost 0.5, but
    // total variation is maximal.
    const std::vector<double> p = {0.5, 0.0, 0.5};
    const std::vector<double> q = {0.0, 1.0, 0.0};
    CHECK(alignment_score(p, q) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(alignment_score_for(p, q, true) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(alignment_score_for(p, q, false) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::string(metric_name(true)) == "wasserstein_1d");
    CHECK(std::string(metric_name(false)) == "total_variation");
}

TEST_CASE("alignment is 1 exactly when the simulation reproduces the reference") {
    Rng rng(424242);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_distribution(rng, 5);
        CHECK(alignment_score(p, p) == doctest::Approx(1.0));
    }
    CHECK(alignment_score(std::vector<double>{1, 0}, std::vector<double>{0, 1}) ==
          doctest::Approx(0.0));
}

TEST_CASE("cross-simulation means match a flat re-average and replicate META") {
    const std::vector<std::string> generators = {"genA", "genB"};
    const std::vector<std::string> simulators = {"simX", "simY"};
    const std::vector<PersonaTier> tiers = {PersonaTier::Meta, PersonaTier::ObjectiveTabular,
                                            PersonaTier::SubjectiveTabular,
                                            PersonaTier::Descriptive};
    std::vector<CrossSimObservation> observations;
    // META rows carry no generator; two questions each for variety.
    observations.push_back(obs("", PersonaTier::Meta, "simX", "q1", 0.90));
    observations.push_back(obs("", PersonaTier::Meta, "simX", "q2", 0.70));
    observations.push_back(obs("", PersonaTier::Meta, "simY", "q1", 0.60));
    observations.push_back(obs("", PersonaTier::Meta, "simY", "q2", 0.80));
    // Generated tiers: fill every (generator, tier, simulator) cell.
    double v = 0.0;
    for (const auto &g : generators) {
        for (PersonaTier tier : {PersonaTier::ObjectiveTabular, PersonaTier::SubjectiveTabular,
                                 PersonaTier::Descriptive}) {
            for (const auto &s : simulators) {
                for (const auto &q : {"q1", "q2"}) {
                    v = std::fmod(v + 0.137, 1.0);
                    observations.push_back(obs(g, tier, s, q, v));
                }
            }
        }
    }

    const CrossSimMatrix matrix = cross_simulation(observations, generators, simulators, tiers);
    CHECK(matrix.cells.size() == 2 * 4 * 2);

    // META means are computed per simulator and replicated across generators.
    CHECK(matrix.at("genA", PersonaTier::Meta, "simX").mean_alignment ==
          doctest::Approx(0.80).epsilon(1e-12));
    CHECK(matrix.at("genB", PersonaTier::Meta, "simX").mean_alignment ==
          doctest::Approx(0.80).epsilon(1e-12));
    CHECK(matrix.at("genA", PersonaTier::Meta, "simY").mean_alignment ==
          doctest::Approx(0.70).epsilon(1e-12));
    CHECK(matrix.at("genA", PersonaTier::Meta, "simX").sample_count == 2);

    // Every generated-tier cell mean equals a plain-loop re-average.
    for (const auto &g : generators) {
        for (PersonaTier tier : {PersonaTier::ObjectiveTabular, PersonaTier::SubjectiveTabular,
                                 PersonaTier::Descriptive}) {
            for (const auto &s : simulators) {
                double total = 0.0;
                std::size_t count = 0;
                for (const auto &o : observations) {
                    if (o.generator == g && o.tier == tier && o.simulator == s) {
                        total += o.alignment;
                        ++count;
                    }
                }
                const auto &cell = matrix.at(g, tier, s);
                CHECK(cell.sample_count == count);
                CHECK(cell.mean_alignment == doctest::Approx(total / count).epsilon(1e-12));
            }
        }
    }

    // Cell layout is generator-major, then tier, then simulator.
    CHECK(matrix.cells[0].generator == "genA");
    CHECK(matrix.cells[0].tier == PersonaTier::Meta);
    CHECK(matrix.cells[0].simulator == "simX");
    CHECK(matrix.cells[1].simulator == "simY");
    CHECK(matrix.cells[2].tier == PersonaTier::ObjectiveTabular);
    CHECK(matrix.cells[8].generator == "genB");
}

TEST_CASE("cross-simulation rejects malformed observation sets") {
    const std::vector<std::string> generators = {"genA"};
    const std::vector<std::string> simulators = {"simX"};
    const std::vector<PersonaTier> tiers = {PersonaTier::Meta, PersonaTier::Descriptive};
    const std::vector<CrossSimObservation> complete = {
        obs("", PersonaTier::Meta, "simX", "q1", 0.5),
        obs("genA", PersonaTier::Descriptive, "simX", "q1", 0.5)};
    CHECK_NOTHROW((void)cross_simulation(complete, generators, simulators, tiers));

    // A META observation must not name a generator.
    std::vector<CrossSimObservation> tagged = complete;
    tagged[0].generator = "genA";
    CHECK_THROWS_AS((void)cross_simulation(tagged, generators, simulators, tiers), DataError);

    // Every cell needs at least one observation.
    const std::vector<CrossSimObservation> missing_meta = {
        obs("genA", PersonaTier::Descriptive, "simX", "q1", 0.5)};
    CHECK_THROWS_WITH_AS((void)cross_simulation(missing_meta, generators, simulators, tiers),
                         doctest::Contains("META"), DataError);

    // Alignment scores live in [0, 1].
    std::vector<CrossSimObservation> out_of_range = complete;
    out_of_range[1].alignment = 1.5;
    CHECK_THROWS_AS((void)cross_simulation(out_of_range, generators, simulators, tiers), DataError);

    // Observations must reference declared axis values.
    std::vector<CrossSimObservation> stray = complete;
    stray[1].simulator = "simZ";
    CHECK_THROWS_AS((void)cross_simulation(stray, generators, simulators, tiers), DataError);

    CHECK_THROWS_AS((void)cross_simulation(complete, std::vector<std::string>{}, simulators, tiers),
                    ConfigError);
}

TEST_CASE("topic variance on a pinned example") {
    // Tier scores {1, 1, 1, 0}: mean 0.75, population variance
    // ((3 * 0.0625) + 0.5625) / 4 = 0.1875.
    const std::vector<QuestionTierScores> scores = {
        {"q1", "economy", {1.0, 1.0, 1.0, 0.0}},
    };
    const auto ranking = topic_variance_ranking(scores);
    REQUIRE(ranking.size() == 1);
    CHECK(ranking[0].topic == "economy");
    CHECK(ranking[0].variance == doctest::Approx(0.1875).epsilon(1e-12));
    CHECK(ranking[0].question_count == 1);
    CHECK(ranking[0].tier_means[0] == doctest::Approx(1.0));
    CHECK(ranking[0].tier_means[3] == doctest::Approx(0.0));
}

TEST_CASE("topic variance averages per tier before taking the variance") {
    // Two questions whose tier scores average to {0.5, 0.5, 0.5, 0.5}: the
    // per-question spread cancels, so the topic variance is 0.
    const std::vector<QuestionTierScores> scores = {
        {"q1", "balanced", {0.0, 1.0, 0.25, 0.75}},
        {"q2", "balanced", {1.0, 0.0, 0.75, 0.25}},
        {"q3", "tilted", {0.2, 0.4, 0.6, 0.8}},
    };
    const auto ranking = topic_variance_ranking(scores);
    REQUIRE(ranking.size() == 2);
    CHECK(ranking[0].topic == "balanced");
    CHECK(ranking[0].variance == doctest::Approx(0.0));
    CHECK(ranking[0].question_count == 2);
    CHECK(ranking[1].topic == "tilted");
    // Population variance of {0.2, 0.4, 0.6, 0.8}: mean 0.5, variance 0.05.
    CHECK(ranking[1].variance == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("topic ranking sorts ascending and keeps encounter order on ties") {
    const std::vector<QuestionTierScores> scores = {
        {"q1", "first-flat", {0.5, 0.5, 0.5, 0.5}},
        {"q2", "spread", {0.0, 0.0, 1.0, 1.0}},
        {"q3", "second-flat", {0.9, 0.9, 0.9, 0.9}},
    };
    const auto ranking = topic_variance_ranking(scores);
    REQUIRE(ranking.size() == 3);
    CHECK(ranking[0].topic == "first-flat"); // both flat topics tie at variance 0
    CHECK(ranking[1].topic == "second-flat");
    CHECK(ranking[2].topic == "spread");
    CHECK(ranking[2].variance == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("topic ranking requires a topic label on every question") {
    const std::vector<QuestionTierScores> scores = {{"q1", "", {0.5, 0.5, 0.5, 0.5}}};
    CHECK_THROWS_AS((void)topic_variance_ranking(scores), DataError);
}
