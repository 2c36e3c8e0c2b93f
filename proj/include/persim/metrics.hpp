#pragma once

// Alignment scoring: distance between a simulated choice distribution and a
// reference distribution, normalized to [0, 1].  Ordinal questions use the
// 1-Wasserstein distance on the category scale (CDF partial sums divided by
// K-1); non-ordinal questions fall back to total-variation distance, and the
// metric name travels with every report so the two are never conflated.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "persim/persona.hpp"

namespace persim {

// Entries >= 0, sum 1 within 1e-9, at least two categories.  Throws DataError
// naming `label` otherwise.
void validate_distribution(std::span<const double> probabilities, const std::string &label);

// (1/(K-1)) * sum_{k<K} |CDF_p(k) - CDF_q(k)| over a shared category order.
// 0 iff p = q, 1 for opposite point masses at the scale ends; for K = 2 this
// is exactly |p[0] - q[0]|.
double wasserstein_1d(std::span<const double> p, std::span<const double> q);

// 0.5 * sum |p_k - q_k|; order-free distance for non-ordinal choice sets.
double total_variation(std::span<const double> p, std::span<const double> q);

// 1 - wasserstein_1d(p, q): 1 means the simulated distribution reproduces
// the reference exactly.
double alignment_score(std::span<const double> p, std::span<const double> q);

// Alignment under the metric the question calls for.
double alignment_score_for(std::span<const double> p, std::span<const double> q, bool ordinal);

// "wasserstein_1d" or "total_variation"; recorded in exported reports.
const char *metric_name(bool ordinal);

// One scored (question, cohort) pair feeding the cross-simulation matrix.
// Personas sampled directly from the census table carry an empty generator.
struct CrossSimObservation {
    std::string generator;
    PersonaTier tier = PersonaTier::Meta;
    std::string simulator;
    std::string question_id;
    std::string cohort;
    double alignment = 0.0;
};

struct CrossSimCell {
    std::string generator;
    PersonaTier tier = PersonaTier::Meta;
    std::string simulator;
    double mean_alignment = 0.0;
    std::size_t sample_count = 0;
};

// Mean alignment per (generator, tier, simulator).  META-tier cells describe
// the sampled population, which no generator produced, so the META mean is
// computed once per simulator and replicated across the generator axis.
struct CrossSimMatrix {
    std::vector<std::string> generators;
    std::vector<std::string> simulators;
    std::vector<PersonaTier> tiers;
    std::vector<CrossSimCell> cells; // generator-major, then tier, then simulator

    const CrossSimCell &at(const std::string &generator, PersonaTier tier,
                           const std::string &simulator) const;
};

CrossSimMatrix cross_simulation(std::span<const CrossSimObservation> observations,
                                std::span<const std::string> generators,
                                std::span<const std::string> simulators,
                                std::span<const PersonaTier> tiers);

// Per-question alignment for each of the four tiers, plus its topic label.
struct QuestionTierScores {
    std::string question_id;
    std::string topic;
    std::array<double, kTierCount> by_tier{};
};

struct TopicVariance {
    std::string topic;
    std::array<double, kTierCount> tier_means{};
    double variance = 0.0; // population variance across the four tier means
    std::size_t question_count = 0;
};

// Topics ordered by how much their alignment depends on the persona tier:
// per topic, mean score per tier over its questions, then the population
// variance of those four means, sorted ascending (stable on ties).
std::vector<TopicVariance> topic_variance_ranking(std::span<const QuestionTierScores> scores);

} // namespace persim
