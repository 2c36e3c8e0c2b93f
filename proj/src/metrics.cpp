#include "persim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "persim/error.hpp"

namespace persim {

void validate_distribution(std::span<const double> probabilities, const std::string &label) {
    if (probabilities.size() < 2) {
        throw DataError(label + ": a distribution needs at least 2 categories, has " +
                        std::to_string(probabilities.size()));
    }
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0)) { // also rejects NaN
            throw DataError(label + ": distribution entries must be non-negative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw DataError(label + ": distribution sums to " + std::to_string(total) + ", not 1");
    }
}

namespace {

void require_same_size(std::span<const double> p, std::span<const double> q) {
    validate_distribution(p, "left distribution");
    validate_distribution(q, "right distribution");
    if (p.size() != q.size()) {
        throw DataError("distributions have mismatched category counts: " +
                        std::to_string(p.size()) + " vs " + std::to_string(q.size()));
    }
}

} // namespace

double wasserstein_1d(std::span<const double> p, std::span<const double> q) {
    require_same_size(p, q);
    const std::size_t k = p.size();
    double cdf_p = 0.0;
    double cdf_q = 0.0;
    double distance = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) { // the final CDF point is 1 for both
        cdf_p += p[i];
        cdf_q += q[i];
        distance += std::abs(cdf_p - cdf_q);
    }
    distance /= static_cast<double>(k - 1);
    return std::clamp(distance, 0.0, 1.0);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    require_same_size(p, q);
    double distance = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        distance += std::abs(p[i] - q[i]);
    }
    return std::clamp(0.5 * distance, 0.0, 1.0);
}

double alignment_score(std::span<const double> p, std::span<const double> q) {
    return 1.0 - wasserstein_1d(p, q);
}

double alignment_score_for(std::span<const double> p, std::span<const double> q, bool ordinal) {
    return ordinal ? alignment_score(p, q) : 1.0 - total_variation(p, q);
}

const char *metric_name(bool ordinal) { return ordinal ? "wasserstein_1d" : "total_variation"; }

namespace {

struct CellSum {
    double total = 0.0;
    std::size_t count = 0;
};

template <typename T>
std::size_t axis_index(const std::vector<T> &axis, const T &value, const char *axis_name) {
    const auto it = std::find(axis.begin(), axis.end(), value);
    if (it == axis.end()) {
        throw DataError(std::string{"cross-simulation observation references a "} + axis_name +
                        " outside the declared axis");
    }
    return static_cast<std::size_t>(it - axis.begin());
}

} // namespace

const CrossSimCell &CrossSimMatrix::at(const std::string &generator, PersonaTier tier,
                                       const std::string &simulator) const {
    for (const auto &cell : cells) {
        if (cell.generator == generator && cell.tier == tier && cell.simulator == simulator) {
            return cell;
        }
    }
    throw DataError("cross-simulation matrix has no cell (" + generator + ", " +
                    std::string{tier_name(tier)} + ", " + simulator + ")");
}

CrossSimMatrix cross_simulation(std::span<const CrossSimObservation> observations,
                                std::span<const std::string> generators,
                                std::span<const std::string> simulators,
                                std::span<const PersonaTier> tiers) {
    if (generators.empty() || simulators.empty() || tiers.empty()) {
        throw ConfigError("cross-simulation requires non-empty generator/simulator/tier axes");
    }

    CrossSimMatrix matrix;
    matrix.generators.assign(generators.begin(), generators.end());
    matrix.simulators.assign(simulators.begin(), simulators.end());
    matrix.tiers.assign(tiers.begin(), tiers.end());

    // META observations are keyed by simulator only (generator is empty: the
    // population was sampled, not generated); other tiers by all three axes.
    std::map<std::size_t, CellSum> meta_sums;                           // simulator idx
    std::map<std::array<std::size_t, 3>, CellSum> sums;                 // gen, tier, sim
    for (const auto &obs : observations) {
        if (obs.alignment < 0.0 || obs.alignment > 1.0) {
            throw DataError("alignment for question '" + obs.question_id + "' is " +
                            std::to_string(obs.alignment) + ", outside [0, 1]");
        }
        const std::size_t sim = axis_index(matrix.simulators, obs.simulator, "simulator");
        if (obs.tier == PersonaTier::Meta) {
            if (!obs.generator.empty()) {
                throw DataError("META-tier observation must carry an empty generator, got '" +
                                obs.generator + "'");
            }
            auto &cell = meta_sums[sim];
            cell.total += obs.alignment;
            ++cell.count;
            continue;
        }
        const std::size_t gen = axis_index(matrix.generators, obs.generator, "generator");
        const auto tier_it = std::find(matrix.tiers.begin(), matrix.tiers.end(), obs.tier);
        if (tier_it == matrix.tiers.end()) {
            throw DataError("cross-simulation observation references a tier outside the axis");
        }
        const auto tier = static_cast<std::size_t>(tier_it - matrix.tiers.begin());
        auto &cell = sums[{gen, tier, sim}];
        cell.total += obs.alignment;
        ++cell.count;
    }

    for (std::size_t g = 0; g < matrix.generators.size(); ++g) {
        for (std::size_t t = 0; t < matrix.tiers.size(); ++t) {
            for (std::size_t s = 0; s < matrix.simulators.size(); ++s) {
                const bool is_meta = matrix.tiers[t] == PersonaTier::Meta;
                const CellSum *sum = nullptr;
                if (is_meta) {
                    const auto it = meta_sums.find(s);
                    sum = it == meta_sums.end() ? nullptr : &it->second;
                } else {
                    const auto it = sums.find({g, t, s});
                    sum = it == sums.end() ? nullptr : &it->second;
                }
                if (sum == nullptr || sum->count == 0) {
                    throw DataError("cross-simulation cell (" + matrix.generators[g] + ", " +
                                    std::string{tier_name(matrix.tiers[t])} + ", " +
                                    matrix.simulators[s] + ") has no scored questions");
                }
                matrix.cells.push_back(CrossSimCell{
                    matrix.generators[g], matrix.tiers[t], matrix.simulators[s],
                    sum->total / static_cast<double>(sum->count), sum->count});
            }
        }
    }
    return matrix;
}

std::vector<TopicVariance> topic_variance_ranking(std::span<const QuestionTierScores> scores) {
    if (scores.empty()) {
        throw DataError("topic variance ranking needs at least one scored question");
    }

    struct TopicSums {
        std::array<double, kTierCount> totals{};
        std::size_t count = 0;
    };
    std::vector<std::string> order; // topics in first-encounter order
    std::map<std::string, TopicSums> by_topic;
    for (const auto &score : scores) {
        if (score.topic.empty()) {
            throw DataError("question '" + score.question_id + "' has no topic label");
        }
        auto [it, inserted] = by_topic.try_emplace(score.topic);
        if (inserted) {
            order.push_back(score.topic);
        }
        for (std::size_t t = 0; t < kTierCount; ++t) {
            it->second.totals[t] += score.by_tier[t];
        }
        ++it->second.count;
    }

    std::vector<TopicVariance> ranking;
    ranking.reserve(order.size());
    for (const auto &topic : order) {
        const TopicSums &sums = by_topic.at(topic);
        TopicVariance entry;
        entry.topic = topic;
        entry.question_count = sums.count;
        double mean_of_means = 0.0;
        for (std::size_t t = 0; t < kTierCount; ++t) {
            entry.tier_means[t] = sums.totals[t] / static_cast<double>(sums.count);
            mean_of_means += entry.tier_means[t];
        }
        mean_of_means /= static_cast<double>(kTierCount);
        for (double mean : entry.tier_means) {
            entry.variance += (mean - mean_of_means) * (mean - mean_of_means);
        }
        entry.variance /= static_cast<double>(kTierCount);
        ranking.push_back(std::move(entry));
    }

    std::stable_sort(ranking.begin(), ranking.end(),
                     [](const TopicVariance &a, const TopicVariance &b) {
                         return a.variance < b.variance;
                     });
    return ranking;
}

} // namespace persim
