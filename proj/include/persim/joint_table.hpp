#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "persim/jsonl.hpp"

namespace persim {

// Axis names follow the census extract header.
inline constexpr const char *kAgeAxis = "AGE";
inline constexpr const char *kSexAxis = "SEX";
inline constexpr const char *kRaceAxis = "RACE";
inline constexpr const char *kStateAxis = "STATE";

struct DemographicAxis {
    std::string name;                    // AGE, SEX, RACE, or STATE
    std::vector<std::string> categories; // unique, ordered by first appearance

    int category_index(const std::string &label) const; // -1 when absent
};

// A probability table over the cross product of the axes. Cells are keyed by
// per-axis category indices; absent cells carry zero mass. Weights may be raw
// counts; normalization happens on access.
class JointDistribution {
  public:
    JointDistribution(std::vector<DemographicAxis> axes, std::map<std::vector<int>, double> cells);

    const std::vector<DemographicAxis> &axes() const { return axes_; }
    const std::map<std::vector<int>, double> &cells() const { return cells_; }
    double total_weight() const { return total_; }
    int axis_index(const std::string &name) const; // -1 when absent
    const DemographicAxis &axis(const std::string &name) const;

    // Normalized probability of one cell.
    double probability(const std::vector<int> &key) const;

  private:
    std::vector<DemographicAxis> axes_;
    std::map<std::vector<int>, double> cells_;
    double total_ = 0.0;
};

struct MetaPersona {
    int age = 0;
    std::string sex;
    std::string race;
    std::string state;

    bool operator==(const MetaPersona &) const = default;
};

// Inclusive integer age range parsed from a bracket label: "25-34", "65+",
// or a bare year like "42". Open-ended brackets close at 99.
struct AgeBracket {
    int lo = 0;
    int hi = 0;

    bool contains(int age) const { return age >= lo && age <= hi; }
    static AgeBracket parse(const std::string &label);
};

// Loads a delimited joint table: header row names the axes, last column is
// WEIGHT, one row per cell. Duplicate category tuples are summed.
JointDistribution load_joint_table(const std::filesystem::path &path);

// Mass of each category along one axis, normalized to sum to 1.
std::vector<double> marginal(const JointDistribution &dist, const std::string &axis_name);

// Distribution restricted to one state category, renormalized over the
// remaining cells. Keys keep the full axis tuple.
JointDistribution conditional_on_state(const JointDistribution &dist, int state_category);

// Draws exactly per_state personas for every state category, each state from
// its own conditional slice with a seed derived as derive_seed(seed, state
// index). Ages are drawn uniformly inside the sampled bracket. Output order:
// states in axis order, draws in order within each state.
std::vector<MetaPersona> sample_meta_personas(const JointDistribution &dist, int per_state,
                                              std::uint64_t seed);

Json meta_to_json(const MetaPersona &meta);
MetaPersona meta_from_json(const Json &row);
void write_meta_jsonl(const std::filesystem::path &path, const std::vector<MetaPersona> &metas);
std::vector<MetaPersona> read_meta_jsonl(const std::filesystem::path &path);

} // namespace persim
