#include "persim/joint_table.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "persim/error.hpp"
#include "persim/rng.hpp"

namespace persim {

namespace {

std::string trim(const std::string &s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string &line, char delim) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delim)) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == delim) {
        fields.push_back("");
    }
    return fields;
}

bool is_known_axis(const std::string &name) {
    return name == kAgeAxis || name == kSexAxis || name == kRaceAxis || name == kStateAxis;
}

} // namespace

int DemographicAxis::category_index(const std::string &label) const {
    for (std::size_t i = 0; i < categories.size(); ++i) {
        if (categories[i] == label) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

JointDistribution::JointDistribution(std::vector<DemographicAxis> axes,
                                     std::map<std::vector<int>, double> cells)
    : axes_(std::move(axes)), cells_(std::move(cells)) {
    if (axes_.empty()) {
        throw DataError("joint distribution needs at least one axis");
    }
    for (const auto &axis : axes_) {
        if (axis.categories.empty()) {
            throw DataError("axis " + axis.name + " has no categories");
        }
        std::set<std::string> seen(axis.categories.begin(), axis.categories.end());
        if (seen.size() != axis.categories.size()) {
            throw DataError("axis " + axis.name + " has duplicate categories");
        }
    }
    for (const auto &[key, weight] : cells_) {
        if (key.size() != axes_.size()) {
            throw DataError("cell key arity does not match axis count");
        }
        for (std::size_t i = 0; i < key.size(); ++i) {
            if (key[i] < 0 || key[i] >= static_cast<int>(axes_[i].categories.size())) {
                throw DataError("cell key out of range for axis " + axes_[i].name);
            }
        }
        if (weight < 0.0 || !std::isfinite(weight)) {
            throw DataError("negative or non-finite cell weight");
        }
        total_ += weight;
    }
    if (total_ <= 0.0) {
        throw DataError("joint distribution has zero total mass");
    }
}

int JointDistribution::axis_index(const std::string &name) const {
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        if (axes_[i].name == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

const DemographicAxis &JointDistribution::axis(const std::string &name) const {
    int idx = axis_index(name);
    if (idx < 0) {
        throw DataError("unknown axis: " + name);
    }
    return axes_[static_cast<std::size_t>(idx)];
}

double JointDistribution::probability(const std::vector<int> &key) const {
    auto it = cells_.find(key);
    return it == cells_.end() ? 0.0 : it->second / total_;
}

AgeBracket AgeBracket::parse(const std::string &label) {
    const std::string text = trim(label);
    if (text.empty()) {
        throw DataError("empty age bracket label");
    }
    auto parse_int = [&](const std::string &part) {
        int value = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (ec != std::errc() || ptr != part.data() + part.size() || value < 0) {
            throw DataError("cannot parse age bracket: " + label);
        }
        return value;
    };
    if (text.back() == '+') {
        int lo = parse_int(trim(text.substr(0, text.size() - 1)));
        return AgeBracket{lo, std::max(lo, 99)};
    }
    const auto dash = text.find('-');
    if (dash != std::string::npos) {
        int lo = parse_int(trim(text.substr(0, dash)));
        int hi = parse_int(trim(text.substr(dash + 1)));
        if (hi < lo) {
            throw DataError("inverted age bracket: " + label);
        }
        return AgeBracket{lo, hi};
    }
    int exact = parse_int(text);
    return AgeBracket{exact, exact};
}

JointDistribution load_joint_table(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open joint table: " + path.string());
    }
    std::string header_line;
    if (!std::getline(in, header_line)) {
        throw DataError(path.string() + ": empty joint table");
    }
    const char delim = header_line.find('\t') != std::string::npos ? '\t' : ',';
    std::vector<std::string> header = split(header_line, delim);
    if (header.size() < 2) {
        throw DataError(path.string() + ": header must name at least one axis plus WEIGHT");
    }
    if (header.back() != "WEIGHT") {
        throw DataError(path.string() + ": last header column must be WEIGHT, got '" +
                        header.back() + "'");
    }
    std::vector<DemographicAxis> axes;
    for (std::size_t i = 0; i + 1 < header.size(); ++i) {
        if (!is_known_axis(header[i])) {
            throw DataError(path.string() + ": unknown axis column '" + header[i] + "'");
        }
        for (const auto &axis : axes) {
            if (axis.name == header[i]) {
                throw DataError(path.string() + ": duplicate axis column '" + header[i] + "'");
            }
        }
        axes.push_back(DemographicAxis{header[i], {}});
    }

    std::map<std::vector<int>, double> cells;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        std::vector<std::string> fields = split(line, delim);
        if (fields.size() != header.size()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " columns, got " +
                            std::to_string(fields.size()));
        }
        std::vector<int> key(axes.size());
        for (std::size_t i = 0; i < axes.size(); ++i) {
            if (fields[i].empty()) {
                throw DataError(path.string() + ":" + std::to_string(line_no) +
                                ": empty category for axis " + axes[i].name);
            }
            int idx = axes[i].category_index(fields[i]);
            if (idx < 0) {
                axes[i].categories.push_back(fields[i]);
                idx = static_cast<int>(axes[i].categories.size()) - 1;
            }
            key[i] = idx;
        }
        double weight = 0.0;
        try {
            std::size_t consumed = 0;
            weight = std::stod(fields.back(), &consumed);
            if (consumed != fields.back().size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception &) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": malformed weight '" + fields.back() + "'");
        }
        if (!std::isfinite(weight) || weight < 0.0) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": negative weight");
        }
        cells[key] += weight; // duplicate tuples accumulate
    }
    if (cells.empty()) {
        throw DataError(path.string() + ": no data rows");
    }
    return JointDistribution(std::move(axes), std::move(cells));
}

std::vector<double> marginal(const JointDistribution &dist, const std::string &axis_name) {
    const int axis_idx = dist.axis_index(axis_name);
    if (axis_idx < 0) {
        throw DataError("unknown axis: " + axis_name);
    }
    std::vector<double> mass(dist.axes()[static_cast<std::size_t>(axis_idx)].categories.size(), 0.0);
    for (const auto &[key, weight] : dist.cells()) {
        mass[static_cast<std::size_t>(key[static_cast<std::size_t>(axis_idx)])] += weight;
    }
    for (double &m : mass) {
        m /= dist.total_weight();
    }
    return mass;
}

JointDistribution conditional_on_state(const JointDistribution &dist, int state_category) {
    const int state_axis = dist.axis_index(kStateAxis);
    if (state_axis < 0) {
        throw DataError("joint table has no STATE axis");
    }
    std::map<std::vector<int>, double> slice;
    for (const auto &[key, weight] : dist.cells()) {
        if (key[static_cast<std::size_t>(state_axis)] == state_category && weight > 0.0) {
            slice[key] = weight;
        }
    }
    if (slice.empty()) {
        throw DataError("state '" +
                        dist.axes()[static_cast<std::size_t>(state_axis)]
                            .categories[static_cast<std::size_t>(state_category)] +
                        "' has zero conditional mass");
    }
    return JointDistribution(dist.axes(), std::move(slice));
}

std::vector<MetaPersona> sample_meta_personas(const JointDistribution &dist, int per_state,
                                              std::uint64_t seed) {
    if (per_state < 1) {
        throw DataError("per_state must be >= 1");
    }
    for (const char *required : {kAgeAxis, kSexAxis, kRaceAxis, kStateAxis}) {
        if (dist.axis_index(required) < 0) {
            throw DataError(std::string("joint table missing axis ") + required);
        }
    }
    const std::size_t age_axis = static_cast<std::size_t>(dist.axis_index(kAgeAxis));
    const std::size_t sex_axis = static_cast<std::size_t>(dist.axis_index(kSexAxis));
    const std::size_t race_axis = static_cast<std::size_t>(dist.axis_index(kRaceAxis));
    const std::size_t state_axis = static_cast<std::size_t>(dist.axis_index(kStateAxis));
    const auto &states = dist.axes()[state_axis].categories;
    const auto &age_labels = dist.axes()[age_axis].categories;

    std::vector<AgeBracket> brackets;
    brackets.reserve(age_labels.size());
    for (const auto &label : age_labels) {
        brackets.push_back(AgeBracket::parse(label));
    }

    std::vector<MetaPersona> personas;
    personas.reserve(states.size() * static_cast<std::size_t>(per_state));
    for (std::size_t state_idx = 0; state_idx < states.size(); ++state_idx) {
        const JointDistribution slice =
            conditional_on_state(dist, static_cast<int>(state_idx));
        // Flatten the slice once; cells are already in deterministic key order.
        std::vector<const std::vector<int> *> keys;
        std::vector<double> cumulative;
        double running = 0.0;
        for (const auto &[key, weight] : slice.cells()) {
            keys.push_back(&key);
            running += weight;
            cumulative.push_back(running);
        }
        Rng rng(derive_seed(seed, state_idx));
        for (int draw = 0; draw < per_state; ++draw) {
            const std::vector<int> &key = *keys[rng.categorical_from_cumulative(cumulative)];
            const AgeBracket &bracket = brackets[static_cast<std::size_t>(key[age_axis])];
            MetaPersona p;
            p.age = static_cast<int>(rng.uniform_int(bracket.lo, bracket.hi));
            p.sex = dist.axes()[sex_axis].categories[static_cast<std::size_t>(key[sex_axis])];
            p.race = dist.axes()[race_axis].categories[static_cast<std::size_t>(key[race_axis])];
            p.state = states[state_idx];
            personas.push_back(std::move(p));
        }
    }
    return personas;
}

Json meta_to_json(const MetaPersona &meta) {
    return Json{{"AGE", meta.age}, {"SEX", meta.sex}, {"RACE", meta.race}, {"STATE", meta.state}};
}

MetaPersona meta_from_json(const Json &row) {
    for (const char *key : {"AGE", "SEX", "RACE", "STATE"}) {
        if (!row.contains(key)) {
            throw DataError(std::string("meta persona record missing key ") + key);
        }
    }
    MetaPersona meta;
    if (row.at("AGE").is_number_integer()) {
        meta.age = row.at("AGE").get<int>();
    } else if (row.at("AGE").is_string()) {
        meta.age = std::stoi(row.at("AGE").get<std::string>());
    } else {
        throw DataError("meta persona AGE must be an integer");
    }
    meta.sex = row.at("SEX").get<std::string>();
    meta.race = row.at("RACE").get<std::string>();
    meta.state = row.at("STATE").get<std::string>();
    return meta;
}

void write_meta_jsonl(const std::filesystem::path &path, const std::vector<MetaPersona> &metas) {
    std::vector<Json> rows;
    rows.reserve(metas.size());
    for (const auto &meta : metas) {
        rows.push_back(meta_to_json(meta));
    }
    write_jsonl(path, rows);
}

std::vector<MetaPersona> read_meta_jsonl(const std::filesystem::path &path) {
    std::vector<MetaPersona> metas;
    for (const auto &row : read_jsonl(path)) {
        metas.push_back(meta_from_json(row));
    }
    return metas;
}

} // namespace persim
