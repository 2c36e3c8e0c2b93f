#include "persim/persona.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include "persim/error.hpp"
#include "persim/prompt_texts.hpp"

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

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Extracts the ordered key list from a field template text. Lines look like
// "KEY": "",  and the big-five block nests one level of subkeys.
std::vector<std::string> parse_template_keys(const std::string &template_text) {
    std::vector<std::string> keys;
    std::istringstream in(template_text);
    std::string line;
    std::string open_group;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t == "}" || t == "},") {
            open_group.clear();
            continue;
        }
        const auto open = t.find('"');
        const auto close = t.find('"', open + 1);
        if (open == std::string::npos || close == std::string::npos) {
            continue;
        }
        const std::string key = t.substr(open + 1, close - open - 1);
        if (t.back() == '{') {
            open_group = key;
            continue;
        }
        keys.push_back(open_group.empty() ? key : open_group + "." + key);
    }
    return keys;
}

const std::vector<std::string> &big_five_subkeys() {
    static const std::vector<std::string> keys = {"OPENNESS", "CONSCIENTIOUSNESS", "EXTRAVERSION",
                                                  "AGREEABLENESS", "NEUROTICISM"};
    return keys;
}

bool citizenship_indicates_foreign_birth(const std::string &citizenship) {
    const std::string c = lowercase(citizenship);
    for (const char *hint : {"naturaliz", "not a citizen", "non-citizen", "noncitizen", "foreign"}) {
        if (c.find(hint) != std::string::npos) {
            return true;
        }
    }
    return false;
}

} // namespace

const char *tier_name(PersonaTier tier) {
    switch (tier) {
    case PersonaTier::Meta:
        return "META";
    case PersonaTier::ObjectiveTabular:
        return "OBJECTIVE_TABULAR";
    case PersonaTier::SubjectiveTabular:
        return "SUBJECTIVE_TABULAR";
    case PersonaTier::Descriptive:
        return "DESCRIPTIVE";
    }
    return "META";
}

std::optional<PersonaTier> tier_from_name(const std::string &name) {
    for (PersonaTier tier : all_tiers()) {
        if (name == tier_name(tier)) {
            return tier;
        }
    }
    return std::nullopt;
}

std::string tier_file_stem(PersonaTier tier) {
    return lowercase(tier_name(tier));
}

bool tier_is_tabular(PersonaTier tier) {
    return tier == PersonaTier::ObjectiveTabular || tier == PersonaTier::SubjectiveTabular;
}

const std::vector<PersonaTier> &all_tiers() {
    static const std::vector<PersonaTier> tiers = {
        PersonaTier::Meta, PersonaTier::ObjectiveTabular, PersonaTier::SubjectiveTabular,
        PersonaTier::Descriptive};
    return tiers;
}

const std::vector<std::string> &template_keys(PersonaTier tier) {
    static const std::vector<std::string> objective = parse_template_keys(kObjectiveFieldTemplate);
    static const std::vector<std::string> subjective = parse_template_keys(kSubjectiveFieldTemplate);
    if (tier == PersonaTier::ObjectiveTabular) {
        return objective;
    }
    if (tier == PersonaTier::SubjectiveTabular) {
        return subjective;
    }
    throw DataError(std::string("tier ") + tier_name(tier) + " has no field template");
}

const std::string *TabularPersona::field(const std::string &name) const {
    for (const auto &[key, value] : fields) {
        if (key == name) {
            return &value;
        }
    }
    return nullptr;
}

PersonaTier persona_tier(const Persona &persona) {
    if (std::holds_alternative<MetaPersona>(persona)) {
        return PersonaTier::Meta;
    }
    if (const auto *tabular = std::get_if<TabularPersona>(&persona)) {
        return tabular->tier;
    }
    return PersonaTier::Descriptive;
}

const MetaPersona &persona_meta(const Persona &persona) {
    if (const auto *meta = std::get_if<MetaPersona>(&persona)) {
        return *meta;
    }
    if (const auto *tabular = std::get_if<TabularPersona>(&persona)) {
        return tabular->meta;
    }
    return std::get<DescriptivePersona>(persona).meta;
}

std::optional<std::int64_t> parse_income_value(const std::string &text) {
    std::string cleaned = trim(text);
    const std::string lowered = lowercase(cleaned);
    if (lowered.size() >= 8 && lowered.rfind("annually") == lowered.size() - 8) {
        cleaned = trim(cleaned.substr(0, cleaned.size() - 8));
    }
    std::string digits;
    for (std::size_t i = 0; i < cleaned.size(); ++i) {
        const char c = cleaned[i];
        if (c == '$' && digits.empty()) {
            continue;
        }
        if (c == ',' && !digits.empty()) {
            continue; // thousands separator
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            continue;
        }
        return std::nullopt;
    }
    if (digits.empty() || digits.size() > 18) {
        return std::nullopt;
    }
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        return std::nullopt;
    }
    return value;
}

std::optional<double> big_five_numeric(const std::string &value) {
    const std::string v = trim(value);
    if (v == "Low") {
        return 25.0;
    }
    if (v == "Medium") {
        return 50.0;
    }
    if (v == "High") {
        return 75.0;
    }
    try {
        std::size_t consumed = 0;
        const double parsed = std::stod(v, &consumed);
        if (consumed == v.size() && parsed >= 0.0 && parsed <= 100.0) {
            return parsed;
        }
    } catch (const std::exception &) {
    }
    return std::nullopt;
}

ValidationReport validate_tabular(const TabularPersona &persona, const ValueCatalog &catalog) {
    ValidationReport report;
    auto flag = [&report](const std::string &field, const std::string &value,
                          const std::string &reason) {
        report.violations.push_back(Violation{field, value, reason});
    };

    const std::vector<std::string> &keys = template_keys(persona.tier);
    const std::set<std::string> key_set(keys.begin(), keys.end());

    for (const auto &key : keys) {
        if (persona.field(key) == nullptr) {
            flag(key, "", "missing required field");
        }
    }
    for (const auto &[key, value] : persona.fields) {
        if (!key_set.contains(key)) {
            flag(key, value, "not a template field");
        }
    }

    const std::string *industry = persona.field("INDUSTRY_CATEGORY");
    for (const auto &[key, value] : persona.fields) {
        if (!key_set.contains(key)) {
            continue;
        }
        if (key == "AGE") {
            if (value != std::to_string(persona.meta.age)) {
                flag(key, value, "does not match source metadata AGE " +
                                     std::to_string(persona.meta.age));
            }
        } else if (key == "SEX" || key == "RACE" || key == "STATE") {
            const std::string &expected = key == "SEX"    ? persona.meta.sex
                                          : key == "RACE" ? persona.meta.race
                                                          : persona.meta.state;
            if (value != expected) {
                flag(key, value, "does not match source metadata " + key + " '" + expected + "'");
            }
        } else if (key == "INCOME") {
            const auto income = parse_income_value(value);
            if (!income) {
                flag(key, value, "not an integer dollar amount");
            } else if (*income < catalog.income_min() || *income > catalog.income_max()) {
                flag(key, value, "outside allowed range $" + std::to_string(catalog.income_min()) +
                                     "-$" + std::to_string(catalog.income_max()));
            }
        } else if (key == "OCCUPATION_CATEGORY") {
            if (industry != nullptr && catalog.occupations_for(*industry) != nullptr) {
                const auto *allowed = catalog.occupations_for(*industry);
                if (std::find(allowed->begin(), allowed->end(), value) == allowed->end()) {
                    flag(key, value, "not an occupation under industry '" + *industry + "'");
                }
            } else if (!catalog.occupation_exists(value)) {
                flag(key, value, "not a known occupation category");
            }
        } else if (key == "PLACE_OF_BIRTH") {
            const auto &states = us_state_names();
            const bool is_state =
                std::find(states.begin(), states.end(), value) != states.end();
            const auto &literals = catalog.values("PLACE_OF_BIRTH");
            const bool is_literal =
                std::find(literals.begin(), literals.end(), value) != literals.end();
            const std::string *citizenship = persona.field("CITIZENSHIP");
            const bool foreign_ok = citizenship != nullptr &&
                                    citizenship_indicates_foreign_birth(*citizenship) &&
                                    !trim(value).empty();
            if (!is_state && !is_literal && !foreign_ok) {
                flag(key, value, "not a US state and citizenship does not indicate foreign birth");
            }
        } else if (key.rfind(kBigFivePrefix, 0) == 0) {
            if (!big_five_numeric(value)) {
                flag(key, value, "not a 0-100 score or Low/Medium/High");
            }
        } else if (catalog.has_list(key)) {
            const auto &allowed = catalog.values(key);
            if (std::find(allowed.begin(), allowed.end(), value) == allowed.end()) {
                flag(key, value, "not in catalog");
            }
        } else if (trim(value).empty()) {
            flag(key, value, "empty value");
        }
    }

    report.valid = report.violations.empty();
    return report;
}

namespace {

Json fields_to_json(const std::vector<std::pair<std::string, std::string>> &fields) {
    Json obj = Json::object();
    Json big_five = Json::object();
    bool big_five_emitted = false;
    for (const auto &[key, value] : fields) {
        if (key.rfind(kBigFivePrefix, 0) == 0) {
            big_five[key.substr(std::string(kBigFivePrefix).size())] = value;
            if (!big_five_emitted) {
                obj["BIG_FIVE_SCORES"] = Json::object();
                big_five_emitted = true;
            }
        } else {
            obj[key] = value;
        }
    }
    if (big_five_emitted) {
        obj["BIG_FIVE_SCORES"] = big_five;
    }
    return obj;
}

std::vector<std::pair<std::string, std::string>> fields_from_json(const Json &obj) {
    std::vector<std::pair<std::string, std::string>> fields;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (it.value().is_object()) {
            for (auto sub = it.value().begin(); sub != it.value().end(); ++sub) {
                fields.emplace_back(it.key() + "." + sub.key(),
                                    sub.value().is_string() ? sub.value().get<std::string>()
                                                            : sub.value().dump());
            }
        } else {
            fields.emplace_back(it.key(), it.value().is_string() ? it.value().get<std::string>()
                                                                 : it.value().dump());
        }
    }
    return fields;
}

} // namespace

Json persona_to_record(const Persona &persona) {
    Json record = Json::object();
    record["tier"] = tier_name(persona_tier(persona));
    record["meta"] = meta_to_json(persona_meta(persona));
    if (const auto *tabular = std::get_if<TabularPersona>(&persona)) {
        record["fields"] = fields_to_json(tabular->fields);
    } else if (const auto *descriptive = std::get_if<DescriptivePersona>(&persona)) {
        record["narrative"] = descriptive->narrative;
    }
    return record;
}

Persona record_to_persona(const Json &record) {
    if (!record.contains("tier") || !record.at("tier").is_string()) {
        throw DataError("persona record has no tier tag");
    }
    const std::string tag = record.at("tier").get<std::string>();
    const auto tier = tier_from_name(tag);
    if (!tier) {
        throw DataError("unknown persona tier tag '" + tag + "'");
    }
    if (!record.contains("meta")) {
        throw DataError("persona record missing meta");
    }
    const MetaPersona meta = meta_from_json(record.at("meta"));

    if (*tier == PersonaTier::Meta) {
        return meta;
    }
    if (*tier == PersonaTier::Descriptive) {
        if (!record.contains("narrative") || !record.at("narrative").is_string()) {
            throw DataError("descriptive persona record missing narrative");
        }
        DescriptivePersona persona{record.at("narrative").get<std::string>(), meta};
        if (trim(persona.narrative).empty()) {
            throw DataError("descriptive persona narrative is empty");
        }
        return persona;
    }

    if (!record.contains("fields") || !record.at("fields").is_object()) {
        throw DataError("tabular persona record missing fields");
    }
    TabularPersona persona;
    persona.tier = *tier;
    persona.meta = meta;
    persona.fields = fields_from_json(record.at("fields"));
    for (const auto &key : template_keys(*tier)) {
        if (persona.field(key) == nullptr) {
            throw DataError("tabular persona record missing field " + key);
        }
    }
    return persona;
}

void write_persona_jsonl(const std::filesystem::path &path, const std::vector<Persona> &personas) {
    std::vector<Json> rows;
    rows.reserve(personas.size());
    for (const auto &persona : personas) {
        rows.push_back(persona_to_record(persona));
    }
    write_jsonl(path, rows);
}

std::vector<Persona> read_persona_jsonl(const std::filesystem::path &path) {
    std::vector<Persona> personas;
    for (const auto &row : read_jsonl(path)) {
        personas.push_back(record_to_persona(row));
    }
    return personas;
}

} // namespace persim
