#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "persim/catalog.hpp"
#include "persim/joint_table.hpp"

namespace persim {

// Ordered by how much of the persona is model-generated content.
enum class PersonaTier {
    Meta = 0,
    ObjectiveTabular = 1,
    SubjectiveTabular = 2,
    Descriptive = 3,
};

inline constexpr int kTierCount = 4;

const char *tier_name(PersonaTier tier); // "META", "OBJECTIVE_TABULAR", ...
std::optional<PersonaTier> tier_from_name(const std::string &name);
std::string tier_file_stem(PersonaTier tier); // lowercase, e.g. "objective_tabular"
bool tier_is_tabular(PersonaTier tier);
const std::vector<PersonaTier> &all_tiers();

// Template keys for the tabular tiers, in template order. Nested big-five
// subkeys are flattened as "BIG_FIVE_SCORES.<SUBKEY>".
const std::vector<std::string> &template_keys(PersonaTier tier);
inline constexpr const char *kBigFivePrefix = "BIG_FIVE_SCORES.";

// A filled key-value persona template plus the meta persona it extends.
struct TabularPersona {
    PersonaTier tier = PersonaTier::ObjectiveTabular;
    std::vector<std::pair<std::string, std::string>> fields; // template order
    MetaPersona meta;

    const std::string *field(const std::string &name) const;
    bool operator==(const TabularPersona &) const = default;
};

struct DescriptivePersona {
    std::string narrative;
    MetaPersona meta;

    bool operator==(const DescriptivePersona &) const = default;
};

using Persona = std::variant<MetaPersona, TabularPersona, DescriptivePersona>;

PersonaTier persona_tier(const Persona &persona);
const MetaPersona &persona_meta(const Persona &persona);

struct Violation {
    std::string field;
    std::string value;
    std::string reason;
};

struct ValidationReport {
    bool valid = true;
    std::vector<Violation> violations;
};

// Checks every catalog-constrained field by exact string match, the
// occupation/industry nesting, the INCOME range, PLACE_OF_BIRTH plausibility,
// and agreement with the source meta persona. Free-text fields are only
// required to be non-empty. All failures are reported, not just the first.
ValidationReport validate_tabular(const TabularPersona &persona, const ValueCatalog &catalog);

// Accepts "$52,000", "52,000 annually", "52000"; fails on anything that is
// not an integer dollar amount.
std::optional<std::int64_t> parse_income_value(const std::string &text);

// Big-five entries may be numeric 0-100 or one of Low/Medium/High; the
// qualitative labels map to 25/50/75 for analytics.
std::optional<double> big_five_numeric(const std::string &value);

// JSONL record form. Tabular: {"tier","meta","fields"}; descriptive:
// {"tier","meta","narrative"}; meta: {"tier","meta"}. Unknown top-level keys
// are ignored so externally produced dataset files load cleanly.
Json persona_to_record(const Persona &persona);
Persona record_to_persona(const Json &record);

void write_persona_jsonl(const std::filesystem::path &path, const std::vector<Persona> &personas);
std::vector<Persona> read_persona_jsonl(const std::filesystem::path &path);

} // namespace persim
