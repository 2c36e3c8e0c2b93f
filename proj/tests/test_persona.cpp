#include <doctest.h>

#include <algorithm>
#include <string>

#include "persim/error.hpp"
#include "persim/persona.hpp"

#include "persona_fixtures.hpp"
#include "test_util.hpp"

using namespace persim;
using testfix::make_descriptive;
using testfix::make_meta;
using testfix::make_objective;
using testfix::make_subjective;

namespace {

// Replace one field's value in place; the key must exist.
void set_field(TabularPersona &p, const std::string &key, const std::string &value) {
    for (auto &[k, v] : p.fields) {
        if (k == key) {
            v = value;
            return;
        }
    }
    FAIL("fixture persona has no field ", key);
}

void drop_field(TabularPersona &p, const std::string &key) {
    p.fields.erase(std::remove_if(p.fields.begin(), p.fields.end(),
                                  [&](const auto &f) { return f.first == key; }),
                   p.fields.end());
}

bool flags_field(const ValidationReport &report, const std::string &field) {
    return std::any_of(report.violations.begin(), report.violations.end(),
                       [&](const Violation &v) { return v.field == field; });
}

const ValueCatalog &cat() { return ValueCatalog::builtin(); }

} // namespace

TEST_CASE("tier names round-trip and order by generated content") {
    CHECK(std::string(tier_name(PersonaTier::Meta)) == "META");
    CHECK(std::string(tier_name(PersonaTier::ObjectiveTabular)) == "OBJECTIVE_TABULAR");
    CHECK(std::string(tier_name(PersonaTier::SubjectiveTabular)) == "SUBJECTIVE_TABULAR");
    CHECK(std::string(tier_name(PersonaTier::Descriptive)) == "DESCRIPTIVE");
    for (PersonaTier tier : all_tiers()) {
        CHECK(tier_from_name(tier_name(tier)) == tier);
    }
    CHECK_FALSE(tier_from_name("FULL_NARRATIVE").has_value());
    CHECK(tier_file_stem(PersonaTier::SubjectiveTabular) == "subjective_tabular");
    CHECK(all_tiers().size() == kTierCount);
    CHECK_FALSE(tier_is_tabular(PersonaTier::Meta));
    CHECK(tier_is_tabular(PersonaTier::ObjectiveTabular));
    CHECK(tier_is_tabular(PersonaTier::SubjectiveTabular));
    CHECK_FALSE(tier_is_tabular(PersonaTier::Descriptive));
}

TEST_CASE("template key lists carry 20 and 38 keys in template order") {
    const auto &objective = template_keys(PersonaTier::ObjectiveTabular);
    REQUIRE(objective.size() == 20);
    CHECK(objective.front() == "AGE");
    CHECK(objective[9] == "INDUSTRY_CATEGORY");
    CHECK(objective[10] == "OCCUPATION_CATEGORY");
    CHECK(objective.back() == "HEALTH_INSURANCE");
    CHECK(std::find(objective.begin(), objective.end(), "DETAILED_JOB_DESCRIPTION") ==
          objective.end());

    const auto &subjective = template_keys(PersonaTier::SubjectiveTabular);
    REQUIRE(subjective.size() == 38);
    // The subjective template starts with the objective keys plus the job
    // description slotted after OCCUPATION_CATEGORY.
    CHECK(subjective[11] == "DETAILED_JOB_DESCRIPTION");
    CHECK(subjective[21] == "BIG_FIVE_SCORES.OPENNESS");
    CHECK(subjective[25] == "BIG_FIVE_SCORES.NEUROTICISM");
    CHECK(subjective.back() == "HEARING_DIFFICULTY");
    for (const auto &key : objective) {
        CHECK(std::find(subjective.begin(), subjective.end(), key) != subjective.end());
    }
}

TEST_CASE("persona_tier and persona_meta see through the variant") {
    const MetaPersona meta = make_meta();
    CHECK(persona_tier(Persona{meta}) == PersonaTier::Meta);
    CHECK(persona_tier(Persona{make_objective()}) == PersonaTier::ObjectiveTabular);
    CHECK(persona_tier(Persona{make_subjective()}) == PersonaTier::SubjectiveTabular);
    CHECK(persona_tier(Persona{make_descriptive()}) == PersonaTier::Descriptive);
    CHECK(persona_meta(Persona{make_descriptive()}) == meta);
    CHECK(persona_meta(Persona{make_objective()}) == meta);
}

TEST_CASE("the fixture personas validate cleanly") {
    const auto objective_report = validate_tabular(make_objective(), cat());
    CHECK(objective_report.valid);
    CHECK(objective_report.violations.empty());
    const auto subjective_report = validate_tabular(make_subjective(), cat());
    CHECK(subjective_report.valid);
    CHECK(subjective_report.violations.empty());
}

TEST_CASE("every corrupted field is flagged by name") {
    struct Mutation {
        const char *field;
        const char *value;
    };
    const Mutation mutations[] = {
        {"AGE", "35"},                          // disagrees with metadata
        {"SEX", "Female"},                      // disagrees with metadata
        {"RACE", "Black"},                      // disagrees with metadata
        {"STATE", "Georgia"},                   // disagrees with metadata
        {"ANCESTRY", "Martian"},                // not in catalog
        {"HOUSEHOLD_LANGUAGE", "Klingon"},      // not in catalog
        {"EDUCATION", "PhD"},                   // catalog spells it Graduate Degree
        {"EMPLOYMENT_STATUS", "Retired"},       // not in catalog
        {"CLASS_OF_WORKER", "Freelancer"},      // not in catalog
        {"INDUSTRY_CATEGORY", "Tech"},          // not in catalog
        {"OCCUPATION_CATEGORY", "Wizard"},      // not an occupation anywhere
        {"INCOME", "lots"},                     // not a dollar amount
        {"MARITAL_STATUS", "Single"},           // catalog spells it Never Married
        {"HOUSEHOLD_TYPE", "Commune"},          // not in catalog
        {"FAMILY_PRESENCE_AND_AGE", "  "},      // free text must be non-empty
        {"PLACE_OF_BIRTH", "Atlantis"},         // not a state, citizenship is domestic
        {"CITIZENSHIP", ""},                    // free text must be non-empty
        {"VETERAN_STATUS", "Draft dodger"},     // not in catalog
        {"DISABILITY", "Unknown"},              // not in catalog
        {"HEALTH_INSURANCE", "Employer"},       // catalog spells it Private
    };
    for (const auto &mutation : mutations) {
        CAPTURE(mutation.field);
        TabularPersona p = make_objective();
        set_field(p, mutation.field, mutation.value);
        const ValidationReport report = validate_tabular(p, cat());
        CHECK_FALSE(report.valid);
        CHECK(flags_field(report, mutation.field));
    }
}

TEST_CASE("missing and extra fields are both violations") {
    TabularPersona p = make_objective();
    drop_field(p, "EDUCATION");
    p.fields.emplace_back("FAVORITE_COLOR", "blue");
    const ValidationReport report = validate_tabular(p, cat());
    CHECK_FALSE(report.valid);
    CHECK(flags_field(report, "EDUCATION"));      // missing required field
    CHECK(flags_field(report, "FAVORITE_COLOR")); // not a template field
    CHECK(report.violations.size() == 2);         // all failures reported together
}

TEST_CASE("occupation must nest under the declared industry") {
    TabularPersona p = make_objective();
    // Valid occupation, wrong industry: it lives under Service occupations.
    set_field(p, "INDUSTRY_CATEGORY", "Sales and office occupations");
    const ValidationReport report = validate_tabular(p, cat());
    CHECK_FALSE(report.valid);
    CHECK(flags_field(report, "OCCUPATION_CATEGORY"));
}

TEST_CASE("income bounds are inclusive at 0 and 1,000,000") {
    for (const char *ok : {"0", "1000000", "$52,000", "52,000 annually", "$1,000,000 annually"}) {
        TabularPersona p = make_objective();
        set_field(p, "INCOME", ok);
        CAPTURE(ok);
        CHECK(validate_tabular(p, cat()).valid);
    }
    for (const char *bad : {"1000001", "-1", "52000.50", "about 52000"}) {
        TabularPersona p = make_objective();
        set_field(p, "INCOME", bad);
        CAPTURE(bad);
        const ValidationReport report = validate_tabular(p, cat());
        CHECK_FALSE(report.valid);
        CHECK(flags_field(report, "INCOME"));
    }
}

TEST_CASE("parse_income_value accepts dollar formatting only") {
    CHECK(parse_income_value("52000") == 52000);
    CHECK(parse_income_value("$52,000") == 52000);
    CHECK(parse_income_value("52,000 annually") == 52000);
    CHECK(parse_income_value(" $1,000,000 ") == 1000000);
    CHECK(parse_income_value("0") == 0);
    CHECK_FALSE(parse_income_value("").has_value());
    CHECK_FALSE(parse_income_value("52k").has_value());
    CHECK_FALSE(parse_income_value("52000.75").has_value());
    CHECK_FALSE(parse_income_value("-5").has_value());
    CHECK_FALSE(parse_income_value(",52").has_value()); // separator before any digit
}

TEST_CASE("foreign birthplace is allowed when citizenship says so") {
    TabularPersona p = make_objective();
    set_field(p, "PLACE_OF_BIRTH", "Ireland");
    set_field(p, "CITIZENSHIP", "Naturalized citizen");
    CHECK(validate_tabular(p, cat()).valid);

    set_field(p, "PLACE_OF_BIRTH", "Foreign Country"); // catalog literal works too
    set_field(p, "CITIZENSHIP", "Born in the United States");
    CHECK(validate_tabular(p, cat()).valid);
}

TEST_CASE("big-five scores take numbers or the three qualitative labels") {
    CHECK(big_five_numeric("72") == doctest::Approx(72.0));
    CHECK(big_five_numeric("0") == doctest::Approx(0.0));
    CHECK(big_five_numeric("100") == doctest::Approx(100.0));
    CHECK(big_five_numeric("Low") == doctest::Approx(25.0));
    CHECK(big_five_numeric("Medium") == doctest::Approx(50.0));
    CHECK(big_five_numeric("High") == doctest::Approx(75.0));
    CHECK_FALSE(big_five_numeric("101").has_value());
    CHECK_FALSE(big_five_numeric("-1").has_value());
    CHECK_FALSE(big_five_numeric("very high").has_value());

    TabularPersona p = make_subjective();
    set_field(p, "BIG_FIVE_SCORES.OPENNESS", "105");
    const ValidationReport report = validate_tabular(p, cat());
    CHECK_FALSE(report.valid);
    CHECK(flags_field(report, "BIG_FIVE_SCORES.OPENNESS"));
}

TEST_CASE("personas of every tier round-trip through their record form") {
    const std::vector<Persona> personas = {Persona{make_meta()}, Persona{make_objective()},
                                           Persona{make_subjective()}, Persona{make_descriptive()}};
    for (const Persona &p : personas) {
        const Json record = persona_to_record(p);
        CHECK(record_to_persona(record) == p);
    }
}

TEST_CASE("tabular records nest the big-five block as an object") {
    const Json record = persona_to_record(Persona{make_subjective()});
    REQUIRE(record.contains("fields"));
    REQUIRE(record.at("fields").contains("BIG_FIVE_SCORES"));
    CHECK(record.at("fields").at("BIG_FIVE_SCORES").is_object());
    CHECK(record.at("fields").at("BIG_FIVE_SCORES").at("OPENNESS") == "72");
    CHECK_FALSE(record.at("fields").contains("BIG_FIVE_SCORES.OPENNESS"));
}

TEST_CASE("malformed persona records are rejected") {
    CHECK_THROWS_AS((void)record_to_persona(Json{{"meta", Json::object()}}), DataError);
    CHECK_THROWS_AS(
        (void)record_to_persona(Json{{"tier", "NOT_A_TIER"}, {"meta", meta_to_json(make_meta())}}),
        DataError);
    CHECK_THROWS_AS(
        (void)record_to_persona(Json{{"tier", "DESCRIPTIVE"}, {"meta", meta_to_json(make_meta())}}),
        DataError); // descriptive record without a narrative
    CHECK_THROWS_AS(
        (void)record_to_persona(Json{{"tier", "OBJECTIVE_TABULAR"}, {"meta", meta_to_json(make_meta())}}),
        DataError); // tabular record without fields
}

TEST_CASE("unknown top-level record keys are ignored for interchange") {
    Json record = persona_to_record(Persona{make_descriptive()});
    record["source"] = "external-tool";
    record["schema_version"] = 9;
    CHECK(record_to_persona(record) == Persona{make_descriptive()});
}

TEST_CASE("persona JSONL files round-trip") {
    testutil::TempDir tmp;
    const std::vector<Persona> personas = {Persona{make_objective()}, Persona{make_subjective()},
                                           Persona{make_descriptive()}};
    const auto path = tmp / "personas.jsonl";
    write_persona_jsonl(path, personas);
    CHECK(read_persona_jsonl(path) == personas);
}
