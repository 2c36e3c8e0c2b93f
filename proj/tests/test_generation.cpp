#include <doctest.h>

#include <string>
#include <vector>

#include "persim/backend.hpp"
#include "persim/error.hpp"
#include "persim/generation.hpp"
#include "persim/prompts.hpp"

#include "persona_fixtures.hpp"

using namespace persim;
using testfix::make_meta;
using testfix::make_objective;
using testfix::make_subjective;

namespace {

// Render a tabular persona as the line-oriented response form the templates
// ask for. Only safe for tiers without nested keys (the objective tier).
std::string line_form_response(const TabularPersona &persona,
                               const std::string &prelude = "Persona:\n") {
    std::string out = prelude;
    for (std::size_t i = 0; i < persona.fields.size(); ++i) {
        out += '"' + persona.fields[i].first + "\": \"" + persona.fields[i].second + '"';
        if (i + 1 < persona.fields.size()) {
            out += ',';
        }
        out += '\n';
    }
    return out;
}

// JSON-object response form, with the big-five block nested.
std::string json_form_response(const TabularPersona &persona) {
    const Json fields = persona_to_record(Persona{persona}).at("fields");
    return "Persona:\n```json\n" + fields.dump(2) + "\n```\n";
}

ScriptedMockBackend make_mock(std::vector<Json> script) {
    return ScriptedMockBackend(BackendIdentity{"mock-gen", "test-model"}, std::move(script));
}

Json content_row(const std::string &text) { return Json{{"content", text}}; }

} // namespace

TEST_CASE("line-oriented tabular responses parse into template order") {
    const TabularPersona expected = make_objective();
    const Persona parsed = parse_persona_response(line_form_response(expected),
                                                  PersonaTier::ObjectiveTabular, make_meta());
    CHECK(std::get<TabularPersona>(parsed) == expected);
}

TEST_CASE("JSON object responses parse, including the nested big-five block") {
    const TabularPersona expected = make_subjective();
    const Persona parsed = parse_persona_response(json_form_response(expected),
                                                  PersonaTier::SubjectiveTabular, make_meta());
    CHECK(std::get<TabularPersona>(parsed) == expected);
}

TEST_CASE("JSON numbers and lowercase keys are normalized to template form") {
    const std::string response = R"(Persona: {"age": 34, "SEX": "Male", "RACE": "White", "STATE": "Florida"})";
    // Only four fields: assembly fails on the missing ones, but the message
    // proves the key normalization ran (AGE is not among the missing keys).
    CHECK_THROWS_WITH_AS((void)parse_persona_response(response, PersonaTier::ObjectiveTabular,
                                                      make_meta()),
                         doctest::Contains("missing required template fields: ANCESTRY"),
                         ResponseParseError);
}

TEST_CASE("the marker is found case-insensitively and the first one wins") {
    const TabularPersona expected = make_objective();
    SUBCASE("uppercase marker") {
        const Persona parsed = parse_persona_response(
            line_form_response(expected, "PERSONA:\n"), PersonaTier::ObjectiveTabular, make_meta());
        CHECK(std::get<TabularPersona>(parsed) == expected);
    }
    SUBCASE("marker with space before the colon") {
        const Persona parsed = parse_persona_response(
            line_form_response(expected, "Here is the persona :\n"),
            PersonaTier::ObjectiveTabular, make_meta());
        CHECK(std::get<TabularPersona>(parsed) == expected);
    }
    SUBCASE("a second marker later in the text belongs to the content") {
        const std::string text = "Persona:\nA nurse who tells people: persona: matters.\n";
        const Persona parsed = parse_persona_response(text, PersonaTier::Descriptive, make_meta());
        CHECK(std::get<DescriptivePersona>(parsed).narrative ==
              "A nurse who tells people: persona: matters.");
    }
}

TEST_CASE("markdown fences are stripped before parsing") {
    const TabularPersona expected = make_objective();
    const std::string fenced = "```\nPersona:\n```json\n" +
                               line_form_response(expected, "") + "```\n";
    const Persona parsed =
        parse_persona_response(fenced, PersonaTier::ObjectiveTabular, make_meta());
    CHECK(std::get<TabularPersona>(parsed) == expected);
}

TEST_CASE("descriptive responses keep everything after the marker, trimmed") {
    const Persona parsed = parse_persona_response(
        "Sure, here you go.\n\nPersona:\n  A retired teacher from Ohio.\n\n",
        PersonaTier::Descriptive, make_meta());
    CHECK(std::get<DescriptivePersona>(parsed).narrative == "A retired teacher from Ohio.");
    CHECK(std::get<DescriptivePersona>(parsed).meta == make_meta());
}

TEST_CASE("unparseable responses raise recoverable parse errors") {
    CHECK_THROWS_WITH_AS((void)parse_persona_response("I cannot help with that.",
                                                      PersonaTier::Descriptive, make_meta()),
                         doctest::Contains("no 'Persona:' marker"), ResponseParseError);
    CHECK_THROWS_WITH_AS((void)parse_persona_response("Persona:\n \n", PersonaTier::Descriptive,
                                                      make_meta()),
                         doctest::Contains("empty after the marker"), ResponseParseError);
    CHECK_THROWS_WITH_AS((void)parse_persona_response("Persona:\njust prose, no fields",
                                                      PersonaTier::ObjectiveTabular, make_meta()),
                         doctest::Contains("no template fields"), ResponseParseError);
    CHECK_THROWS_AS((void)parse_persona_response("Persona:\nx", PersonaTier::Meta, make_meta()),
                    ConfigError);
}

TEST_CASE("missing template keys are listed by name") {
    TabularPersona partial = make_objective();
    partial.fields.resize(18); // drop DISABILITY and HEALTH_INSURANCE
    try {
        (void)parse_persona_response(line_form_response(partial), PersonaTier::ObjectiveTabular,
                                     make_meta());
        FAIL("expected ResponseParseError");
    } catch (const ResponseParseError &err) {
        const std::string what = err.what();
        CHECK(what.find("DISABILITY") != std::string::npos);
        CHECK(what.find("HEALTH_INSURANCE") != std::string::npos);
        CHECK(what.find("ANCESTRY") == std::string::npos);
    }
}

TEST_CASE("extra keys survive parsing, appended after the template keys") {
    TabularPersona with_extra = make_objective();
    with_extra.fields.emplace_back("FAVORITE_COLOR", "blue");
    const Persona parsed = parse_persona_response(line_form_response(with_extra),
                                                  PersonaTier::ObjectiveTabular, make_meta());
    const auto &fields = std::get<TabularPersona>(parsed).fields;
    REQUIRE(fields.size() == 21);
    CHECK(fields.back().first == "FAVORITE_COLOR");
    CHECK(fields.back().second == "blue");
}

TEST_CASE("generation succeeds first try on a clean script") {
    const std::vector<MetaPersona> metas(3, make_meta());
    std::vector<Json> script(3, content_row(line_form_response(make_objective())));
    auto backend = make_mock(script);
    const GenerationResult result = generate_personas(metas, PersonaTier::ObjectiveTabular,
                                                      backend, ValueCatalog::builtin(),
                                                      GenerationOptions{});
    CHECK(result.failure_count == 0);
    REQUIRE(result.outcomes.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto &outcome = result.outcomes[i];
        CHECK(outcome.meta_index == i);
        REQUIRE(outcome.attempts.size() == 1);
        CHECK(outcome.attempts[0].accepted);
        REQUIRE(outcome.persona.has_value());
        CHECK(std::get<TabularPersona>(*outcome.persona) == make_objective());
    }
    // The engine sends the canonical prompts with the diversity-seeking
    // generation decoding defaults.
    REQUIRE(backend.calls().size() == 3);
    CHECK(backend.calls()[0].system_text == generation_system_text());
    CHECK(backend.calls()[0].user_text ==
          render_generation_prompt(PersonaTier::ObjectiveTabular, make_meta()));
    CHECK(backend.calls()[0].params.temperature == doctest::Approx(1.0));
    CHECK(backend.calls()[0].params.max_tokens == 1024);
}

TEST_CASE("a catalog-invalid objective persona is retried until a valid one lands") {
    TabularPersona bad = make_objective();
    for (auto &[key, value] : bad.fields) {
        if (key == "ANCESTRY") {
            value = "Martian";
        }
    }
    const std::vector<MetaPersona> metas(1, make_meta());
    auto backend = make_mock({content_row(line_form_response(bad)),
                              content_row(line_form_response(make_objective()))});
    const GenerationResult result = generate_personas(metas, PersonaTier::ObjectiveTabular,
                                                      backend, ValueCatalog::builtin(),
                                                      GenerationOptions{});
    CHECK(result.failure_count == 0);
    REQUIRE(result.outcomes.size() == 1);
    const auto &outcome = result.outcomes[0];
    REQUIRE(outcome.attempts.size() == 2);
    CHECK_FALSE(outcome.attempts[0].accepted);
    CHECK(outcome.attempts[0].error == "catalog validation failed");
    REQUIRE(outcome.attempts[0].violations.size() == 1);
    CHECK(outcome.attempts[0].violations[0].field == "ANCESTRY");
    CHECK(outcome.attempts[1].accepted);
    REQUIRE(outcome.persona.has_value());
}

TEST_CASE("the subjective tier accepts any parseable persona without catalog gating") {
    TabularPersona off_catalog = make_subjective();
    for (auto &[key, value] : off_catalog.fields) {
        if (key == "ANCESTRY") {
            value = "Martian";
        }
    }
    const std::vector<MetaPersona> metas(1, make_meta());
    auto backend = make_mock({content_row(json_form_response(off_catalog))});
    const GenerationResult result = generate_personas(metas, PersonaTier::SubjectiveTabular,
                                                      backend, ValueCatalog::builtin(),
                                                      GenerationOptions{});
    CHECK(result.failure_count == 0);
    REQUIRE(result.outcomes[0].persona.has_value());
    CHECK(std::get<TabularPersona>(*result.outcomes[0].persona) == off_catalog);
}

TEST_CASE("a persona that never parses exhausts its attempts and becomes a failure") {
    const std::vector<MetaPersona> metas(1, make_meta());
    std::vector<Json> script(3, content_row("I refuse."));
    auto backend = make_mock(script);
    GenerationOptions options;
    options.retry_limit = 3;
    const GenerationResult result = generate_personas(metas, PersonaTier::Descriptive, backend,
                                                      ValueCatalog::builtin(), options);
    CHECK(result.failure_count == 1);
    REQUIRE(result.outcomes.size() == 1);
    const auto &outcome = result.outcomes[0];
    CHECK_FALSE(outcome.persona.has_value());
    REQUIRE(outcome.attempts.size() == 3); // the limit counts total attempts
    for (const auto &attempt : outcome.attempts) {
        CHECK_FALSE(attempt.accepted);
        CHECK(attempt.error.find("no 'Persona:' marker") != std::string::npos);
    }
    CHECK(backend.consumed() == 3);
}

TEST_CASE("transport errors consume an attempt and are retried") {
    const std::vector<MetaPersona> metas(1, make_meta());
    auto backend = make_mock({Json{{"error", "connection reset"}},
                              content_row("Persona: A calm librarian from Maine.")});
    const GenerationResult result = generate_personas(metas, PersonaTier::Descriptive, backend,
                                                      ValueCatalog::builtin(),
                                                      GenerationOptions{});
    CHECK(result.failure_count == 0);
    const auto &outcome = result.outcomes[0];
    REQUIRE(outcome.attempts.size() == 2);
    CHECK(outcome.attempts[0].error.find("connection reset") != std::string::npos);
    CHECK(outcome.attempts[0].raw_response.empty());
    CHECK(outcome.attempts[1].accepted);
}

TEST_CASE("outcome cardinality: every meta ends as a success or a failure") {
    const std::vector<MetaPersona> metas(4, make_meta());
    auto backend = make_mock({
        content_row("Persona: Narrative one."),
        content_row("no marker"), content_row("no marker"), content_row("no marker"),
        content_row("Persona: Narrative three."),
        content_row("Persona: Narrative four."),
    });
    const GenerationResult result = generate_personas(metas, PersonaTier::Descriptive, backend,
                                                      ValueCatalog::builtin(),
                                                      GenerationOptions{});
    REQUIRE(result.outcomes.size() == metas.size());
    std::size_t successes = 0;
    for (const auto &outcome : result.outcomes) {
        successes += outcome.persona.has_value() ? 1 : 0;
    }
    CHECK(successes == 3);
    CHECK(result.failure_count == 1);
    CHECK(successes + result.failure_count == metas.size());
}

TEST_CASE("the observer sees every outcome exactly once") {
    const std::vector<MetaPersona> metas(5, make_meta());
    std::vector<Json> script(5, content_row("Persona: Short narrative."));
    auto backend = make_mock(script);
    std::vector<std::size_t> seen;
    const GenerationResult result = generate_personas(
        metas, PersonaTier::Descriptive, backend, ValueCatalog::builtin(), GenerationOptions{},
        [&](const GenerationOutcome &outcome) { seen.push_back(outcome.meta_index); });
    CHECK(result.failure_count == 0);
    CHECK(seen == std::vector<std::size_t>{0, 1, 2, 3, 4}); // concurrency 1: input order
}

TEST_CASE("concurrent generation preserves input order in the result") {
    const std::vector<MetaPersona> metas(12, make_meta());
    std::vector<Json> script(12, content_row("Persona: Short narrative."));
    auto backend = make_mock(script);
    GenerationOptions options;
    options.concurrency = 4;
    const GenerationResult result = generate_personas(metas, PersonaTier::Descriptive, backend,
                                                      ValueCatalog::builtin(), options);
    CHECK(result.failure_count == 0);
    REQUIRE(result.outcomes.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) {
        CHECK(result.outcomes[i].meta_index == i);
        CHECK(result.outcomes[i].persona.has_value());
    }
}

TEST_CASE("generation options are validated up front") {
    const std::vector<MetaPersona> metas(1, make_meta());
    auto backend = make_mock({});
    GenerationOptions bad_retry;
    bad_retry.retry_limit = 0;
    CHECK_THROWS_AS((void)generate_personas(metas, PersonaTier::Descriptive, backend,
                                            ValueCatalog::builtin(), bad_retry),
                    ConfigError);
    GenerationOptions bad_concurrency;
    bad_concurrency.concurrency = 0;
    CHECK_THROWS_AS((void)generate_personas(metas, PersonaTier::Descriptive, backend,
                                            ValueCatalog::builtin(), bad_concurrency),
                    ConfigError);
    CHECK_THROWS_AS((void)generate_personas(metas, PersonaTier::Meta, backend,
                                            ValueCatalog::builtin(), GenerationOptions{}),
                    ConfigError);
}
