#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "persim/backend.hpp"
#include "persim/persona.hpp"

namespace persim {

// An ordered multiple-choice survey question. `ordinal` marks choices that
// form a scale (agree..disagree); non-ordinal questions are scored with total
// variation instead of the ordinal transport metric.
struct SurveyQuestion {
    std::string id;
    std::string topic;
    std::string text;
    std::vector<std::string> choices;
    bool ordinal = true;
    std::optional<std::vector<double>> ground_truth;

    void validate() const;
};

std::vector<SurveyQuestion> load_questions_jsonl(const std::filesystem::path &path);
Json question_to_json(const SurveyQuestion &question);
SurveyQuestion question_from_json(const Json &row);

struct PersonaRef {
    PersonaTier tier = PersonaTier::Meta;
    std::size_t index = 0;   // position in the persona list fed to run_survey
    std::string generator;   // backend that generated the persona ("" for meta)
};

struct ResponseRecord {
    std::string question_id;
    PersonaRef persona;
    std::string simulator;
    int chosen_index = 0;
    std::string raw_response;
};

Json record_to_json(const ResponseRecord &record);
ResponseRecord record_from_json(const Json &row);

// Finds the last "Answer: <letter>" (case-insensitive; brackets, quotes, and
// trailing punctuation tolerated). Falls back to the last line holding a lone
// letter. Returns nothing when no letter parses or the letter is beyond
// n_choices.
std::optional<int> parse_answer(const std::string &text, int n_choices);

struct SurveyOptions {
    int retry_limit = 3;
    DecodingParams decoding{0.0, 64}; // temperature 0: reproducible simulation
    int concurrency = 1;
    PersonaTier tier = PersonaTier::Meta;
    std::string generator;             // recorded into PersonaRef
    std::size_t persona_index_base = 0; // offset added to recorded persona indices,
                                        // for running a slice of a larger roster
};

struct SurveyFailure {
    std::size_t persona_index = 0;
    std::string question_id;
    std::string reason;
};

struct SurveyAttempt {
    int attempt = 0;
    std::string raw_response;
    std::string failure; // empty on success
};

struct SurveyAuditEntry {
    std::size_t persona_index = 0;
    std::string question_id;
    bool success = false;
    std::vector<SurveyAttempt> attempts;
};

struct SurveyResult {
    std::vector<ResponseRecord> records;   // (persona, question) order
    std::vector<SurveyFailure> failures;
    std::vector<SurveyAuditEntry> audit;   // one entry per pair, input order
};

// Called once per finished (persona, question) pair, never concurrently;
// `record` is null when the pair failed.  Lets callers persist an audit
// trail as the run progresses.
using SurveyObserver =
    std::function<void(const SurveyAuditEntry &, const ResponseRecord *record)>;

// One backend call per (persona, question) pair; parse failures retried up to
// the limit, then logged as failures. |records| + |failures| equals the pair
// count.
SurveyResult run_survey(std::span<const Persona> personas,
                        std::span<const SurveyQuestion> questions, ChatBackend &backend,
                        const SurveyOptions &options, const SurveyObserver &observer = {});

struct ChoiceDistribution {
    std::string question_id;
    std::string cohort;
    std::vector<std::size_t> counts;   // raw tallies per choice
    std::vector<double> probabilities; // counts / support
    std::size_t support = 0;           // total records in the cohort
};

// Counts chosen indices per (question, cohort). Questions supply the choice
// count; a record whose index falls outside it is rejected. Output is ordered
// by question (input order) then cohort name; empty cohorts are omitted.
std::vector<ChoiceDistribution>
aggregate(std::span<const ResponseRecord> records, std::span<const SurveyQuestion> questions,
          const std::function<std::string(const ResponseRecord &)> &cohort_key);

} // namespace persim
