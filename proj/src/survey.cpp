#include "persim/survey.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "persim/error.hpp"
#include "persim/jsonl.hpp"
#include "persim/prompts.hpp"

namespace persim {

void SurveyQuestion::validate() const {
    if (id.empty()) {
        throw DataError("survey question has an empty id");
    }
    if (text.empty()) {
        throw DataError("survey question '" + id + "' has empty text");
    }
    if (choices.size() < 2 || choices.size() > 26) {
        throw DataError("survey question '" + id + "' must offer 2-26 choices, has " +
                        std::to_string(choices.size()));
    }
    for (const auto &choice : choices) {
        if (choice.empty()) {
            throw DataError("survey question '" + id + "' has an empty choice");
        }
    }
    if (ground_truth) {
        if (ground_truth->size() != choices.size()) {
            throw DataError("survey question '" + id + "' ground truth has " +
                            std::to_string(ground_truth->size()) + " entries for " +
                            std::to_string(choices.size()) + " choices");
        }
        double total = 0.0;
        for (double p : *ground_truth) {
            if (p < 0.0) {
                throw DataError("survey question '" + id + "' ground truth has a negative entry");
            }
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw DataError("survey question '" + id + "' ground truth sums to " +
                            std::to_string(total) + ", not 1");
        }
    }
}

Json question_to_json(const SurveyQuestion &question) {
    Json row;
    row["id"] = question.id;
    row["topic"] = question.topic;
    row["text"] = question.text;
    row["choices"] = question.choices;
    row["ordinal"] = question.ordinal;
    if (question.ground_truth) {
        row["ground_truth"] = *question.ground_truth;
    }
    return row;
}

SurveyQuestion question_from_json(const Json &row) {
    SurveyQuestion question;
    try {
        question.id = row.at("id").get<std::string>();
        question.topic = row.value("topic", std::string{});
        question.text = row.at("text").get<std::string>();
        question.choices = row.at("choices").get<std::vector<std::string>>();
        question.ordinal = row.value("ordinal", true);
        if (row.contains("ground_truth") && !row.at("ground_truth").is_null()) {
            question.ground_truth = row.at("ground_truth").get<std::vector<double>>();
        }
    } catch (const Json::exception &err) {
        throw DataError(std::string{"malformed survey question: "} + err.what());
    }
    question.validate();
    return question;
}

std::vector<SurveyQuestion> load_questions_jsonl(const std::filesystem::path &path) {
    std::vector<SurveyQuestion> questions;
    for_each_jsonl(path, [&](const Json &row, std::size_t line) {
        try {
            questions.push_back(question_from_json(row));
        } catch (const DataError &err) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": " + err.what());
        }
    });
    for (std::size_t i = 0; i < questions.size(); ++i) {
        for (std::size_t j = i + 1; j < questions.size(); ++j) {
            if (questions[i].id == questions[j].id) {
                throw DataError(path.string() + ": duplicate question id '" + questions[i].id +
                                "'");
            }
        }
    }
    return questions;
}

Json record_to_json(const ResponseRecord &record) {
    Json row;
    row["question_id"] = record.question_id;
    row["persona"] = Json{{"tier", tier_name(record.persona.tier)},
                          {"index", record.persona.index},
                          {"generator", record.persona.generator}};
    row["simulator"] = record.simulator;
    row["chosen_index"] = record.chosen_index;
    row["raw_response"] = record.raw_response;
    return row;
}

ResponseRecord record_from_json(const Json &row) {
    ResponseRecord record;
    try {
        record.question_id = row.at("question_id").get<std::string>();
        const Json &persona = row.at("persona");
        const std::string tier_tag = persona.at("tier").get<std::string>();
        const auto tier = tier_from_name(tier_tag);
        if (!tier) {
            throw DataError("response record names unknown persona tier '" + tier_tag + "'");
        }
        record.persona.tier = *tier;
        record.persona.index = persona.at("index").get<std::size_t>();
        record.persona.generator = persona.value("generator", std::string{});
        record.simulator = row.at("simulator").get<std::string>();
        record.chosen_index = row.at("chosen_index").get<int>();
        record.raw_response = row.value("raw_response", std::string{});
    } catch (const Json::exception &err) {
        throw DataError(std::string{"malformed response record: "} + err.what());
    }
    if (record.chosen_index < 0) {
        throw DataError("response record for '" + record.question_id +
                        "' has a negative chosen index");
    }
    return record;
}

std::optional<int> parse_answer(const std::string &text, int n_choices) {
    if (n_choices < 2 || n_choices > 26) {
        throw ConfigError("answer parsing needs 2-26 choices, got " + std::to_string(n_choices));
    }
    // Prefer the LAST "Answer: X" occurrence: models sometimes restate the
    // required output format before committing to a letter.
    static const std::regex answer_pattern(R"(answer\s*:\s*[\[\("'\*\s]*([A-Za-z])(?![A-Za-z]))",
                                           std::regex::icase);
    std::optional<int> found;
    auto begin = std::sregex_iterator(text.begin(), text.end(), answer_pattern);
    for (auto it = begin; it != std::sregex_iterator{}; ++it) {
        const char letter =
            static_cast<char>(std::toupper(static_cast<unsigned char>((*it)[1].str()[0])));
        const int index = letter - 'A';
        if (index < n_choices) {
            found = index;
        }
    }
    if (found) {
        return found;
    }
    // Fallback: the last line that is nothing but one (possibly decorated)
    // letter, e.g. "[B]" or "c.".
    static const std::regex lone_letter(
        R"re(^\s*[\[\("'\*]*([A-Za-z])[\]\)"'\*.,:;!]*\s*$)re");
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::smatch match;
        if (std::regex_match(line, match, lone_letter)) {
            const char letter =
                static_cast<char>(std::toupper(static_cast<unsigned char>(match[1].str()[0])));
            const int index = letter - 'A';
            if (index < n_choices) {
                found = index;
            }
        }
    }
    return found;
}

namespace {

struct PairTask {
    std::size_t persona_index = 0;
    std::size_t question_index = 0;
};

} // namespace

SurveyResult run_survey(std::span<const Persona> personas,
                        std::span<const SurveyQuestion> questions, ChatBackend &backend,
                        const SurveyOptions &options, const SurveyObserver &observer) {
    if (personas.empty() || questions.empty()) {
        throw ConfigError("run_survey needs at least one persona and one question");
    }
    if (options.retry_limit < 1) {
        throw ConfigError("survey retry limit must be at least 1");
    }
    if (options.concurrency < 1) {
        throw ConfigError("survey concurrency must be at least 1");
    }
    for (const auto &question : questions) {
        question.validate();
    }

    std::vector<PairTask> tasks;
    tasks.reserve(personas.size() * questions.size());
    for (std::size_t p = 0; p < personas.size(); ++p) {
        for (std::size_t q = 0; q < questions.size(); ++q) {
            tasks.push_back(PairTask{p, q});
        }
    }

    struct PairOutcome {
        SurveyAuditEntry audit;
        std::optional<ResponseRecord> record;
        std::optional<SurveyFailure> failure;
    };
    std::vector<PairOutcome> outcomes(tasks.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::mutex observer_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) {
                return;
            }
            const PairTask &task = tasks[t];
            const Persona &persona = personas[task.persona_index];
            const SurveyQuestion &question = questions[task.question_index];
            const std::size_t roster_index = options.persona_index_base + task.persona_index;
            try {
                const std::string prompt = render_simulation_prompt(persona, question);
                PairOutcome outcome;
                outcome.audit.persona_index = roster_index;
                outcome.audit.question_id = question.id;
                for (int attempt = 1; attempt <= options.retry_limit; ++attempt) {
                    SurveyAttempt record;
                    record.attempt = attempt;
                    try {
                        record.raw_response = backend.complete("", prompt, options.decoding);
                    } catch (const TransportError &err) {
                        record.failure = err.what();
                        outcome.audit.attempts.push_back(std::move(record));
                        continue;
                    }
                    const auto chosen = parse_answer(
                        record.raw_response, static_cast<int>(question.choices.size()));
                    if (!chosen) {
                        record.failure = "no parsable answer letter";
                        outcome.audit.attempts.push_back(std::move(record));
                        continue;
                    }
                    outcome.record = ResponseRecord{
                        question.id,
                        PersonaRef{options.tier, roster_index, options.generator},
                        backend.identity().name,
                        *chosen,
                        record.raw_response,
                    };
                    outcome.audit.attempts.push_back(std::move(record));
                    outcome.audit.success = true;
                    break;
                }
                if (!outcome.record) {
                    outcome.failure = SurveyFailure{
                        roster_index, question.id,
                        outcome.audit.attempts.empty() ? "no attempts made"
                                                       : outcome.audit.attempts.back().failure};
                }
                if (observer) {
                    std::lock_guard<std::mutex> lock(observer_mutex);
                    observer(outcome.audit,
                             outcome.record ? &*outcome.record : nullptr);
                }
                outcomes[t] = std::move(outcome);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                return;
            }
        }
    };

    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(options.concurrency), tasks.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) {
            threads.emplace_back(worker);
        }
        for (auto &thread : threads) {
            thread.join();
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }

    SurveyResult result;
    for (auto &outcome : outcomes) {
        if (outcome.record) {
            result.records.push_back(std::move(*outcome.record));
        }
        if (outcome.failure) {
            result.failures.push_back(std::move(*outcome.failure));
        }
        result.audit.push_back(std::move(outcome.audit));
    }
    return result;
}

std::vector<ChoiceDistribution>
aggregate(std::span<const ResponseRecord> records, std::span<const SurveyQuestion> questions,
          const std::function<std::string(const ResponseRecord &)> &cohort_key) {
    std::map<std::string, std::pair<std::size_t, std::size_t>> question_info; // id -> (order, K)
    for (std::size_t i = 0; i < questions.size(); ++i) {
        const auto [it, inserted] =
            question_info.emplace(questions[i].id, std::make_pair(i, questions[i].choices.size()));
        if (!inserted && it->second.second != questions[i].choices.size()) {
            throw DataError("question id '" + questions[i].id +
                            "' appears with two different choice counts");
        }
    }

    // (question order, cohort) -> per-choice counts; std::map gives the
    // question-then-cohort output ordering for free.
    std::map<std::pair<std::size_t, std::string>, std::vector<std::size_t>> counts;
    for (const auto &record : records) {
        const auto info = question_info.find(record.question_id);
        if (info == question_info.end()) {
            throw DataError("response record references unknown question '" + record.question_id +
                            "'");
        }
        const auto [order, n_choices] = info->second;
        if (record.chosen_index < 0 || static_cast<std::size_t>(record.chosen_index) >= n_choices) {
            throw DataError("response record for '" + record.question_id + "' chose index " +
                            std::to_string(record.chosen_index) + " of " +
                            std::to_string(n_choices) + " choices");
        }
        auto &bucket = counts[{order, cohort_key(record)}];
        bucket.resize(n_choices, 0);
        ++bucket[static_cast<std::size_t>(record.chosen_index)];
    }

    std::vector<ChoiceDistribution> distributions;
    distributions.reserve(counts.size());
    for (const auto &[key, bucket] : counts) {
        ChoiceDistribution dist;
        dist.question_id = questions[key.first].id;
        dist.cohort = key.second;
        dist.counts = bucket;
        dist.support = 0;
        for (std::size_t c : bucket) {
            dist.support += c;
        }
        dist.probabilities.reserve(bucket.size());
        for (std::size_t c : bucket) {
            dist.probabilities.push_back(static_cast<double>(c) /
                                         static_cast<double>(dist.support));
        }
        distributions.push_back(std::move(dist));
    }
    return distributions;
}

} // namespace persim
