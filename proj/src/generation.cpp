#include "persim/generation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "persim/prompts.hpp"

namespace persim {

namespace {

std::string trim(const std::string &text) {
    auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    auto end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

// Drop markdown fence lines (``` or ```lang) anywhere in the response so the
// marker search and the field parser see only content lines.
std::string strip_fence_lines(const std::string &text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).rfind("```", 0) == 0) {
            continue;
        }
        out += line;
        out += '\n';
    }
    return out;
}

// Content after the first case-insensitive "Persona:" marker, or nullopt.
std::optional<std::string> content_after_marker(const std::string &text) {
    static const std::regex marker(R"(persona\s*:)", std::regex::icase);
    std::smatch match;
    if (!std::regex_search(text, match, marker)) {
        return std::nullopt;
    }
    return text.substr(static_cast<std::size_t>(match.position(0) + match.length(0)));
}

std::string upper(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return text;
}

std::string unquote(std::string value) {
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        return value.substr(1, value.size() - 2);
    }
    return value;
}

using FieldList = std::vector<std::pair<std::string, std::string>>;

void flatten_json_value(FieldList &out, const std::string &key, const Json &value) {
    if (key == "BIG_FIVE_SCORES" && value.is_object()) {
        for (const auto &[subkey, subvalue] : value.items()) {
            flatten_json_value(out, kBigFivePrefix + upper(subkey), subvalue);
        }
        return;
    }
    if (value.is_string()) {
        out.emplace_back(key, value.get<std::string>());
    } else {
        out.emplace_back(key, value.dump());
    }
}

// Strict JSON object form: {"AGE": "34", ..., "BIG_FIVE_SCORES": {...}}.
std::optional<FieldList> parse_json_fields(const std::string &content) {
    const auto open = content.find('{');
    const auto close = content.rfind('}');
    if (open == std::string::npos || close == std::string::npos || close < open) {
        return std::nullopt;
    }
    Json parsed = Json::parse(content.substr(open, close - open + 1), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        return std::nullopt;
    }
    FieldList fields;
    for (const auto &[key, value] : parsed.items()) {
        flatten_json_value(fields, upper(key), value);
    }
    return fields;
}

// Line-oriented form matching the template itself: one `"KEY": "value",`
// per line, big-five scores in a nested brace block.  Lines that carry no
// key continue the previous field's value.
FieldList parse_line_fields(const std::string &content) {
    static const std::regex field_line(R"re(^\s*"?([A-Za-z][A-Za-z0-9_ ]*)"?\s*:\s*(.*?)\s*$)re");
    FieldList fields;
    bool in_big_five = false;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        const std::string bare = trim(line);
        if (bare.empty() || bare == "{" || bare == "}," || bare == "}") {
            if (in_big_five && (bare == "}," || bare == "}")) {
                in_big_five = false;
            }
            continue;
        }
        std::smatch match;
        if (std::regex_match(line, match, field_line)) {
            std::string key = upper(match[1].str());
            std::string value = match[2].str();
            if (key == "BIG_FIVE_SCORES" && trim(value) == "{") {
                in_big_five = true;
                continue;
            }
            if (!value.empty() && value.back() == ',') {
                value.pop_back();
            }
            value = unquote(trim(value));
            if (in_big_five) {
                key = kBigFivePrefix + key;
            }
            fields.emplace_back(std::move(key), std::move(value));
        } else if (!fields.empty()) {
            fields.back().second += ' ';
            fields.back().second += bare;
        }
    }
    return fields;
}

TabularPersona assemble_tabular(PersonaTier tier, const MetaPersona &meta, FieldList parsed) {
    const auto &keys = template_keys(tier);
    TabularPersona persona;
    persona.tier = tier;
    persona.meta = meta;

    std::vector<bool> used(parsed.size(), false);
    std::vector<std::string> missing;
    for (const auto &key : keys) {
        bool found = false;
        for (std::size_t i = 0; i < parsed.size(); ++i) {
            if (!used[i] && parsed[i].first == key) {
                persona.fields.emplace_back(parsed[i]);
                used[i] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            missing.push_back(key);
        }
    }
    if (!missing.empty()) {
        std::string joined;
        for (const auto &key : missing) {
            joined += joined.empty() ? key : ", " + key;
        }
        throw ResponseParseError("response is missing required template fields: " + joined);
    }
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        if (!used[i]) {
            persona.fields.emplace_back(std::move(parsed[i]));
        }
    }
    return persona;
}

} // namespace

Persona parse_persona_response(const std::string &text, PersonaTier tier,
                               const MetaPersona &meta) {
    if (tier == PersonaTier::Meta) {
        throw ConfigError("the META tier is sampled, not generated; nothing to parse");
    }
    const std::string cleaned = strip_fence_lines(text);
    const auto content = content_after_marker(cleaned);
    if (!content) {
        throw ResponseParseError("response has no 'Persona:' marker");
    }
    if (tier == PersonaTier::Descriptive) {
        DescriptivePersona persona;
        persona.narrative = trim(*content);
        persona.meta = meta;
        if (persona.narrative.empty()) {
            throw ResponseParseError("descriptive response is empty after the marker");
        }
        return persona;
    }
    auto fields = parse_json_fields(*content);
    if (!fields) {
        fields = parse_line_fields(*content);
    }
    if (fields->empty()) {
        throw ResponseParseError("response contains no template fields");
    }
    return assemble_tabular(tier, meta, std::move(*fields));
}

namespace {

GenerationOutcome run_job(std::size_t index, const MetaPersona &meta, PersonaTier tier,
                          ChatBackend &backend, const ValueCatalog &catalog,
                          const GenerationOptions &options) {
    const std::string system_text = generation_system_text();
    const std::string user_text = render_generation_prompt(tier, meta);

    GenerationOutcome outcome;
    outcome.meta_index = index;
    for (int attempt = 1; attempt <= options.retry_limit; ++attempt) {
        GenerationAttempt record;
        record.attempt = attempt;
        try {
            record.raw_response = backend.complete(system_text, user_text, options.decoding);
            Persona persona = parse_persona_response(record.raw_response, tier, meta);
            if (tier == PersonaTier::ObjectiveTabular) {
                auto report = validate_tabular(std::get<TabularPersona>(persona), catalog);
                if (!report.valid) {
                    record.error = "catalog validation failed";
                    record.violations = std::move(report.violations);
                    outcome.attempts.push_back(std::move(record));
                    continue;
                }
            }
            record.accepted = true;
            outcome.attempts.push_back(std::move(record));
            outcome.persona = std::move(persona);
            break;
        } catch (const ResponseParseError &err) {
            record.error = err.what();
            outcome.attempts.push_back(std::move(record));
        } catch (const TransportError &err) {
            record.error = err.what();
            outcome.attempts.push_back(std::move(record));
        }
    }
    return outcome;
}

} // namespace

GenerationResult generate_personas(std::span<const MetaPersona> metas, PersonaTier tier,
                                   ChatBackend &backend, const ValueCatalog &catalog,
                                   const GenerationOptions &options,
                                   const GenerationObserver &observer) {
    if (tier == PersonaTier::Meta) {
        throw ConfigError("the META tier is sampled, not generated");
    }
    if (options.retry_limit < 1) {
        throw ConfigError("generation retry limit must be at least 1");
    }
    if (options.concurrency < 1) {
        throw ConfigError("generation concurrency must be at least 1");
    }

    GenerationResult result;
    result.outcomes.resize(metas.size());

    std::atomic<std::size_t> next{0};
    std::mutex observer_mutex;
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= metas.size()) {
                return;
            }
            try {
                GenerationOutcome outcome =
                    run_job(i, metas[i], tier, backend, catalog, options);
                if (observer) {
                    std::lock_guard<std::mutex> lock(observer_mutex);
                    observer(outcome);
                }
                result.outcomes[i] = std::move(outcome);
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
        std::min<std::size_t>(static_cast<std::size_t>(options.concurrency), metas.size());
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

    for (const auto &outcome : result.outcomes) {
        if (!outcome.persona) {
            ++result.failure_count;
        }
    }
    return result;
}

} // namespace persim
