#include "persim/prompts.hpp"

#include <stdexcept>

#include "persim/error.hpp"
#include "persim/prompt_texts.hpp"

namespace persim {

namespace {

// Replace the single occurrence of `marker` in `text`.  The canonical prompt
// texts are compiled in, so a missing marker is a programming error, not a
// runtime condition.
std::string replace_slot(std::string text, const std::string &marker, const std::string &value) {
    const auto pos = text.find(marker);
    if (pos == std::string::npos) {
        throw std::logic_error("prompt text lacks slot marker " + marker);
    }
    text.replace(pos, marker.size(), value);
    return text;
}

// The field templates are stored with their trailing newline; the {TEMPLATE}
// slot sits on its own line, so the substituted text must not add one.
std::string strip_trailing_newline(std::string text) {
    if (!text.empty() && text.back() == '\n') {
        text.pop_back();
    }
    return text;
}

void append_field_line(std::string &out, const std::string &key, const std::string &value,
                       bool last) {
    out += '"';
    out += key;
    out += "\": \"";
    out += value;
    out += '"';
    if (!last) {
        out += ',';
    }
    out += '\n';
}

std::string serialize_tabular_block(const TabularPersona &persona) {
    // Render "KEY": "value" lines in field order, re-nesting the big-five
    // scores into the brace block the templates use.
    const std::string prefix = kBigFivePrefix;
    std::string out;
    const auto &fields = persona.fields;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const bool last_top = i + 1 == fields.size();
        if (fields[i].first.rfind(prefix, 0) == 0) {
            std::size_t end = i;
            while (end < fields.size() && fields[end].first.rfind(prefix, 0) == 0) {
                ++end;
            }
            out += "\"BIG_FIVE_SCORES\": {\n";
            for (std::size_t j = i; j < end; ++j) {
                append_field_line(out, fields[j].first.substr(prefix.size()),
                                  fields[j].second, j + 1 == end);
            }
            out += "}";
            if (end != fields.size()) {
                out += ',';
            }
            out += '\n';
            i = end - 1;
            continue;
        }
        append_field_line(out, fields[i].first, fields[i].second, last_top);
    }
    return strip_trailing_newline(std::move(out));
}

} // namespace

std::string generation_system_text() { return kGenerationSystemText; }

std::string serialize_meta_block(const MetaPersona &meta) {
    std::string out;
    append_field_line(out, std::string(kAgeAxis), std::to_string(meta.age), false);
    append_field_line(out, std::string(kSexAxis), meta.sex, false);
    append_field_line(out, std::string(kRaceAxis), meta.race, false);
    append_field_line(out, std::string(kStateAxis), meta.state, true);
    return strip_trailing_newline(std::move(out));
}

std::string render_generation_prompt(PersonaTier tier, const MetaPersona &meta) {
    switch (tier) {
    case PersonaTier::Meta:
        throw ConfigError("the META tier is sampled, not generated; no prompt exists for it");
    case PersonaTier::ObjectiveTabular:
        return replace_slot(
            replace_slot(kObjectiveGenerationTemplate, "{METADATA}", serialize_meta_block(meta)),
            "{TEMPLATE}", strip_trailing_newline(kObjectiveFieldTemplate));
    case PersonaTier::SubjectiveTabular:
        return replace_slot(
            replace_slot(kSubjectiveGenerationTemplate, "{METADATA}", serialize_meta_block(meta)),
            "{TEMPLATE}", strip_trailing_newline(kSubjectiveFieldTemplate));
    case PersonaTier::Descriptive:
        return replace_slot(kDescriptiveGenerationTemplate, "{METADATA}",
                            serialize_meta_block(meta));
    }
    throw std::logic_error("unhandled persona tier");
}

std::string serialize_persona_block(const Persona &persona) {
    if (const auto *meta = std::get_if<MetaPersona>(&persona)) {
        return serialize_meta_block(*meta);
    }
    if (const auto *tabular = std::get_if<TabularPersona>(&persona)) {
        return serialize_tabular_block(*tabular);
    }
    return std::get<DescriptivePersona>(persona).narrative;
}

std::string question_block(const SurveyQuestion &question) {
    if (question.choices.size() > 26) {
        throw DataError("question '" + question.id + "' has " +
                        std::to_string(question.choices.size()) +
                        " choices; answer letters only cover A-Z");
    }
    std::string out = question.text;
    for (std::size_t i = 0; i < question.choices.size(); ++i) {
        out += '\n';
        out += static_cast<char>('A' + i);
        out += ". ";
        out += question.choices[i];
    }
    return out;
}

std::string render_simulation_prompt(const Persona &persona, const SurveyQuestion &question) {
    return replace_slot(replace_slot(kSimulationTemplate, "{PERSONA}",
                                     serialize_persona_block(persona)),
                        "{QUESTION}", question_block(question));
}

} // namespace persim
