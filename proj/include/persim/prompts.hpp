#pragma once

// Renders the generation and simulation prompts by filling the slot markers
// ({METADATA}, {TEMPLATE}, {PERSONA}, {QUESTION}) in the canonical prompt
// texts.  Rendering is pure string assembly: the same inputs always produce
// byte-identical prompts, which the golden-file tests rely on.

#include <string>

#include "persim/persona.hpp"
#include "persim/survey.hpp"

namespace persim {

// The system text sent with every generation request.
std::string generation_system_text();

// "KEY": "value" lines for the four seed attributes, one per line, no
// trailing newline.  AGE is rendered as a bare number inside quotes so the
// block matches the tabular template style.
std::string serialize_meta_block(const MetaPersona &meta);

// The body of a generation request for the given tier.  Meta tier has no
// generation prompt; asking for one is a configuration error.
std::string render_generation_prompt(PersonaTier tier, const MetaPersona &meta);

// Text form of a persona as it appears in the {PERSONA} slot: tabular tiers
// render as "KEY": "value" lines (nested keys keep their dotted names),
// descriptive tier passes the narrative through unchanged, meta tier renders
// its four seed attributes.
std::string serialize_persona_block(const Persona &persona);

// "question text\nA. first\nB. second\n..." — letters run A..Z, so a
// question with more than 26 choices cannot be rendered.
std::string question_block(const SurveyQuestion &question);

// The body of a survey request for one persona answering one question.
std::string render_simulation_prompt(const Persona &persona, const SurveyQuestion &question);

} // namespace persim
