#pragma once

// Persona generation: render a prompt per meta persona, call the chat
// backend, parse the response into a Persona, and gate acceptance on
// validation (objective tabular tier) or non-emptiness (other tiers), with a
// fixed number of full re-prompt attempts per persona.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "persim/backend.hpp"
#include "persim/catalog.hpp"
#include "persim/error.hpp"
#include "persim/persona.hpp"

namespace persim {

// A response the backend produced but the parser could not turn into a
// persona (missing marker, missing template keys, ...).  Recoverable: the
// generation loop retries with a fresh completion.
class ResponseParseError : public DataError {
  public:
    using DataError::DataError;
};

// Extract the persona from a raw model response.  Content after the first
// "Persona:" marker (case-insensitive, markdown fences stripped) is parsed
// per tier: tabular tiers accept a JSON object or line-oriented
// `"KEY": "value"` pairs (big-five scores may be nested or dotted); the
// descriptive tier keeps the remaining text as the narrative.  Fields come
// back in template order, with any extra keys appended in encounter order.
// Throws ResponseParseError when no persona can be recovered.
Persona parse_persona_response(const std::string &text, PersonaTier tier,
                               const MetaPersona &meta);

struct GenerationOptions {
    int retry_limit = 3;                    // total attempts per persona, >= 1
    DecodingParams decoding{1.0, 1024};     // diversity-seeking default
    int concurrency = 1;                    // max in-flight backend calls
};

// One backend round-trip for one persona.
struct GenerationAttempt {
    int attempt = 0;              // 1-based
    std::string raw_response;     // empty when the transport failed
    bool accepted = false;
    std::string error;            // parse/validation/transport reason when not accepted
    std::vector<Violation> violations; // catalog violations, when validation ran
};

// Everything that happened for one meta persona, in input order.
struct GenerationOutcome {
    std::size_t meta_index = 0;
    std::vector<GenerationAttempt> attempts;
    std::optional<Persona> persona; // set iff some attempt was accepted
};

struct GenerationResult {
    std::vector<GenerationOutcome> outcomes; // one per input meta, input order
    std::size_t failure_count = 0;
};

// Called once per finished persona, possibly from worker threads but never
// concurrently; lets callers append audit records as the run progresses.
using GenerationObserver = std::function<void(const GenerationOutcome &)>;

// Generate one persona per meta.  Acceptance gate: objective tabular tier
// requires validate_tabular(..) to pass; subjective tabular requires parse
// success (which implies all template keys present); descriptive requires a
// non-empty narrative.  A persona that exhausts its attempts becomes a
// failure outcome, never a partial persona.
GenerationResult generate_personas(std::span<const MetaPersona> metas, PersonaTier tier,
                                   ChatBackend &backend, const ValueCatalog &catalog,
                                   const GenerationOptions &options,
                                   const GenerationObserver &observer = {});

} // namespace persim
