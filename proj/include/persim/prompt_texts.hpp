#pragma once

// Prompt template text used by the generation and simulation pipelines.
// Generation templates carry {METADATA} and (tabular tiers) {TEMPLATE} slots;
// the simulation template carries {PERSONA} and {QUESTION} slots. The bytes
// outside the slots are rendered into model requests unchanged, so edits
// here change what every backend sees.

namespace persim {

extern const char *const kGenerationSystemText;
extern const char *const kObjectiveGenerationTemplate;
extern const char *const kObjectiveFieldTemplate;
extern const char *const kSubjectiveGenerationTemplate;
extern const char *const kSubjectiveFieldTemplate;
extern const char *const kDescriptiveGenerationTemplate;
extern const char *const kSimulationTemplate;

} // namespace persim
