#pragma once

// Pipeline staging: each subcommand reads the artifacts of its upstream
// stage (verified by digest), produces its own artifacts atomically, and
// records them in the run manifest.  Generation and simulation keep an
// append-only audit log per cell, so an interrupted stage resumes by
// skipping work the audit already covers.

#include <filesystem>
#include <iosfwd>

#include "persim/config.hpp"

namespace persim {

// Label used in artifact paths and reports for the sampled (META) persona
// population, which no generator backend produced.
inline constexpr const char *kCensusLabel = "census";

struct RunContext {
    RunConfig config;
    std::filesystem::path config_path;
};

RunContext load_run_context(const std::filesystem::path &config_path);

// sample: joint table -> metas/metas.jsonl
void cmd_sample(const RunContext &ctx);

// generate: metas -> personas/<generator>/<tier>.jsonl (+ .audit.jsonl)
void cmd_generate(const RunContext &ctx);

// simulate: personas x questions -> records/<generator>/<tier>/<simulator>.jsonl
void cmd_simulate(const RunContext &ctx);

// evaluate: records + ground truth -> reports/aggregates/*.csv, reports/alignment.csv
void cmd_evaluate(const RunContext &ctx);

// report: evaluation artifacts -> election/cross-sim/topic/sentiment/word-frequency files
void cmd_report(const RunContext &ctx);

// All five stages in order.
void cmd_run(const RunContext &ctx);

// Catalog-check an external persona JSONL (e.g. a published persona dataset);
// prints a per-tier summary to `out` and returns the number of invalid rows.
std::size_t cmd_validate(const std::filesystem::path &personas_path, std::ostream &out);

} // namespace persim
