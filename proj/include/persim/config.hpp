#pragma once

// Run configuration: one JSON file per experiment, describing the census
// table, sample size, tiers, backends, questions, and output directory.
// Credentials never live in the file; http backends name an environment
// variable instead.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "persim/backend.hpp"
#include "persim/persona.hpp"

namespace persim {

struct BackendSpec {
    std::string name;     // unique label used in artifacts and reports
    std::string kind;     // "mock" or "http"
    std::string model;    // model identifier sent to http backends
    std::string script;   // mock: JSONL path; may contain {tier} and {generator}
    std::string url;      // http: chat-completion endpoint
    std::string api_key_env; // http: environment variable holding the key
};

struct QuestionFileSpec {
    std::filesystem::path path;        // question JSONL
    std::string cohort;                // "population" or "state"
    std::filesystem::path ground_truth_csv; // optional per-cohort reference file
};

struct RunConfig {
    uint64_t seed = 0;
    std::filesystem::path joint_table;
    int per_state = 0;
    std::vector<PersonaTier> tiers;        // generated tiers (META is implicit)
    std::vector<BackendSpec> generators;
    std::vector<BackendSpec> simulators;
    std::vector<QuestionFileSpec> questions;
    int generation_retry_limit = 3;
    int simulation_retry_limit = 3;
    int concurrency = 1;
    DecodingParams generation_decoding{1.0, 1024};
    DecodingParams simulation_decoding{0.0, 64};
    std::filesystem::path output_dir;

    // The directory the config file lives in; relative paths inside the
    // config resolve against it.
    std::filesystem::path base_dir;
};

// Parse and validate a config file: seed and output_dir mandatory, every
// referenced file must exist, counts and bounds positive.  Throws
// ConfigError with the offending key named.
RunConfig load_run_config(const std::filesystem::path &path);

// Instantiate a backend from its spec.  For mock backends, `{tier}` and
// `{generator}` placeholders in the script path are substituted first, so
// each pipeline cell reads its own canned transcript.
std::unique_ptr<ChatBackend> make_backend(const BackendSpec &spec,
                                          const std::filesystem::path &base_dir,
                                          const std::string &tier_label,
                                          const std::string &generator_label);

} // namespace persim
