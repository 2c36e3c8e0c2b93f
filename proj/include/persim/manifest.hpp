#pragma once

// Run manifest: a JSON file at the run root recording, per completed stage,
// the digests of inputs consumed and artifacts produced plus a timestamp.
// Downstream stages compare recorded output digests against the files on
// disk and refuse to run on stale or missing upstream artifacts.

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "persim/jsonl.hpp"

namespace persim {

struct StageRecord {
    std::map<std::string, std::string> inputs;  // path (run-relative) -> digest
    std::map<std::string, std::string> outputs; // path (run-relative) -> digest
    std::string completed_at;                   // ISO-8601 UTC
};

class RunManifest {
  public:
    // Loads the manifest if present, otherwise starts empty.
    static RunManifest open(const std::filesystem::path &run_dir);

    bool has_stage(const std::string &stage) const;
    const StageRecord &stage(const std::string &stage) const;

    // Record a completed stage and write the manifest atomically.
    void record_stage(const std::string &stage, StageRecord record);

    // Verify every output the named stage recorded still matches on disk.
    // Throws DataError naming the first stale or missing artifact, or when
    // the stage has not run at all.
    void require_fresh(const std::string &stage) const;

    const std::filesystem::path &run_dir() const { return run_dir_; }
    std::filesystem::path path() const { return run_dir_ / "manifest.json"; }

  private:
    std::filesystem::path run_dir_;
    std::string version_;
    std::map<std::string, StageRecord> stages_;
};

// Current time as ISO-8601 UTC ("2024-05-01T12:00:00Z").
std::string utc_timestamp();

} // namespace persim
