#include "persim/manifest.hpp"

#include <ctime>

#include "persim/digest.hpp"
#include "persim/error.hpp"
#include "persim/version.hpp"

namespace persim {

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

RunManifest RunManifest::open(const std::filesystem::path &run_dir) {
    RunManifest manifest;
    manifest.run_dir_ = run_dir;
    manifest.version_ = kVersion;
    const auto path = manifest.path();
    if (!std::filesystem::exists(path)) {
        return manifest;
    }
    Json root = Json::parse(read_text_file(path), nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        throw DataError("manifest is not valid JSON: " + path.string());
    }
    manifest.version_ = root.value("version", manifest.version_);
    if (root.contains("stages")) {
        for (const auto &[name, node] : root.at("stages").items()) {
            StageRecord record;
            // Bind before iterating: .items() on a temporary leaves the
            // range-for body reading freed memory.
            const Json inputs = node.value("inputs", Json::object());
            for (const auto &[file, digest] : inputs.items()) {
                record.inputs[file] = digest.get<std::string>();
            }
            const Json outputs = node.value("outputs", Json::object());
            for (const auto &[file, digest] : outputs.items()) {
                record.outputs[file] = digest.get<std::string>();
            }
            record.completed_at = node.value("completed_at", std::string{});
            manifest.stages_[name] = std::move(record);
        }
    }
    return manifest;
}

bool RunManifest::has_stage(const std::string &stage) const {
    return stages_.count(stage) != 0;
}

const StageRecord &RunManifest::stage(const std::string &stage) const {
    const auto it = stages_.find(stage);
    if (it == stages_.end()) {
        throw DataError("stage '" + stage + "' has not run in " + run_dir_.string() +
                        "; run it before its dependents");
    }
    return it->second;
}

void RunManifest::record_stage(const std::string &stage, StageRecord record) {
    record.completed_at = utc_timestamp();
    stages_[stage] = std::move(record);

    Json root;
    root["version"] = version_;
    Json stages = Json::object();
    for (const auto &[name, entry] : stages_) {
        Json node;
        node["inputs"] = Json(entry.inputs);
        node["outputs"] = Json(entry.outputs);
        node["completed_at"] = entry.completed_at;
        stages[name] = std::move(node);
    }
    root["stages"] = std::move(stages);
    atomic_write_file(path(), root.dump(2) + "\n");
}

void RunManifest::require_fresh(const std::string &stage) const {
    const StageRecord &record = this->stage(stage);
    for (const auto &[file, digest] : record.outputs) {
        const auto path = run_dir_ / file;
        if (!std::filesystem::exists(path)) {
            throw DataError("artifact of stage '" + stage + "' is missing: " + path.string() +
                            "; rerun that stage");
        }
        const std::string current = file_digest(path);
        if (current != digest) {
            throw DataError("artifact of stage '" + stage + "' is stale: " + path.string() +
                            " changed since the stage ran (recorded " + digest + ", found " +
                            current + "); rerun that stage");
        }
    }
}

} // namespace persim
