#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace persim {

// Insertion-ordered so persona field order survives a round trip.
using Json = nlohmann::ordered_json;

// Reads a whole file; throws DataError when missing or unreadable.
std::string read_text_file(const std::filesystem::path &path);

// Writes via a sibling temp file plus rename, so readers never observe a
// partially written artifact.
void atomic_write_file(const std::filesystem::path &path, const std::string &content);

// One JSON object per line. Blank lines are skipped; a malformed line throws
// DataError naming the file and line number.
std::vector<Json> read_jsonl(const std::filesystem::path &path);
void for_each_jsonl(const std::filesystem::path &path, const std::function<void(const Json &, std::size_t)> &fn);
std::string to_jsonl(const std::vector<Json> &rows);
void write_jsonl(const std::filesystem::path &path, const std::vector<Json> &rows);

// Appends a single JSONL row, flushing to disk before returning.
void append_jsonl_line(const std::filesystem::path &path, const Json &row);

} // namespace persim
