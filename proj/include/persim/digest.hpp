#pragma once

// Content digests for artifact staleness checks: every pipeline stage
// records digests of the files it read and wrote, and downstream stages
// refuse to run against inputs whose digest no longer matches.

#include <filesystem>
#include <string>

namespace persim {

// "sha256:<64 hex chars>" of the given bytes.
std::string sha256_hex(const std::string &bytes);

// Digest of a file's contents; throws DataError when unreadable.
std::string file_digest(const std::filesystem::path &path);

} // namespace persim
