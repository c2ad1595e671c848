#pragma once

#include <filesystem>
#include <string>

namespace isoresolve {

inline constexpr const char* kToolVersion = "0.1.0";

std::string sha256_hex(const std::string& bytes);

/// Whole-file read; throws Error(Io).
std::string read_file(const std::filesystem::path& path);
/// Writes `content` and creates parent directories; throws Error(Io).
void write_file(const std::filesystem::path& path, const std::string& content);

/// UTC timestamp, e.g. 20260314T101500Z.
std::string utc_timestamp();

/// Creates <root>/<timestamp>-<first 12 hex of sha256(config)>/, with a
/// numeric suffix when that directory already exists.
std::filesystem::path create_run_dir(const std::filesystem::path& root, const std::string& config_text);

}  // namespace isoresolve
