#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace rulemine::data {

/// One manifest line: "name url sha256 filename".
struct ManifestEntry {
  std::string name;
  std::string url;
  std::string checksum;  // lowercase hex SHA-256
  std::string filename;
};

std::vector<ManifestEntry> parse_manifest(std::string_view text);

enum class FetchStatus { Cached, Downloaded };

struct FetchResult {
  std::string name;
  FetchStatus status;
  std::filesystem::path path;
};

/// Returns the resource bytes or throws. base_dir resolves relative
/// "file:" URLs (the manifest's directory).
using Downloader =
    std::function<std::string(const std::string& url, const std::filesystem::path& base_dir)>;

std::string default_download(const std::string& url, const std::filesystem::path& base_dir);

std::string sha256_hex(std::string_view bytes);

/// Ensures every manifest entry is present in cache_dir with a matching
/// checksum. Valid cached files are not downloaded again; a cached file with
/// a bad checksum is discarded and fetched anew.
std::vector<FetchResult> fetch_datasets(const std::filesystem::path& manifest,
                                        const std::filesystem::path& cache_dir,
                                        const Downloader& download = default_download);

/// Cache directory from RULEMINE_CACHE_DIR, else the given fallback.
std::filesystem::path cache_dir_from_env(const std::filesystem::path& fallback);

}  // namespace rulemine::data
