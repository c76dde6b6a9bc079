#include "rulemine/data/fetch.hpp"

#include <curl/curl.h>
#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include "rulemine/error.hpp"

namespace rulemine::data {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t append_body(char* ptr, std::size_t size, std::size_t nmemb, void* userdata) {
  static_cast<std::string*>(userdata)->append(ptr, size * nmemb);
  return size * nmemb;
}

std::string curl_get(const std::string& url) {
  static const bool initialized = [] { return curl_global_init(CURL_GLOBAL_DEFAULT) == CURLE_OK; }();
  if (!initialized) throw DataError("libcurl initialization failed");
  std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> handle(curl_easy_init(), curl_easy_cleanup);
  if (!handle) throw DataError("libcurl handle allocation failed");
  std::string body;
  curl_easy_setopt(handle.get(), CURLOPT_URL, url.c_str());
  curl_easy_setopt(handle.get(), CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(handle.get(), CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(handle.get(), CURLOPT_CONNECTTIMEOUT, 20L);
  curl_easy_setopt(handle.get(), CURLOPT_WRITEFUNCTION, append_body);
  curl_easy_setopt(handle.get(), CURLOPT_WRITEDATA, &body);
  if (CURLcode rc = curl_easy_perform(handle.get()); rc != CURLE_OK)
    throw DataError("download of " + url + " failed: " + curl_easy_strerror(rc));
  return body;
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> toks;
    for (std::string t; fields >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    if (toks.size() != 4)
      throw ConfigError("manifest line " + std::to_string(lineno) +
                        ": expected 'name url sha256 filename'");
    if (toks[2].size() != 64 || toks[2].find_first_not_of("0123456789abcdef") != std::string::npos)
      throw ConfigError("manifest line " + std::to_string(lineno) + ": checksum must be lowercase sha256 hex");
    if (fs::path(toks[3]).has_parent_path() || toks[3] == "." || toks[3] == "..")
      throw ConfigError("manifest line " + std::to_string(lineno) + ": filename must be a bare name");
    entries.push_back({toks[0], toks[1], toks[2], toks[3]});
  }
  return entries;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw InvariantError("sha256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

std::string default_download(const std::string& url, const fs::path& base_dir) {
  if (url.rfind("file:", 0) == 0 && url.rfind("file://", 0) != 0) {
    fs::path p(url.substr(5));
    return read_file(p.is_absolute() ? p : base_dir / p);
  }
  return curl_get(url);
}

std::vector<FetchResult> fetch_datasets(const fs::path& manifest, const fs::path& cache_dir,
                                        const Downloader& download) {
  const auto entries = parse_manifest(read_file(manifest));
  std::vector<FetchResult> report;
  if (entries.empty()) return report;
  fs::create_directories(cache_dir);
  const auto base = manifest.has_parent_path() ? manifest.parent_path() : fs::path(".");
  for (const auto& e : entries) {
    const fs::path target = cache_dir / e.filename;
    if (fs::exists(target) && sha256_hex(read_file(target)) == e.checksum) {
      report.push_back({e.name, FetchStatus::Cached, target});
      continue;
    }
    std::string body;
    try {
      body = download(e.url, base);
    } catch (const std::exception& ex) {
      throw DataError("entry '" + e.name + "': " + ex.what());
    }
    if (sha256_hex(body) != e.checksum)
      throw DataError("entry '" + e.name + "': checksum mismatch for " + e.url);
    const fs::path tmp = target.string() + ".part";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw DataError("cannot write " + tmp.string());
      out << body;
    }
    fs::rename(tmp, target);
    report.push_back({e.name, FetchStatus::Downloaded, target});
  }
  return report;
}

fs::path cache_dir_from_env(const fs::path& fallback) {
  if (const char* env = std::getenv("RULEMINE_CACHE_DIR"); env && *env) return fs::path(env);
  return fallback;
}

}  // namespace rulemine::data
