// Copyright 2026 The termgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Optional adapter that pulls term vectors from a semantic-network web API
// into an in-memory EmbeddingKB, with a write-through disk cache so that a
// repeated run needs no network at all.
//
// Wire contract (plain HTTP):
//
//   GET <endpoint>/vector?term=<percent-encoded term>
//     200  {"term": "...", "vector": [c1, c2, ...]}   term known
//     200  {"term": "...", "vector": null}            term unknown
//     404                                             term unknown
//     429, 5xx, transport failure                      retried with backoff
//     anything else                                    ApiFormatError
//
// Cache entries are one JSON file per term, named by the hex encoding of the
// term's vocabulary key: {"term": "...", "found": true, "vector": [...]}.
// Unknown terms are cached too (found = false) and never given a vector.

#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <unordered_map>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "termgraph/error.hpp"
#include "termgraph/export.hpp"
#include "termgraph/knowledge_base.hpp"
#include "termgraph/text.hpp"

namespace termgraph {

inline constexpr const char* kRemoteEndpointEnv = "TERMGRAPH_KB_URL";

struct RemoteOptions {
  std::string endpoint;  // e.g. "http://127.0.0.1:8080/api"; empty = offline
  std::filesystem::path cache_dir;
  std::size_t max_retries = 3;
  std::chrono::milliseconds retry_backoff{200};
  std::chrono::milliseconds min_request_interval{50};
  std::chrono::milliseconds timeout{10000};
};

struct RemoteFetch {
  EmbeddingKB kb;
  std::vector<std::string> missing;  // unknown to the service
  std::size_t cache_hits = 0;
  std::size_t requests = 0;
};

namespace remote_internal {

struct CacheEntry {
  std::string term;
  bool found = false;
  std::vector<double> vector;
};

inline std::string HexKey(std::string_view term) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::string key = VocabularyKey(term);
  std::string out;
  out.reserve(key.size() * 2);
  for (unsigned char c : key) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 15]);
  }
  return out;
}

// Writers to the same key are serialized through one of a fixed set of lock
// stripes; readers rely on rename() replacing the file atomically.
inline std::mutex& KeyMutex(std::string_view key) {
  static std::array<std::mutex, 64> stripes;
  return stripes[std::hash<std::string_view>{}(key) % stripes.size()];
}

inline CacheEntry ParseEntry(std::string_view term, const nlohmann::json& j) {
  CacheEntry entry;
  entry.term = std::string(term);
  if (!j.is_object() || !j.contains("vector")) {
    throw Error(Errc::kApiFormatError, "response for '" + entry.term +
                                           "' lacks a \"vector\" field");
  }
  const auto& vec = j.at("vector");
  if (vec.is_null()) return entry;
  if (!vec.is_array() || vec.empty()) {
    throw Error(Errc::kApiFormatError,
                "\"vector\" for '" + entry.term + "' is not a non-empty array");
  }
  bool all_zero = true;
  for (const auto& c : vec) {
    if (!c.is_number()) {
      throw Error(Errc::kApiFormatError,
                  "non-numeric component for '" + entry.term + "'");
    }
    entry.vector.push_back(c.get<double>());
    if (entry.vector.back() != 0) all_zero = false;
  }
  if (all_zero) {
    throw Error(Errc::kApiFormatError, "zero vector for '" + entry.term + "'");
  }
  entry.found = true;
  return entry;
}

inline std::optional<CacheEntry> ReadCache(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    const auto j = nlohmann::json::parse(buffer.str());
    CacheEntry entry;
    entry.term = j.at("term").get<std::string>();
    entry.found = j.at("found").get<bool>();
    if (entry.found) entry.vector = j.at("vector").get<std::vector<double>>();
    return entry;
  } catch (const nlohmann::json::exception&) {
    // A damaged entry is refetched rather than trusted.
    return std::nullopt;
  }
}

inline void WriteCache(const std::filesystem::path& dir, const std::string& key,
                       const CacheEntry& entry) {
  static std::atomic<std::uint64_t> counter{0};
  nlohmann::json j = {{"term", entry.term}, {"found", entry.found}};
  j["vector"] = entry.found ? nlohmann::json(entry.vector) : nlohmann::json();
  const std::string body = CanonicalJson(j);

  std::lock_guard<std::mutex> lock(KeyMutex(key));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ostringstream tmp_name;
  tmp_name << key << ".tmp." << std::this_thread::get_id() << "."
           << counter.fetch_add(1);
  const auto tmp = dir / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out) {
      throw Error(Errc::kIoError, "cannot write cache file " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, dir / (key + ".json"), ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::kIoError, "cannot commit cache entry for '" +
                                    entry.term + "'");
  }
}

struct Endpoint {
  std::string scheme_host_port;
  std::string path_prefix;
};

inline Endpoint SplitEndpoint(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::kUsage, "endpoint must be an http:// URL: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme != "http") {
    throw Error(Errc::kUsage, "only http:// endpoints are supported: " + url);
  }
#endif
  std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) path_start = url.size();
  Endpoint ep{url.substr(0, path_start), url.substr(path_start)};
  while (!ep.path_prefix.empty() && ep.path_prefix.back() == '/') {
    ep.path_prefix.pop_back();
  }
  return ep;
}

}  // namespace remote_internal

// Fetches vectors for `terms` through the cache. Throws NetworkError if an
// uncached term cannot be fetched (no endpoint, or retries exhausted) and
// ApiFormatError on a malformed or unexpected response.
class RemoteVectorSource {
 public:
  explicit RemoteVectorSource(RemoteOptions options)
      : options_(std::move(options)) {}

  RemoteFetch Fetch(std::span<const std::string> terms) {
    using namespace remote_internal;
    std::vector<CacheEntry> entries;
    RemoteFetch out{EmbeddingKB(1), {}, 0, 0};
    for (const std::string& term : terms) {
      if (term.empty()) continue;
      const std::string key = HexKey(term);
      const auto file = options_.cache_dir / (key + ".json");
      if (auto cached = ReadCache(file)) {
        ++out.cache_hits;
        entries.push_back(std::move(*cached));
        continue;
      }
      CacheEntry entry = Request(term, &out.requests);
      WriteCache(options_.cache_dir, key, entry);
      entries.push_back(std::move(entry));
    }

    std::size_t dimension = 0;
    for (const auto& entry : entries) {
      if (!entry.found) continue;
      if (dimension == 0) dimension = entry.vector.size();
      if (entry.vector.size() != dimension) {
        throw Error(Errc::kApiFormatError,
                    "inconsistent vector dimension for '" + entry.term + "'");
      }
    }
    out.kb = EmbeddingKB(dimension == 0 ? 1 : dimension);
    for (const auto& entry : entries) {
      if (entry.found) {
        out.kb.Insert(entry.term, entry.vector);
      } else {
        out.missing.push_back(entry.term);
      }
    }
    return out;
  }

 private:
  remote_internal::CacheEntry Request(const std::string& term,
                                      std::size_t* requests) {
    using namespace remote_internal;
    if (options_.endpoint.empty()) {
      throw Error(Errc::kNetworkError,
                  "'" + term + "' is not cached and no endpoint is set");
    }
    const Endpoint ep = SplitEndpoint(options_.endpoint);
    httplib::Client client(ep.scheme_host_port);
    const auto timeout_s = options_.timeout.count() / 1000;
    const auto timeout_us = (options_.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(timeout_s, timeout_us);
    client.set_read_timeout(timeout_s, timeout_us);
    const httplib::Params params{{"term", VocabularyKey(term)}};
    const std::string path = ep.path_prefix + "/vector";

    std::string last_failure;
    for (std::size_t attempt = 0; attempt <= options_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(options_.retry_backoff *
                                    (1 << (attempt - 1)));
      }
      Throttle();
      ++*requests;
      auto result = client.Get(path, params, httplib::Headers{});
      if (!result) {
        last_failure = httplib::to_string(result.error());
        continue;
      }
      const int status = result->status;
      if (status == 404) return CacheEntry{term, false, {}};
      if (status == 429 || status >= 500) {
        last_failure = "HTTP " + std::to_string(status);
        continue;
      }
      if (status != 200) {
        throw Error(Errc::kApiFormatError, "unexpected HTTP " +
                                               std::to_string(status) +
                                               " for '" + term + "'");
      }
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(result->body);
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::kApiFormatError,
                    "unparseable response for '" + term + "': " + e.what());
      }
      return ParseEntry(term, body);
    }
    throw Error(Errc::kNetworkError, "giving up on '" + term + "' after " +
                                         std::to_string(options_.max_retries + 1) +
                                         " attempts: " + last_failure);
  }

  // Spaces consecutive requests at least min_request_interval apart.
  void Throttle() {
    const auto now = std::chrono::steady_clock::now();
    if (last_request_ && now - *last_request_ < options_.min_request_interval) {
      std::this_thread::sleep_for(options_.min_request_interval -
                                  (now - *last_request_));
    }
    last_request_ = std::chrono::steady_clock::now();
  }

  RemoteOptions options_;
  std::optional<std::chrono::steady_clock::time_point> last_request_;
};

inline RemoteFetch FetchRemoteTerms(const RemoteOptions& options,
                                    std::span<const std::string> terms) {
  return RemoteVectorSource(options).Fetch(terms);
}

// Every string ExtractTerms could look up for this token sequence, in first
// appearance order. Fetching these is enough to run extraction remotely.
inline std::vector<std::string> CandidateTerms(const TokenSeq& seq,
                                               std::size_t max_n) {
  std::vector<std::string> out;
  std::unordered_map<std::string, bool> seen;
  for (std::size_t pos = 0; pos < seq.size(); ++pos) {
    const std::size_t longest = text_internal::MaxSpan(seq, pos, max_n);
    for (std::size_t n = 1; n <= longest; ++n) {
      for (auto& form : text_internal::CandidateForms(seq, pos, n)) {
        if (seen.emplace(VocabularyKey(form), true).second) {
          out.push_back(std::move(form));
        }
      }
    }
  }
  return out;
}

}  // namespace termgraph
