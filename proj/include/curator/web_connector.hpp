#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "curator/capture.hpp"
#include "curator/domain.hpp"
#include "curator/http_transport.hpp"
#include "curator/search.hpp"

namespace curator::web {

struct LiveHit {
  std::string url;
  std::string title;
  std::string snippet;
  MediaType media_type = MediaType::webpage;
  std::string provider;
  friend bool operator==(const LiveHit&, const LiveHit&) = default;
};

class LiveProvider {
 public:
  virtual ~LiveProvider() = default;
  virtual std::string name() const = 0;
  /// Throws ProviderUnavailable on any failure.
  virtual std::vector<LiveHit> query(std::string_view keywords, MediaType media, std::size_t limit) = 0;
};

/// Canned hits keyed by the tokenized query ("occupy wall street").
///
/// Fixture file:
///   {"name": "fixture", "queries": {"occupy": [{"url": ..., "title": ...,
///    "snippet": ..., "mediaType": "webpage"}]}}
class FixtureProvider : public LiveProvider {
 public:
  FixtureProvider(std::string name, std::map<std::string, std::vector<LiveHit>> canned);
  static std::unique_ptr<FixtureProvider> from_json(const nlohmann::json& j);

  std::string name() const override { return name_; }
  std::vector<LiveHit> query(std::string_view keywords, MediaType media, std::size_t limit) override;

 private:
  std::string name_;
  std::map<std::string, std::vector<LiveHit>> canned_;
};

/// Generic JSON search API. The endpoint template may contain {query},
/// {limit} and {mediaType}; field paths are dotted member paths into the
/// response ("webPages.value").
struct HttpProviderConfig {
  std::string name;
  std::string endpoint_template;
  std::string results_path;
  std::string url_field = "url";
  std::string title_field = "title";
  std::string snippet_field = "snippet";
  std::string api_key_header;
  std::string api_key_env;
  std::chrono::milliseconds timeout = std::chrono::seconds(5);

  static HttpProviderConfig from_json(const nlohmann::json& j);
};

class HttpProvider : public LiveProvider {
 public:
  HttpProvider(HttpProviderConfig config, std::shared_ptr<HttpTransport> transport);

  std::string name() const override { return config_.name; }
  std::vector<LiveHit> query(std::string_view keywords, MediaType media, std::size_t limit) override;

  std::string request_url(std::string_view keywords, MediaType media, std::size_t limit) const;

 private:
  HttpProviderConfig config_;
  std::shared_ptr<HttpTransport> transport_;
};

/// Builds a provider from a config file: {"kind": "fixture", ...} or
/// {"kind": "http", ...}. Relative fixture paths resolve against the file.
std::shared_ptr<LiveProvider> load_provider_config(const std::string& path);

struct ArchivalStatus {
  Timestamp14 first_capture;
  Timestamp14 last_capture;
  std::size_t capture_count = 0;
};

class WebConnector {
 public:
  WebConnector(std::shared_ptr<LiveProvider> provider, std::shared_ptr<capture::CaptureClient> captures);

  bool has_provider() const { return provider_ != nullptr; }

  /// Throws ProviderUnavailable when no provider is configured or it fails.
  std::vector<LiveHit> query_live(std::string_view keywords, MediaType media, std::size_t limit) const;

  /// Empty when the URL was never captured. Throws UpstreamUnavailable.
  std::optional<ArchivalStatus> archival_status(std::string_view url) const;

 private:
  std::shared_ptr<LiveProvider> provider_;
  std::shared_ptr<capture::CaptureClient> captures_;
};

struct LiveEntry {
  LiveHit hit;
  std::optional<ArchivalStatus> status;
  bool status_unavailable = false;
};

struct FederatedResult {
  search::SearchResult archived;
  std::vector<LiveEntry> live;  // appended after the archived hits
  bool live_requested = false;
  bool live_unavailable = false;
  std::string warning;
};

struct FederationOptions {
  bool include_live = false;
  MediaType media = MediaType::webpage;
  std::size_t live_limit = search::kDefaultPageSize;
  bool annotate_archival_status = true;
};

/// Archived hits are kept as-is; live hits, when requested, are appended and
/// annotated. Provider failure only sets live_unavailable and a warning.
FederatedResult federate(search::SearchResult archived, const WebConnector& connector, std::string_view keywords,
                         const FederationOptions& options);

}  // namespace curator::web
