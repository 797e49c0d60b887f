#include "curator/web_connector.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "curator/error.hpp"
#include "curator/json_codec.hpp"
#include "curator/text.hpp"

namespace curator::web {

using nlohmann::json;

namespace {

std::string query_key(std::string_view keywords) {
  std::string key;
  for (const auto& tok : search::tokenize(keywords)) {
    if (!key.empty()) key += ' ';
    key += tok;
  }
  return key;
}

const json* walk(const json& root, std::string_view dotted) {
  const json* node = &root;
  if (dotted.empty()) return node;
  for (const auto& part : text::split(dotted, '.')) {
    if (node->is_object()) {
      auto it = node->find(part);
      if (it == node->end()) return nullptr;
      node = &*it;
    } else if (node->is_array() && !part.empty() &&
               std::all_of(part.begin(), part.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      auto idx = std::stoul(part);
      if (idx >= node->size()) return nullptr;
      node = &(*node)[idx];
    } else {
      return nullptr;
    }
  }
  return node;
}

std::string string_at(const json& obj, std::string_view path) {
  const json* v = walk(obj, path);
  if (!v || !v->is_string()) return {};
  return v->get<std::string>();
}

void replace_all(std::string& s, std::string_view what, std::string_view with) {
  for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + with.size())) {
    s.replace(pos, what.size(), with);
  }
}

}  // namespace

// --- FixtureProvider -----------------------------------------------------------

FixtureProvider::FixtureProvider(std::string name, std::map<std::string, std::vector<LiveHit>> canned)
    : name_(std::move(name)) {
  for (auto& [q, hits] : canned) {
    for (auto& h : hits) h.provider = name_;
    canned_[query_key(q)] = std::move(hits);
  }
}

std::unique_ptr<FixtureProvider> FixtureProvider::from_json(const json& j) {
  std::map<std::string, std::vector<LiveHit>> canned;
  for (const auto& [q, hits] : j.at("queries").items()) {
    auto& list = canned[q];
    for (const auto& h : hits) {
      LiveHit hit;
      hit.url = h.at("url").get<std::string>();
      hit.title = string_or_empty(h, "title");
      hit.snippet = string_or_empty(h, "snippet");
      hit.media_type = parse_media_type(h.value("mediaType", std::string("webpage")));
      list.push_back(std::move(hit));
    }
  }
  return std::make_unique<FixtureProvider>(j.value("name", std::string("fixture")), std::move(canned));
}

std::vector<LiveHit> FixtureProvider::query(std::string_view keywords, MediaType media, std::size_t limit) {
  std::vector<LiveHit> out;
  auto it = canned_.find(query_key(keywords));
  if (it == canned_.end()) return out;
  for (const auto& h : it->second) {
    if (out.size() >= limit) break;
    if (h.media_type == media) out.push_back(h);
  }
  return out;
}

// --- HttpProvider ----------------------------------------------------------------

HttpProviderConfig HttpProviderConfig::from_json(const json& j) {
  HttpProviderConfig c;
  c.name = j.at("name").get<std::string>();
  c.endpoint_template = j.at("endpoint").get<std::string>();
  c.results_path = j.value("resultsPath", std::string());
  if (auto f = j.find("fields"); f != j.end()) {
    c.url_field = f->value("url", c.url_field);
    c.title_field = f->value("title", c.title_field);
    c.snippet_field = f->value("snippet", c.snippet_field);
  }
  c.api_key_header = j.value("apiKeyHeader", std::string());
  c.api_key_env = j.value("apiKeyEnv", std::string());
  c.timeout = std::chrono::milliseconds(j.value("timeoutMs", std::int64_t{5000}));
  return c;
}

HttpProvider::HttpProvider(HttpProviderConfig config, std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {}

std::string HttpProvider::request_url(std::string_view keywords, MediaType media, std::size_t limit) const {
  std::string url = config_.endpoint_template;
  replace_all(url, "{query}", url_encode_component(keywords));
  replace_all(url, "{limit}", std::to_string(limit));
  replace_all(url, "{mediaType}", to_string(media));
  return url;
}

std::vector<LiveHit> HttpProvider::query(std::string_view keywords, MediaType media, std::size_t limit) {
  if (limit == 0) return {};
  HeaderList headers;
  if (!config_.api_key_header.empty() && !config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key) throw Error(ErrorCode::ProviderUnavailable, "API key variable is not set", config_.api_key_env);
    headers.emplace_back(config_.api_key_header, key);
  }

  HttpResponse res;
  try {
    res = transport_->get(request_url(keywords, media, limit), headers);
  } catch (const Error& e) {
    throw Error(ErrorCode::ProviderUnavailable, e.what(), config_.name);
  }
  if (res.status < 200 || res.status >= 300) {
    throw Error(ErrorCode::ProviderUnavailable, "provider answered HTTP " + std::to_string(res.status), config_.name);
  }

  json body;
  try {
    body = json::parse(res.body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ProviderUnavailable, std::string("provider sent invalid JSON: ") + e.what(), config_.name);
  }
  const json* results = walk(body, config_.results_path);
  if (!results || !results->is_array()) {
    throw Error(ErrorCode::ProviderUnavailable, "results path does not name an array", config_.results_path);
  }

  std::vector<LiveHit> out;
  for (const auto& item : *results) {
    if (out.size() >= limit) break;
    LiveHit hit;
    hit.url = string_at(item, config_.url_field);
    if (hit.url.empty()) continue;
    hit.title = string_at(item, config_.title_field);
    hit.snippet = string_at(item, config_.snippet_field);
    hit.media_type = media;
    hit.provider = config_.name;
    out.push_back(std::move(hit));
  }
  return out;
}

std::shared_ptr<LiveProvider> load_provider_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open live provider config", path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Validation, std::string("bad live provider config: ") + e.what(), path);
  }
  auto kind = cfg.value("kind", std::string());
  if (kind == "fixture") {
    if (cfg.contains("queries")) return FixtureProvider::from_json(cfg);
    std::filesystem::path fixture = cfg.at("path").get<std::string>();
    if (fixture.is_relative()) fixture = std::filesystem::path(path).parent_path() / fixture;
    std::ifstream fin(fixture);
    if (!fin) throw Error(ErrorCode::NotFound, "cannot open live fixture", fixture.string());
    return FixtureProvider::from_json(json::parse(fin));
  }
  if (kind == "http") {
    auto config = HttpProviderConfig::from_json(cfg);
    auto timeout = config.timeout;
    return std::make_shared<HttpProvider>(std::move(config), std::make_shared<HttplibTransport>(timeout));
  }
  throw Error(ErrorCode::Validation, "live provider kind must be 'fixture' or 'http'", kind);
}

// --- WebConnector ------------------------------------------------------------------

WebConnector::WebConnector(std::shared_ptr<LiveProvider> provider, std::shared_ptr<capture::CaptureClient> captures)
    : provider_(std::move(provider)), captures_(std::move(captures)) {}

std::vector<LiveHit> WebConnector::query_live(std::string_view keywords, MediaType media, std::size_t limit) const {
  if (!provider_) throw Error(ErrorCode::ProviderUnavailable, "no live-web provider configured");
  if (limit == 0) return {};
  auto hits = provider_->query(keywords, media, limit);
  if (hits.size() > limit) hits.resize(limit);
  for (auto& h : hits) h.provider = provider_->name();
  return hits;
}

std::optional<ArchivalStatus> WebConnector::archival_status(std::string_view url) const {
  if (!captures_) throw Error(ErrorCode::UpstreamUnavailable, "no CDX endpoint configured");
  auto captures = captures_->fetch_captures(url);
  if (captures.empty()) return std::nullopt;
  return ArchivalStatus{captures.front().timestamp, captures.back().timestamp, captures.size()};
}

FederatedResult federate(search::SearchResult archived, const WebConnector& connector, std::string_view keywords,
                         const FederationOptions& options) {
  FederatedResult out;
  out.archived = std::move(archived);
  out.live_requested = options.include_live;
  if (!options.include_live) return out;

  std::vector<LiveHit> hits;
  try {
    hits = connector.query_live(keywords, options.media, options.live_limit);
  } catch (const Error& e) {
    out.live_unavailable = true;
    out.warning = e.what();
    return out;
  }
  for (auto& h : hits) {
    LiveEntry entry{std::move(h), std::nullopt, false};
    if (options.annotate_archival_status) {
      try {
        entry.status = connector.archival_status(entry.hit.url);
      } catch (const Error&) {
        entry.status_unavailable = true;
      }
    }
    out.live.push_back(std::move(entry));
  }
  return out;
}

}  // namespace curator::web
