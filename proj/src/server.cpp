#include "curator/server.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include <httplib.h>

#include "curator/journal.hpp"
#include "curator/json_codec.hpp"
#include "curator/manifest.hpp"
#include "curator/text.hpp"

namespace curator {

using nlohmann::json;

// --- sessions ------------------------------------------------------------------

SessionTable parse_sessions(const json& j) {
  SessionTable out;
  for (const auto& t : j.at("tokens")) {
    Session s;
    s.token = t.at("token").get<std::string>();
    s.user = UserId(t.at("userId").get<std::string>());
    s.display_name = t.value("displayName", s.user.str());
    if (s.token.empty() || s.user.empty()) throw Error(ErrorCode::Validation, "token and userId must not be empty");
    if (!out.emplace(s.token, s).second) throw Error(ErrorCode::Validation, "duplicate token", s.user.str());
  }
  return out;
}

SessionTable load_sessions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open tokens file", path.string());
  try {
    return parse_sessions(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Validation, std::string("bad tokens file: ") + e.what(), path.string());
  }
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedUrl:
    case ErrorCode::BadTimestamp:
    case ErrorCode::InvalidTag:
    case ErrorCode::ManifestSyntax:
    case ErrorCode::BadQuery:
    case ErrorCode::EmptyBody:
    case ErrorCode::Validation:
      return 400;
    case ErrorCode::Unauthorized: return 401;
    case ErrorCode::ReadOnlyViolation:
    case ErrorCode::NotMember:
      return 403;
    case ErrorCode::NotFound: return 404;
    case ErrorCode::DuplicateCollection:
    case ErrorCode::DepthExceeded:
    case ErrorCode::DuplicateInGroup:
      return 409;
    case ErrorCode::ManifestSemantic: return 422;
    case ErrorCode::ProviderUnavailable:
    case ErrorCode::UpstreamUnavailable:
    case ErrorCode::CdxSyntax:
      return 502;
    case ErrorCode::StorageFailure: return 503;
    case ErrorCode::CorruptState:
    case ErrorCode::BindFailure:
      return 500;
  }
  return 500;
}

namespace {

// --- record encodings ------------------------------------------------------------

json error_body(std::string_view code, std::string_view message, std::string_view detail) {
  return json{{"code", code}, {"message", message}, {"detail", detail}};
}

json capture_json(const capture::Capture& c) {
  json j{{"urlkey", c.urlkey},   {"timestamp", c.timestamp}, {"original", c.original},
         {"mimeType", c.mime_type}, {"digest", c.digest},     {"length", c.length}};
  j["statusCode"] = c.status_code ? json(*c.status_code) : json(nullptr);
  return j;
}

json receipt_json(const capture::ArchiveRequestReceipt& r) {
  return json{{"requestedAt", to_millis(r.requested_at)}, {"targetUrl", r.target_url}, {"accepted", r.accepted}};
}

json summary_json(const CollectionSummary& s) {
  json j{{"id", s.id},
         {"title", s.title},
         {"description", s.description},
         {"resourceCount", s.resource_count},
         {"collectorName", s.collector_name}};
  j["capturePeriod"] = s.capture_period ? json(*s.capture_period) : json(nullptr);
  return j;
}

json group_summary_json(const Group& g) {
  json j{{"id", g.id},
         {"title", g.title},
         {"description", g.description},
         {"readOnly", g.read_only},
         {"resourceCount", g.resource_ids.size()}};
  j["parent"] = g.parent ? json(*g.parent) : json(nullptr);
  return j;
}

json facet_counts_json(const search::FacetCounts& counts) {
  json j = json::object();
  for (const auto& [dim, values] : counts) {
    json v = json::object();
    for (const auto& [value, n] : values) v[value] = n;
    j[std::string(search::to_string(dim))] = std::move(v);
  }
  return j;
}

json live_hit_json(const web::LiveHit& h) {
  return json{{"url", h.url},
              {"title", h.title},
              {"snippet", h.snippet},
              {"mediaType", to_string(h.media_type)},
              {"provider", h.provider}};
}

web::LiveHit live_hit_from_json(const json& j) {
  web::LiveHit h;
  h.url = j.at("url").get<std::string>();
  h.title = string_or_empty(j, "title");
  h.snippet = string_or_empty(j, "snippet");
  h.media_type = parse_media_type(j.value("mediaType", std::string("webpage")));
  h.provider = j.value("provider", std::string("live web"));
  return h;
}

// --- request helpers -----------------------------------------------------------------

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::Validation, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Validation, std::string("request body is not valid JSON: ") + e.what());
  }
}

std::string required_string(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) {
    throw Error(ErrorCode::Validation, std::string("'") + key + "' must be a string", key);
  }
  return it->get<std::string>();
}

std::size_t size_param(const httplib::Request& req, const char* key, std::size_t fallback, ErrorCode code) {
  if (!req.has_param(key)) return fallback;
  auto raw = req.get_param_value(key);
  if (raw.empty() || raw.size() > 9 ||
      !std::all_of(raw.begin(), raw.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(code, std::string(key) + " must be a non-negative integer", raw);
  }
  return static_cast<std::size_t>(std::stoul(raw));
}

bool bool_param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return false;
  auto v = text::fold_case(req.get_param_value(key));
  if (v == "true" || v == "1" || v.empty()) return true;
  if (v == "false" || v == "0") return false;
  throw Error(ErrorCode::BadQuery, std::string(key) + " must be true or false", v);
}

// Values of a list parameter given either repeated or comma-separated.
std::vector<std::string> list_param(const httplib::Request& req, const char* key) {
  std::vector<std::string> out;
  auto n = req.get_param_value_count(key);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& part : text::split(req.get_param_value(key, i), ',')) {
      auto t = text::trim(part);
      if (!t.empty()) out.push_back(std::move(t));
    }
  }
  return out;
}

std::pair<std::string, std::string> split_pair(const std::string& item) {
  auto colon = item.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::BadQuery, "expected name:value", item);
  return {text::trim(std::string_view(item).substr(0, colon)), text::trim(std::string_view(item).substr(colon + 1))};
}

search::SearchQuery parse_search_query(const httplib::Request& req) {
  search::SearchQuery q;
  q.keywords = req.get_param_value("q");
  for (const auto& item : list_param(req, "facets")) {
    auto [dim, value] = split_pair(item);
    auto d = search::parse_facet_dimension(dim);
    q.facets.insert({d, search::normalize_facet_value(d, value)});
  }
  for (const auto& item : list_param(req, "scope")) {
    auto [name, value] = split_pair(item);
    if (name == "collection" || name == "group") {
      if (!q.scope.collections) q.scope.collections.emplace();
      q.scope.collections->insert(GroupId(value));
    } else if (name == "domain") {
      q.scope.domain = value;
    } else if (name == "pathPrefix") {
      q.scope.path_prefix = value;
    } else if (name == "titleOnly") {
      q.scope.title_only = value == "true" || value == "1";
    } else {
      throw Error(ErrorCode::BadQuery, "unknown scope '" + name + "'", item);
    }
  }
  q.page = size_param(req, "page", 1, ErrorCode::BadQuery);
  q.page_size = size_param(req, "pageSize", search::kDefaultPageSize, ErrorCode::BadQuery);
  return q;
}

MetadataPatch parse_patch(const json& body) {
  MetadataPatch p;
  auto opt = [&](const char* key, std::optional<std::string>& out) {
    if (auto it = body.find(key); it != body.end()) {
      if (!it->is_string()) throw Error(ErrorCode::Validation, std::string("'") + key + "' must be a string", key);
      out = it->get<std::string>();
    }
  };
  opt("title", p.title);
  opt("description", p.description);
  opt("author", p.author);
  if (auto it = body.find("customFields"); it != body.end()) {
    if (!it->is_object()) throw Error(ErrorCode::Validation, "'customFields' must be an object");
    for (const auto& [k, v] : it->items()) {
      if (v.is_null()) {
        p.custom_fields[k] = std::nullopt;
      } else if (v.is_string()) {
        p.custom_fields[k] = v.get<std::string>();
      } else {
        throw Error(ErrorCode::Validation, "custom field values must be strings or null", k);
      }
    }
  }
  return p;
}

}  // namespace

// --- server ---------------------------------------------------------------------------

struct ApiServer::Impl {
  ServiceDeps deps;
  web::WebConnector connector;
  httplib::Server http;

  explicit Impl(ServiceDeps d)
      : deps(std::move(d)), connector(deps.live_provider, deps.captures) {
    if (!deps.liveness) deps.liveness = std::make_shared<linkrot::HttpLivenessChecker>(std::make_shared<HttplibTransport>());
    for (const auto& [_, s] : deps.sessions) deps.workspace->register_user(s.user, s.display_name);
    routes();
  }

  Workspace& ws() { return *deps.workspace; }

  const Session& authenticate(const httplib::Request& req) const {
    auto header = req.get_header_value("Authorization");
    constexpr std::string_view kBearer = "Bearer ";
    if (header.size() > kBearer.size() && text::starts_with_ci(header, kBearer)) {
      auto it = deps.sessions.find(text::trim(std::string_view(header).substr(kBearer.size())));
      if (it != deps.sessions.end()) return it->second;
    }
    throw Error(ErrorCode::Unauthorized, "missing or unknown bearer token");
  }

  static void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&, const Session&)>;

  // Authenticates, runs the handler and converts failures to {code, message, detail}.
  httplib::Server::Handler guarded(Handler h) {
    return [this, h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        const auto& session = authenticate(req);
        h(req, res, session);
      } catch (const Error& e) {
        send_json(res, http_status(e.code()), error_body(to_string(e.code()), e.what(), e.detail()));
      } catch (const json::exception& e) {
        send_json(res, 400, error_body(to_string(ErrorCode::Validation), e.what(), ""));
      } catch (const std::exception& e) {
        send_json(res, 500, error_body("Internal", e.what(), ""));
      }
    };
  }

  json resource_view(const Resource& r) {
    json j = r;
    auto gid = ws().group_of(r.id);
    j["group"] = gid;
    j["readOnly"] = ws().group(gid).read_only;
    json receipts = json::array();
    for (const auto& rc : ws().archive_receipts(r.id)) receipts.push_back(receipt_json(rc));
    j["archiveReceipts"] = std::move(receipts);
    auto ann = ws().crawl_annotation(r.id, gid);
    j["crawlAnnotation"] = ann ? json(*ann) : json(nullptr);
    return j;
  }

  void routes() {
    http.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, json{{"status", "ok"}, {"schemaVersion", kSchemaVersion}});
    });

    http.Get("/collections", guarded([this](const httplib::Request&, httplib::Response& res, const Session&) {
      json items = json::array();
      for (const auto& s : ws().list_collections()) items.push_back(summary_json(s));
      send_json(res, 200, json{{"collections", std::move(items)}});
    }));

    http.Post("/collections/import", guarded([this](const httplib::Request& req, httplib::Response& res, const Session&) {
      auto report = ws().import_collection(parse_manifest(req.body));
      json rejected = json::array();
      for (const auto& r : report.rejected) {
        rejected.push_back({{"line", r.line}, {"url", r.url}, {"reason", r.reason}});
      }
      send_json(res, 201, json{{"group", report.group}, {"imported", report.imported}, {"rejected", rejected}});
    }));

    http.Get("/search", guarded([this](const httplib::Request& req, httplib::Response& res, const Session&) { search(req, res); }));

    http.Get("/groups", guarded([this](const httplib::Request&, httplib::Response& res, const Session&) {
      json items = json::array();
      for (const auto& g : ws().groups()) items.push_back(group_summary_json(g));
      send_json(res, 200, json{{"groups", std::move(items)}});
    }));

    http.Post("/groups", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      auto body = parse_body(req);
      auto id = ws().create_group(s.user, required_string(body, "title"), body.value("description", std::string()));
      send_json(res, 201, json{{"group", id}});
    }));

    http.Get("/groups/:id", guarded([this](const httplib::Request& req, httplib::Response& res, const Session&) {
      GroupId id(req.path_params.at("id"));
      auto g = ws().group(id);
      auto page = size_param(req, "page", 1, ErrorCode::Validation);
      auto page_size = size_param(req, "pageSize", search::kDefaultPageSize, ErrorCode::Validation);
      if (page == 0 || page_size == 0 || page_size > search::kMaxPageSize) {
        throw Error(ErrorCode::Validation, "page must be >= 1 and pageSize within 1..100");
      }
      auto resources = ws().group_resources(id);
      json items = json::array();
      for (std::size_t i = (page - 1) * page_size; i < resources.size() && items.size() < page_size; ++i) {
        items.push_back(resources[i]);
      }
      json j = g;
      j.erase("activity");
      j["subgroups"] = ws().subgroups(id);
      j["resources"] = {{"items", std::move(items)}, {"page", page}, {"pageSize", page_size}, {"total", resources.size()}};
      send_json(res, 200, j);
    }));

    http.Post("/groups/:id/subgroups", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      auto body = parse_body(req);
      auto id = ws().create_subgroup(GroupId(req.path_params.at("id")), s.user, required_string(body, "title"));
      send_json(res, 201, json{{"group", id}});
    }));

    http.Post("/groups/:id/members", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      ws().join_group(GroupId(req.path_params.at("id")), s.user);
      send_json(res, 200, json{{"joined", true}});
    }));

    http.Delete("/groups/:id/members", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      ws().leave_group(GroupId(req.path_params.at("id")), s.user);
      send_json(res, 200, json{{"left", true}});
    }));

    http.Post("/groups/:id/resources", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      auto body = parse_body(req);
      ResourceSource source;
      if (body.contains("resourceId")) {
        source = ResourceId(required_string(body, "resourceId"));
      } else if (body.contains("liveHit")) {
        source = live_hit_from_json(body.at("liveHit"));
      } else if (body.contains("upload")) {
        const auto& u = body.at("upload");
        source = Upload{u.at("url").get<std::string>(), string_or_empty(u, "title"), string_or_empty(u, "description"),
                        string_or_empty(u, "author"), parse_media_type(u.value("mediaType", std::string("webpage")))};
      } else {
        throw Error(ErrorCode::Validation, "body needs one of resourceId, liveHit, upload");
      }
      auto id = ws().add_resource(GroupId(req.path_params.at("id")), s.user, source);
      send_json(res, 201, json{{"resource", id}});
    }));

    http.Delete("/groups/:id/resources/:rid", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      ws().remove_resource(GroupId(req.path_params.at("id")), ResourceId(req.path_params.at("rid")), s.user);
      send_json(res, 200, json{{"removed", true}});
    }));

    http.Post("/groups/:id/merge", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      auto body = parse_body(req);
      std::vector<GroupId> sources{GroupId(req.path_params.at("id"))};
      for (const auto& src : body.at("sources")) sources.push_back(src.get<GroupId>());
      auto result = ws().merge_groups(sources, s.user, required_string(body, "title"));
      send_json(res, 201, json{{"group", result.group}, {"duplicatesDropped", result.duplicates_dropped}});
    }));

    http.Post("/groups/:id/copy", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      auto body = parse_body(req);
      auto id = ws().copy_group(GroupId(req.path_params.at("id")), s.user, required_string(body, "title"));
      send_json(res, 201, json{{"group", id}});
    }));

    http.Get("/groups/:id/export", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      auto format = parse_export_format(req.has_param("format") ? req.get_param_value("format") : "manifest");
      auto text = ws().export_group(GroupId(req.path_params.at("id")), format, s.user);
      res.status = 200;
      res.set_content(text, "application/x-ndjson");
    }));

    http.Get("/groups/:id/activity", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      auto limit = size_param(req, "limit", 50, ErrorCode::Validation);
      auto feed = ws().activity_feed(GroupId(req.path_params.at("id")), s.user, limit);
      send_json(res, 200, json{{"events", feed}});
    }));

    http.Post("/resources/bulk/tag", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      auto body = parse_body(req);
      auto ids = body.at("resources").get<std::vector<ResourceId>>();
      auto report = ws().bulk_tag(ids, required_string(body, "tag"), s.user);
      json errors = json::array();
      for (const auto& e : report.errors) {
        errors.push_back({{"resource", e.resource}, {"code", to_string(e.code)}, {"message", e.message}});
      }
      send_json(res, 200, json{{"applied", report.applied}, {"errors", std::move(errors)}});
    }));

    http.Get("/tags/:label/group", guarded([this](const httplib::Request& req, httplib::Response& res, const Session&) {
      const auto& label = req.path_params.at("label");
      send_json(res, 200, json{{"tag", Tag(label).label()}, {"resources", ws().resources_with_tag(label)}});
    }));

    http.Post("/tags/:label/group", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      auto body = parse_body(req);
      const auto& label = req.path_params.at("label");
      auto title = body.value("title", "Tag: " + Tag(label).label());
      send_json(res, 201, json{{"group", ws().group_by_tag(label, s.user, title)}});
    }));

    http.Get("/resources/:id", guarded([this](const httplib::Request& req, httplib::Response& res, const Session&) {
      send_json(res, 200, resource_view(ws().resource(ResourceId(req.path_params.at("id")))));
    }));

    http.Post("/resources/:id/move", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      auto body = parse_body(req);
      ws().move_resource(ResourceId(req.path_params.at("id")), GroupId(required_string(body, "from")),
                         GroupId(required_string(body, "to")), s.user);
      send_json(res, 200, json{{"moved", true}});
    }));

    http.Post("/resources/:id/tags", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      auto body = parse_body(req);
      ws().add_tag(ResourceId(req.path_params.at("id")), required_string(body, "tag"), s.user);
      send_json(res, 200, json{{"tags", ws().resource(ResourceId(req.path_params.at("id"))).tags}});
    }));

    http.Delete("/resources/:id/tags/:label", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      ws().remove_tag(ResourceId(req.path_params.at("id")), req.path_params.at("label"), s.user);
      send_json(res, 200, json{{"tags", ws().resource(ResourceId(req.path_params.at("id"))).tags}});
    }));

    http.Post("/resources/:id/comments", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      auto body = parse_body(req);
      auto id = ws().add_comment(ResourceId(req.path_params.at("id")), required_string(body, "body"), s.user);
      send_json(res, 201, json{{"comment", id}});
    }));

    http.Patch("/resources/:id/metadata", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      ResourceId id(req.path_params.at("id"));
      ws().edit_metadata(id, parse_patch(parse_body(req)), s.user);
      send_json(res, 200, resource_view(ws().resource(id)));
    }));

    http.Put("/resources/:id/crawl-annotation", guarded([this](const httplib::Request& req, httplib::Response& res, const Session& s) {
      ResourceId id(req.path_params.at("id"));
      auto body = parse_body(req);
      auto group = body.contains("group") ? GroupId(required_string(body, "group")) : ws().group_of(id);
      auto annotation = body.get<CrawlAnnotation>();
      ws().set_crawl_annotation(id, group, annotation, s.user);
      send_json(res, 200, json{{"group", group}, {"annotation", annotation}});
    }));

    http.Get("/resources/:id/captures", guarded([this](const httplib::Request& req, httplib::Response& res, const Session&) {
      auto granularity = capture::parse_granularity(
          req.has_param("granularity") ? req.get_param_value("granularity") : std::string("year"));
      auto r = ws().resource(ResourceId(req.path_params.at("id")));
      if (!deps.captures) throw Error(ErrorCode::UpstreamUnavailable, "no CDX endpoint configured");
      auto captures = deps.captures->fetch_captures(r.url.str());
      auto timeline = capture::build_timeline(captures, granularity);
      json list = json::array();
      for (const auto& c : captures) list.push_back(capture_json(c));
      json bins = json::array();
      for (const auto& b : timeline.bins) bins.push_back({{"period", b.period}, {"count", b.count}});
      send_json(res, 200, json{{"captures", std::move(list)},
                               {"timeline", {{"granularity", to_string(granularity)}, {"bins", std::move(bins)}}}});
    }));

    http.Post("/resources/:id/archive-now", guarded([this](const httplib::Request& req, httplib::Response& res, const Session&) {
      ResourceId id(req.path_params.at("id"));
      auto r = ws().resource(id);
      if (!deps.captures) throw Error(ErrorCode::UpstreamUnavailable, "no save endpoint configured");
      auto outcome = deps.captures->archive_now(r.original_url.empty() ? r.url.str() : r.original_url);
      if (outcome.fresh) ws().record_archive_receipt(id, outcome.receipt);
      send_json(res, 200, json{{"receipt", receipt_json(outcome.receipt)}, {"fresh", outcome.fresh}});
    }));

    http.Post("/audits/link-rot", guarded([this](const httplib::Request& req, httplib::Response& res, const Session&) {
      auto body = parse_body(req);
      std::vector<linkrot::SeedInput> seeds;
      for (const auto& s : body.at("seeds")) {
        seeds.push_back({s.at("url").get<std::string>(), s.at("category").get<std::string>()});
      }
      auto report = linkrot::audit_liveness(seeds, *deps.liveness, deps.audit_options);
      ws().record_liveness(report);
      json categories = json::object();
      for (const auto& [name, t] : report.categories) {
        categories[name] = {{"total", t.total}, {"alive", t.alive}, {"percentAlive", t.percent_alive}};
      }
      json rows = json::array();
      for (const auto& o : report.per_seed) {
        rows.push_back({{"url", o.url}, {"category", o.category}, {"status", linkrot::to_string(o.status)}});
      }
      send_json(res, 200, json{{"categories", std::move(categories)}, {"seeds", std::move(rows)}});
    }));
  }

  void search(const httplib::Request& req, httplib::Response& res) {
    auto q = parse_search_query(req);
    auto media = req.has_param("mediaType") ? parse_media_type(req.get_param_value("mediaType")) : MediaType::webpage;
    web::FederationOptions fed;
    fed.include_live = bool_param(req, "includeLive");
    fed.media = media;

    auto result = web::federate(ws().search(q), connector, q.keywords, fed);

    const auto& params = ws().search_params();
    json hits = json::array();
    for (const auto& h : result.archived.hits) {
      auto r = ws().find_resource(h.resource);
      if (!r) continue;
      json j{{"resource", *r}, {"score", h.score}, {"badge", h.source_badge}, {"group", ws().group_of(h.resource)}};
      if (h.capture) {
        j["capture"] = {{"first", h.capture->first}, {"last", h.capture->last}};
        if (h.capture->count) j["capture"]["count"] = *h.capture->count;
      } else {
        j["capture"] = nullptr;
      }
      hits.push_back(std::move(j));
    }
    json live = json::array();
    for (const auto& e : result.live) {
      json j = live_hit_json(e.hit);
      j["badge"] = "Live web: " + e.hit.provider;
      if (e.status) {
        j["archival"] = {{"first", e.status->first_capture},
                         {"last", e.status->last_capture},
                         {"count", e.status->capture_count}};
      } else {
        j["archival"] = nullptr;
      }
      j["archivalStatusUnavailable"] = e.status_unavailable;
      live.push_back(std::move(j));
    }
    json body{{"ranking",
               {{"model", "bm25f"},
                {"k1", params.k1},
                {"b", params.b},
                {"weights",
                 {{"title", params.field_weights[0]},
                  {"tags", params.field_weights[1]},
                  {"description", params.field_weights[2]},
                  {"author", params.field_weights[3]}}}}},
              {"hits", std::move(hits)},
              {"live", std::move(live)},
              {"liveRequested", result.live_requested},
              {"liveUnavailable", result.live_unavailable},
              {"facetCounts", facet_counts_json(result.archived.facet_counts)},
              {"total", result.archived.total},
              {"page", q.page},
              {"pageSize", q.page_size}};
    body["warning"] = result.warning.empty() ? json(nullptr) : json(result.warning);
    send_json(res, 200, body);
  }

};

ApiServer::ApiServer(ServiceDeps deps) : impl_(std::make_unique<Impl>(std::move(deps))) {}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->http.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::BindFailure, "cannot bind an ephemeral port", host);
  } else if (!impl_->http.bind_to_port(host, port)) {
    throw Error(ErrorCode::BindFailure, "cannot bind " + host + ":" + std::to_string(port), std::to_string(port));
  }
  return bound;
}

void ApiServer::run() { impl_->http.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_) impl_->http.stop();
}

void ApiServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

ServiceDeps make_service(const ServiceConfig& config) {
  ServiceDeps deps;
  deps.sessions = load_sessions(config.tokens_file);
  deps.workspace = std::shared_ptr<Workspace>(open_workspace(config.data_dir).release());
  capture::CaptureClientConfig cc;
  cc.cdx_endpoint = config.cdx_endpoint.value_or("");
  cc.save_endpoint = config.save_endpoint.value_or("");
  deps.captures = std::make_shared<capture::CaptureClient>(cc, std::make_shared<HttplibTransport>(), system_clock());
  if (config.live_provider_config) deps.live_provider = web::load_provider_config(config.live_provider_config->string());
  return deps;
}

}  // namespace curator
