#include "curator/json_codec.hpp"

#include "curator/error.hpp"

namespace curator {

std::string string_or_empty(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  return it->get<std::string>();
}

void to_json(json& j, const NormalizedUrl& u) { j = u.str(); }
void from_json(const json& j, NormalizedUrl& u) { u = normalize_url(j.get<std::string>()); }

void to_json(json& j, const Timestamp14& t) { j = t.str(); }
Timestamp14 timestamp_from_json(const json& j) { return Timestamp14::parse(j.get<std::string>()); }

void to_json(json& j, const Tag& t) { j = t.label(); }

void to_json(json& j, const CapturePeriod& p) { j = json{{"first", p.first}, {"last", p.last}}; }

CapturePeriod capture_period_from_json(const json& j) {
  return CapturePeriod{timestamp_from_json(j.at("first")), timestamp_from_json(j.at("last"))};
}

void to_json(json& j, const SourceProvenance& s) {
  j = json{{"kind", to_string(s.kind)}, {"collectorName", s.collector_name}, {"provider", s.provider}};
  if (s.kind == SourceKind::archiveCollection) j["collectionId"] = s.collection_id;
  if (s.capture_period) j["capturePeriod"] = *s.capture_period;
}

void from_json(const json& j, SourceProvenance& s) {
  s.kind = parse_source_kind(j.at("kind").get<std::string>());
  s.collection_id = string_or_empty(j, "collectionId");
  s.collector_name = string_or_empty(j, "collectorName");
  s.provider = string_or_empty(j, "provider");
  s.capture_period.reset();
  if (auto it = j.find("capturePeriod"); it != j.end() && !it->is_null()) {
    s.capture_period = capture_period_from_json(*it);
  }
}

void to_json(json& j, const ThumbnailState& t) {
  switch (t.kind) {
    case ThumbnailState::Kind::available:
      j = json{{"state", "available"}, {"imageRef", t.image_ref}};
      break;
    case ThumbnailState::Kind::deadPage:
      j = json{{"state", "deadPage"}, {"text", kDeadPagePlaceholder}};
      break;
    case ThumbnailState::Kind::pending:
      j = json{{"state", "pending"}};
      break;
  }
}

void from_json(const json& j, ThumbnailState& t) {
  auto state = j.at("state").get<std::string>();
  t.image_ref.clear();
  if (state == "available") {
    t.kind = ThumbnailState::Kind::available;
    t.image_ref = string_or_empty(j, "imageRef");
  } else if (state == "deadPage") {
    t.kind = ThumbnailState::Kind::deadPage;
  } else if (state == "pending") {
    t.kind = ThumbnailState::Kind::pending;
  } else {
    throw Error(ErrorCode::Validation, "unknown thumbnail state", state);
  }
}

void to_json(json& j, const Comment& c) {
  j = json{{"id", c.id}, {"author", c.author}, {"body", c.body}, {"createdAt", to_millis(c.created_at)}};
}

void from_json(const json& j, Comment& c) {
  c.id = j.at("id").get<CommentId>();
  c.author = j.at("author").get<UserId>();
  c.body = j.at("body").get<std::string>();
  c.created_at = from_millis(j.at("createdAt").get<std::int64_t>());
}

void to_json(json& j, const Resource& r) {
  json tags = json::array();
  for (const auto& t : r.tags) tags.push_back(t.label());
  j = json{{"id", r.id},
           {"url", r.url},
           {"originalUrl", r.original_url},
           {"title", r.title},
           {"description", r.description},
           {"author", r.author},
           {"mediaType", to_string(r.media_type)},
           {"source", r.source},
           {"tags", std::move(tags)},
           {"comments", r.comments},
           {"customFields", r.custom_fields},
           {"thumbnail", r.thumbnail},
           {"createdBy", r.created_by},
           {"createdAt", to_millis(r.created_at)}};
}

void from_json(const json& j, Resource& r) {
  r.id = j.at("id").get<ResourceId>();
  r.url = j.at("url").get<NormalizedUrl>();
  r.original_url = string_or_empty(j, "originalUrl");
  r.title = string_or_empty(j, "title");
  r.description = string_or_empty(j, "description");
  r.author = string_or_empty(j, "author");
  r.media_type = parse_media_type(j.value("mediaType", std::string("webpage")));
  r.source = j.at("source").get<SourceProvenance>();
  r.tags.clear();
  for (const auto& t : j.value("tags", json::array())) r.tags.insert(Tag(t.get<std::string>()));
  r.comments = j.value("comments", json::array()).get<std::vector<Comment>>();
  r.custom_fields = j.value("customFields", json::object()).get<std::map<std::string, std::string>>();
  r.thumbnail = j.contains("thumbnail") ? j.at("thumbnail").get<ThumbnailState>() : ThumbnailState{};
  r.created_by = UserId(string_or_empty(j, "createdBy"));
  r.created_at = from_millis(j.value("createdAt", std::int64_t{0}));
}

}  // namespace curator
