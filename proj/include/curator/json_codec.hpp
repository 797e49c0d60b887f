#pragma once

#include <nlohmann/json.hpp>

#include "curator/domain.hpp"

// Record encodings shared by persistence, export and the HTTP API.
namespace curator {

using nlohmann::json;

template <class Kind>
void to_json(json& j, const Id<Kind>& id) {
  j = id.str();
}
template <class Kind>
void from_json(const json& j, Id<Kind>& id) {
  id = Id<Kind>(j.get<std::string>());
}

void to_json(json& j, const NormalizedUrl& u);
void from_json(const json& j, NormalizedUrl& u);
void to_json(json& j, const Timestamp14& t);
void to_json(json& j, const Tag& t);
void to_json(json& j, const CapturePeriod& p);
void to_json(json& j, const SourceProvenance& s);
void from_json(const json& j, SourceProvenance& s);
void to_json(json& j, const ThumbnailState& t);
void from_json(const json& j, ThumbnailState& t);
void to_json(json& j, const Comment& c);
void from_json(const json& j, Comment& c);
void to_json(json& j, const Resource& r);
void from_json(const json& j, Resource& r);

Timestamp14 timestamp_from_json(const json& j);
CapturePeriod capture_period_from_json(const json& j);

/// Reads an optional string member, defaulting to empty.
std::string string_or_empty(const json& j, const char* key);

}  // namespace curator
