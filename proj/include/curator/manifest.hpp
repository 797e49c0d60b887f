#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curator/domain.hpp"

namespace curator {

struct SeedRecord {
  std::string url;
  std::string title;
  std::string description;
  std::string author;
  std::vector<std::string> subjects;
  std::optional<Timestamp14> first_capture;
  std::optional<Timestamp14> last_capture;
  std::size_t line = 0;  // 1-based source line, 0 when built in memory

  friend bool operator==(const SeedRecord& a, const SeedRecord& b) {
    return a.url == b.url && a.title == b.title && a.description == b.description && a.author == b.author &&
           a.subjects == b.subjects && a.first_capture == b.first_capture && a.last_capture == b.last_capture;
  }
};

struct CollectionManifest {
  std::string collection_id;
  std::string title;
  std::string description;
  std::string collector_name;
  std::vector<SeedRecord> seeds;

  friend bool operator==(const CollectionManifest&, const CollectionManifest&) = default;
};

// Manifest files are UTF-8, one JSON object per line. The first non-blank line
// is the header {collectionId, title, description, collectorName}; every
// following line is a seed {url, title, description, author, subjects,
// firstCapture, lastCapture}. Unknown members are ignored.
//
// Throws ManifestSyntax for malformed lines and ManifestSemantic for missing
// required members or bad timestamps, both carrying the line number.
CollectionManifest parse_manifest(std::string_view bytes);

/// Canonical encoding; parse_manifest(format_manifest(m)) == m.
std::string format_manifest(const CollectionManifest& m);

CollectionManifest read_manifest_file(const std::string& path);

}  // namespace curator
