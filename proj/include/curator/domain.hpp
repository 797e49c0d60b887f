#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace curator {

/// Opaque string identifier, distinct per entity kind.
template <class Kind>
class Id {
 public:
  Id() = default;
  explicit Id(std::string value) : value_(std::move(value)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const Id&, const Id&) = default;
  friend bool operator==(const Id&, const Id&) = default;

 private:
  std::string value_;
};

using ResourceId = Id<struct ResourceKind>;
using GroupId = Id<struct GroupKind>;
using UserId = Id<struct UserKind>;
using CommentId = Id<struct CommentKind>;

using Instant = std::chrono::sys_time<std::chrono::milliseconds>;

std::int64_t to_millis(Instant t);
Instant from_millis(std::int64_t ms);

// --- URLs ------------------------------------------------------------------

/// Canonical URL used as the dedup key across the service. The scheme and host
/// are lowercase, default ports and the fragment are dropped, non-root paths
/// never end in '/', and the query string is kept verbatim.
struct NormalizedUrl {
  std::string scheme;
  std::string host;
  std::optional<std::uint16_t> port;
  std::string path = "/";
  std::string query;

  std::string str() const;

  friend bool operator==(const NormalizedUrl&, const NormalizedUrl&) = default;
  friend auto operator<=>(const NormalizedUrl& a, const NormalizedUrl& b) { return a.str() <=> b.str(); }
};

NormalizedUrl normalize_url(std::string_view raw);

// --- Capture timestamps -----------------------------------------------------

/// yyyyMMddHHmmss, UTC, year >= 1996.
class Timestamp14 {
 public:
  Timestamp14() : value_("19960101000000") {}

  static Timestamp14 parse(std::string_view s);
  static Timestamp14 from_time(std::chrono::sys_seconds t);

  const std::string& str() const noexcept { return value_; }
  int year() const;
  unsigned month() const;
  unsigned day() const;
  std::chrono::sys_seconds time() const;

  friend auto operator<=>(const Timestamp14&, const Timestamp14&) = default;
  friend bool operator==(const Timestamp14&, const Timestamp14&) = default;

 private:
  explicit Timestamp14(std::string v) : value_(std::move(v)) {}
  std::string value_;
};

inline Timestamp14 parse_timestamp14(std::string_view s) { return Timestamp14::parse(s); }

// --- Tags -------------------------------------------------------------------

inline constexpr std::size_t kMaxTagLength = 64;

/// Trimmed, case-folded label; throws InvalidTag when empty or too long.
std::string normalize_tag(std::string_view raw);

class Tag {
 public:
  explicit Tag(std::string_view raw) : label_(normalize_tag(raw)) {}
  const std::string& label() const noexcept { return label_; }

  friend auto operator<=>(const Tag&, const Tag&) = default;
  friend bool operator==(const Tag&, const Tag&) = default;

 private:
  std::string label_;
};

// --- Resources --------------------------------------------------------------

enum class MediaType { webpage, image, video };
enum class SourceKind { archiveCollection, liveWeb, upload };

std::string_view to_string(MediaType m);
std::string_view to_string(SourceKind k);
MediaType parse_media_type(std::string_view s);
SourceKind parse_source_kind(std::string_view s);

struct CapturePeriod {
  Timestamp14 first;
  Timestamp14 last;
  friend bool operator==(const CapturePeriod&, const CapturePeriod&) = default;
};

struct SourceProvenance {
  SourceKind kind = SourceKind::upload;
  std::string collection_id;  // set iff kind == archiveCollection
  std::string collector_name;
  // Originating provider: the collection title, the live-web provider name,
  // or "upload". Drives the "service" facet and the result badge.
  std::string provider;
  std::optional<CapturePeriod> capture_period;

  friend bool operator==(const SourceProvenance&, const SourceProvenance&) = default;
};

inline constexpr std::string_view kDeadPagePlaceholder = "The page is no longer available on the web";

struct ThumbnailState {
  enum class Kind { available, deadPage, pending };
  Kind kind = Kind::pending;
  std::string image_ref;  // only for available

  std::string_view display_text() const;
  friend bool operator==(const ThumbnailState&, const ThumbnailState&) = default;
};

struct Comment {
  CommentId id;
  UserId author;
  std::string body;
  Instant created_at;
  friend bool operator==(const Comment&, const Comment&) = default;
};

struct Resource {
  ResourceId id;
  NormalizedUrl url;
  std::string original_url;
  std::string title;
  std::string description;
  std::string author;
  MediaType media_type = MediaType::webpage;
  SourceProvenance source;
  std::set<Tag> tags;
  std::vector<Comment> comments;
  std::map<std::string, std::string> custom_fields;
  ThumbnailState thumbnail;
  UserId created_by;
  Instant created_at;

  bool has_tag(const Tag& t) const { return tags.contains(t); }
  friend bool operator==(const Resource&, const Resource&) = default;
};

}  // namespace curator

template <class Kind>
struct std::hash<curator::Id<Kind>> {
  std::size_t operator()(const curator::Id<Kind>& id) const noexcept { return std::hash<std::string>{}(id.str()); }
};
