#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "curator/capture.hpp"
#include "curator/clock.hpp"
#include "curator/domain.hpp"
#include "curator/error.hpp"
#include "curator/linkrot.hpp"
#include "curator/manifest.hpp"
#include "curator/search.hpp"
#include "curator/web_connector.hpp"

namespace curator {

using nlohmann::json;

enum class Role { owner, member };

enum class ActivityKind {
  resourceAdded,
  resourceEdited,
  resourceDeleted,
  resourceMoved,
  memberJoined,
  memberLeft,
  groupCreated,
  commentAdded,
  tagAdded,
};
std::string_view to_string(ActivityKind k);
ActivityKind parse_activity_kind(std::string_view s);

struct ActivityEvent {
  UserId actor;
  ActivityKind kind = ActivityKind::groupCreated;
  std::string target;
  Instant at;
  friend bool operator==(const ActivityEvent&, const ActivityEvent&) = default;
};

struct Group {
  GroupId id;
  std::string title;
  std::string description;
  bool read_only = false;
  std::optional<GroupId> parent;
  std::string collection_id;   // imported groups only
  std::string collector_name;  // imported groups only
  std::map<UserId, Role> members;
  std::vector<ResourceId> resource_ids;
  std::vector<ActivityEvent> activity;
  friend bool operator==(const Group&, const Group&) = default;
};

enum class CrawlFrequency { once, daily, weekly, monthly, quarterly, annual };
enum class CrawlDepth { pageOnly, site };
std::string_view to_string(CrawlFrequency f);
std::string_view to_string(CrawlDepth d);
CrawlFrequency parse_crawl_frequency(std::string_view s);
CrawlDepth parse_crawl_depth(std::string_view s);

struct CrawlAnnotation {
  CrawlFrequency frequency = CrawlFrequency::once;
  CrawlDepth depth = CrawlDepth::pageOnly;
  std::string rationale;
  friend bool operator==(const CrawlAnnotation&, const CrawlAnnotation&) = default;
};

/// Absent members are left untouched; a custom field mapped to nullopt is removed.
struct MetadataPatch {
  std::optional<std::string> title;
  std::optional<std::string> description;
  std::optional<std::string> author;
  std::map<std::string, std::optional<std::string>> custom_fields;

  bool empty() const { return !title && !description && !author && custom_fields.empty(); }
};

struct SeedRejection {
  std::size_t line = 0;
  std::string url;
  std::string reason;
};

struct ImportReport {
  GroupId group;
  std::size_t imported = 0;
  std::vector<SeedRejection> rejected;
};

struct CollectionSummary {
  GroupId id;
  std::string title;
  std::string description;
  std::size_t resource_count = 0;
  std::string collector_name;
  std::optional<CapturePeriod> capture_period;  // min/max over the seeds
};

struct MergeResult {
  GroupId group;
  std::size_t duplicates_dropped = 0;
};

struct BulkItemError {
  ResourceId resource;
  ErrorCode code;
  std::string message;
};

struct BulkTagReport {
  std::size_t applied = 0;
  std::vector<BulkItemError> errors;
};

/// A URL suggested or uploaded by a curator.
struct Upload {
  std::string url;
  std::string title;
  std::string description;
  std::string author;
  MediaType media_type = MediaType::webpage;
};

/// Copy an existing resource, materialize a live hit, or take an upload.
using ResourceSource = std::variant<ResourceId, web::LiveHit, Upload>;

enum class ExportFormat { manifest, recordLines };
ExportFormat parse_export_format(std::string_view s);

/// Durable destination for committed events. append() must either persist the
/// whole record or throw StorageFailure leaving nothing behind.
class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void append(const json& event) = 0;
  virtual void checkpoint(const json& snapshot) { (void)snapshot; }
};

struct WorkspaceOptions {
  Clock clock = system_clock();
  std::shared_ptr<EventSink> sink;
  std::size_t compact_every = 1000;  // events between snapshots; 0 disables
};

inline constexpr int kSchemaVersion = 1;

/// All service state. Every mutation is validated, turned into a
/// self-contained event, handed to the sink and only then applied, so
/// replaying the sink's events reproduces the state exactly.
///
/// Writers are serialized by one exclusive lock; readers share it.
class Workspace {
 public:
  explicit Workspace(WorkspaceOptions options = {});
  ~Workspace();

  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  void set_sink(std::shared_ptr<EventSink> sink);

  // --- ingest ---------------------------------------------------------------
  ImportReport import_collection(const CollectionManifest& m);
  std::vector<CollectionSummary> list_collections() const;

  // --- curation -------------------------------------------------------------
  GroupId create_group(const UserId& owner, std::string_view title, std::string_view description);
  GroupId create_subgroup(const GroupId& parent, const UserId& owner, std::string_view title);
  void join_group(const GroupId& group, const UserId& user);
  void leave_group(const GroupId& group, const UserId& user);
  ResourceId add_resource(const GroupId& group, const UserId& actor, const ResourceSource& source);
  void remove_resource(const GroupId& group, const ResourceId& resource, const UserId& actor);
  void move_resource(const ResourceId& resource, const GroupId& from, const GroupId& to, const UserId& actor);
  GroupId copy_group(const GroupId& source, const UserId& owner, std::string_view new_title);
  MergeResult merge_groups(std::span<const GroupId> sources, const UserId& owner, std::string_view new_title);
  BulkTagReport bulk_tag(std::span<const ResourceId> resources, std::string_view tag, const UserId& actor);
  GroupId group_by_tag(std::string_view tag, const UserId& owner, std::string_view new_title);
  std::vector<ResourceId> resources_with_tag(std::string_view tag) const;
  /// Members only, except for read-only collections which anyone may read.
  std::string export_group(const GroupId& group, ExportFormat format, const UserId& actor) const;
  std::vector<ActivityEvent> activity_feed(const GroupId& group, const UserId& actor, std::size_t limit) const;

  // --- enrichment -----------------------------------------------------------
  void add_tag(const ResourceId& resource, std::string_view tag, const UserId& actor);
  void remove_tag(const ResourceId& resource, std::string_view tag, const UserId& actor);
  CommentId add_comment(const ResourceId& resource, std::string_view body, const UserId& actor);
  void edit_metadata(const ResourceId& resource, const MetadataPatch& patch, const UserId& actor);
  void set_crawl_annotation(const ResourceId& resource, const GroupId& group, const CrawlAnnotation& annotation,
                            const UserId& actor);
  std::optional<CrawlAnnotation> crawl_annotation(const ResourceId& resource, const GroupId& group) const;

  // --- capture bookkeeping ------------------------------------------------------
  void record_archive_receipt(const ResourceId& resource, const capture::ArchiveRequestReceipt& receipt);
  std::vector<capture::ArchiveRequestReceipt> archive_receipts(const ResourceId& resource) const;
  /// Remembers per-URL liveness; resources whose URL is not alive render the
  /// dead-page placeholder.
  void record_liveness(const linkrot::LinkRotReport& report);

  void register_user(const UserId& user, std::string_view display_name);

  // --- search ---------------------------------------------------------------
  search::SearchResult search(const search::SearchQuery& q) const;
  const search::Bm25Params& search_params() const { return index_.params(); }

  // --- reads ----------------------------------------------------------------
  bool has_group(const GroupId& id) const;
  Group group(const GroupId& id) const;
  std::vector<Group> groups() const;
  std::vector<GroupId> subgroups(const GroupId& parent) const;
  /// The resource as displayed: thumbnail reflects recorded liveness.
  std::optional<Resource> find_resource(const ResourceId& id) const;
  Resource resource(const ResourceId& id) const;
  GroupId group_of(const ResourceId& id) const;
  std::vector<Resource> group_resources(const GroupId& id) const;
  bool is_member(const GroupId& group, const UserId& user) const;
  std::size_t resource_count() const;

  /// Stable hash over a group's title, description, flags, resource list and
  /// full resource records. Membership and activity are excluded.
  std::uint64_t snapshot_hash(const GroupId& id) const;

  // --- persistence ----------------------------------------------------------
  json snapshot() const;
  void load_snapshot(const json& snap);
  /// Applies a previously committed event; events at or below the current
  /// sequence number are skipped. Throws on inconsistent events.
  void replay(const json& event);
  std::uint64_t sequence() const;

 private:
  struct State;

  void commit(json event);
  void apply(const json& event);
  void apply_locked(const json& event);
  json snapshot_locked() const;

  // helpers used with the lock held
  const Group& group_ref(const GroupId& id) const;
  Group& group_mut(const GroupId& id);
  const Resource& resource_ref(const ResourceId& id) const;
  bool member_locked(const Group& g, const UserId& user) const;
  void require_editable(const Group& g) const;
  void require_member(const Group& g, const UserId& user) const;
  Instant now() const;
  ResourceId peek_resource_id(std::uint64_t offset = 0) const;
  GroupId peek_group_id() const;
  Resource copy_of(const Resource& src, ResourceId id, const UserId& actor, Instant at) const;
  json derived_group_event(std::string_view origin, const UserId& owner, std::string_view title,
                           std::string_view description, const std::vector<const Resource*>& sources) const;
  void attach_resource(const GroupId& group, Resource r);
  void detach_resource(const GroupId& group, const ResourceId& id);
  void reindex(const ResourceId& id);
  void log_activity(Group& g, const UserId& actor, ActivityKind kind, std::string target, Instant at);
  Resource displayed(const Resource& r) const;

  WorkspaceOptions options_;
  mutable std::shared_mutex mutex_;
  std::unique_ptr<State> state_;
  search::SearchIndex index_;
  std::size_t since_checkpoint_ = 0;
};

// Record encodings used by the API and persistence.
void to_json(json& j, const ActivityEvent& e);
void from_json(const json& j, ActivityEvent& e);
void to_json(json& j, const CrawlAnnotation& a);
void from_json(const json& j, CrawlAnnotation& a);
void to_json(json& j, const Group& g);
void from_json(const json& j, Group& g);

}  // namespace curator
