#include "curator/workspace.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <mutex>

#include "curator/json_codec.hpp"
#include "workspace_state.hpp"

namespace curator {

// --- enums and codecs ------------------------------------------------------------

std::string_view to_string(ActivityKind k) {
  switch (k) {
    case ActivityKind::resourceAdded: return "resourceAdded";
    case ActivityKind::resourceEdited: return "resourceEdited";
    case ActivityKind::resourceDeleted: return "resourceDeleted";
    case ActivityKind::resourceMoved: return "resourceMoved";
    case ActivityKind::memberJoined: return "memberJoined";
    case ActivityKind::memberLeft: return "memberLeft";
    case ActivityKind::groupCreated: return "groupCreated";
    case ActivityKind::commentAdded: return "commentAdded";
    case ActivityKind::tagAdded: return "tagAdded";
  }
  return "groupCreated";
}

ActivityKind parse_activity_kind(std::string_view s) {
  for (auto k : {ActivityKind::resourceAdded, ActivityKind::resourceEdited, ActivityKind::resourceDeleted,
                 ActivityKind::resourceMoved, ActivityKind::memberJoined, ActivityKind::memberLeft,
                 ActivityKind::groupCreated, ActivityKind::commentAdded, ActivityKind::tagAdded}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::Validation, "unknown activity kind", std::string(s));
}

std::string_view to_string(CrawlFrequency f) {
  switch (f) {
    case CrawlFrequency::once: return "once";
    case CrawlFrequency::daily: return "daily";
    case CrawlFrequency::weekly: return "weekly";
    case CrawlFrequency::monthly: return "monthly";
    case CrawlFrequency::quarterly: return "quarterly";
    case CrawlFrequency::annual: return "annual";
  }
  return "once";
}

std::string_view to_string(CrawlDepth d) { return d == CrawlDepth::site ? "site" : "pageOnly"; }

CrawlFrequency parse_crawl_frequency(std::string_view s) {
  for (auto f : {CrawlFrequency::once, CrawlFrequency::daily, CrawlFrequency::weekly, CrawlFrequency::monthly,
                 CrawlFrequency::quarterly, CrawlFrequency::annual}) {
    if (to_string(f) == s) return f;
  }
  throw Error(ErrorCode::Validation, "unknown crawl frequency", std::string(s));
}

CrawlDepth parse_crawl_depth(std::string_view s) {
  if (s == "pageOnly") return CrawlDepth::pageOnly;
  if (s == "site") return CrawlDepth::site;
  throw Error(ErrorCode::Validation, "unknown crawl depth", std::string(s));
}

ExportFormat parse_export_format(std::string_view s) {
  if (s == "manifest") return ExportFormat::manifest;
  if (s == "recordLines") return ExportFormat::recordLines;
  throw Error(ErrorCode::Validation, "export format must be 'manifest' or 'recordLines'", std::string(s));
}

void to_json(json& j, const ActivityEvent& e) {
  j = json{{"actor", e.actor}, {"kind", to_string(e.kind)}, {"target", e.target}, {"at", to_millis(e.at)}};
}

void from_json(const json& j, ActivityEvent& e) {
  e.actor = j.at("actor").get<UserId>();
  e.kind = parse_activity_kind(j.at("kind").get<std::string>());
  e.target = j.at("target").get<std::string>();
  e.at = from_millis(j.at("at").get<std::int64_t>());
}

void to_json(json& j, const CrawlAnnotation& a) {
  j = json{{"frequency", to_string(a.frequency)}, {"depth", to_string(a.depth)}, {"rationale", a.rationale}};
}

void from_json(const json& j, CrawlAnnotation& a) {
  a.frequency = parse_crawl_frequency(j.at("frequency").get<std::string>());
  a.depth = parse_crawl_depth(j.at("depth").get<std::string>());
  a.rationale = string_or_empty(j, "rationale");
}

void to_json(json& j, const Group& g) {
  json members = json::object();
  for (const auto& [u, role] : g.members) members[u.str()] = role == Role::owner ? "owner" : "member";
  j = json{{"id", g.id},
           {"title", g.title},
           {"description", g.description},
           {"readOnly", g.read_only},
           {"members", std::move(members)},
           {"resourceIds", g.resource_ids},
           {"activity", g.activity}};
  if (g.parent) j["parent"] = *g.parent;
  if (g.read_only) {
    j["collectionId"] = g.collection_id;
    j["collectorName"] = g.collector_name;
  }
}

void from_json(const json& j, Group& g) {
  g.id = j.at("id").get<GroupId>();
  g.title = j.at("title").get<std::string>();
  g.description = string_or_empty(j, "description");
  g.read_only = j.value("readOnly", false);
  g.parent.reset();
  if (j.contains("parent") && !j.at("parent").is_null()) g.parent = j.at("parent").get<GroupId>();
  g.collection_id = string_or_empty(j, "collectionId");
  g.collector_name = string_or_empty(j, "collectorName");
  g.members.clear();
  const auto members = j.value("members", json::object());
  for (const auto& [u, role] : members.items()) {
    g.members[UserId(u)] = role.get<std::string>() == "owner" ? Role::owner : Role::member;
  }
  g.resource_ids = j.value("resourceIds", json::array()).get<std::vector<ResourceId>>();
  g.activity = j.value("activity", json::array()).get<std::vector<ActivityEvent>>();
}

namespace detail {

json receipt_to_json(const capture::ArchiveRequestReceipt& r) {
  return json{{"requestedAt", to_millis(r.requested_at)}, {"targetUrl", r.target_url}, {"accepted", r.accepted}};
}

capture::ArchiveRequestReceipt receipt_from_json(const json& j) {
  return {from_millis(j.at("requestedAt").get<std::int64_t>()), j.at("targetUrl").get<std::string>(),
          j.at("accepted").get<bool>()};
}

std::string format_id(char prefix, std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%08llu", prefix, static_cast<unsigned long long>(n));
  return buf;
}

std::uint64_t id_number(const std::string& id) {
  if (id.size() < 2) return 0;
  try {
    return std::stoull(id.substr(1));
  } catch (...) {
    return 0;
  }
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace detail

using detail::format_id;
using detail::id_number;

// --- core ---------------------------------------------------------------------------

Workspace::Workspace(WorkspaceOptions options) : options_(std::move(options)), state_(std::make_unique<State>()) {
  if (!options_.clock) options_.clock = system_clock();
}

Workspace::~Workspace() = default;

void Workspace::set_sink(std::shared_ptr<EventSink> sink) {
  std::unique_lock lock(mutex_);
  options_.sink = std::move(sink);
}

Instant Workspace::now() const { return options_.clock(); }

ResourceId Workspace::peek_resource_id(std::uint64_t offset) const {
  return ResourceId(format_id('r', state_->next_resource + offset));
}

GroupId Workspace::peek_group_id() const { return GroupId(format_id('g', state_->next_group)); }

void Workspace::commit(json event) {
  event["seq"] = state_->seq + 1;
  if (options_.sink) options_.sink->append(event);
  apply_locked(event);
  if (options_.sink && options_.compact_every > 0 && ++since_checkpoint_ >= options_.compact_every) {
    since_checkpoint_ = 0;
    try {
      options_.sink->checkpoint(snapshot_locked());
    } catch (const std::exception& e) {
      // The event log still holds everything; the next checkpoint retries.
      std::cerr << "checkpoint failed: " << e.what() << '\n';
    }
  }
}

void Workspace::replay(const json& event) {
  std::unique_lock lock(mutex_);
  if (event.at("seq").get<std::uint64_t>() <= state_->seq) return;
  apply_locked(event);
}

std::uint64_t Workspace::sequence() const {
  std::shared_lock lock(mutex_);
  return state_->seq;
}

const Group& Workspace::group_ref(const GroupId& id) const {
  auto it = state_->groups.find(id);
  if (it == state_->groups.end()) throw Error(ErrorCode::NotFound, "no such group", id.str());
  return it->second;
}

Group& Workspace::group_mut(const GroupId& id) {
  auto it = state_->groups.find(id);
  if (it == state_->groups.end()) throw Error(ErrorCode::NotFound, "no such group", id.str());
  return it->second;
}

const Resource& Workspace::resource_ref(const ResourceId& id) const {
  auto it = state_->resources.find(id);
  if (it == state_->resources.end()) throw Error(ErrorCode::NotFound, "no such resource", id.str());
  return it->second;
}

bool Workspace::member_locked(const Group& g, const UserId& user) const {
  if (g.members.contains(user)) return true;
  if (g.parent) {
    auto it = state_->groups.find(*g.parent);
    if (it != state_->groups.end() && it->second.members.contains(user)) return true;
  }
  return false;
}

void Workspace::require_editable(const Group& g) const {
  if (g.read_only) throw Error(ErrorCode::ReadOnlyViolation, "group '" + g.title + "' is read-only", g.id.str());
}

void Workspace::require_member(const Group& g, const UserId& user) const {
  if (!member_locked(g, user)) {
    throw Error(ErrorCode::NotMember, user.str() + " is not a member of '" + g.title + "'", g.id.str());
  }
}

void Workspace::log_activity(Group& g, const UserId& actor, ActivityKind kind, std::string target, Instant at) {
  if (!g.activity.empty() && at < g.activity.back().at) at = g.activity.back().at;
  g.activity.push_back(ActivityEvent{actor, kind, std::move(target), at});
}

void Workspace::attach_resource(const GroupId& gid, Resource r) {
  auto& g = group_mut(gid);
  auto id = r.id;
  state_->urls[gid].emplace(r.url.str(), id);
  g.resource_ids.push_back(id);
  state_->owner[id] = gid;
  state_->next_resource = std::max(state_->next_resource, id_number(id.str()) + 1);
  for (const auto& c : r.comments) state_->next_comment = std::max(state_->next_comment, id_number(c.id.str()) + 1);
  index_.remove(id);
  index_.add(search::make_document(r, gid));
  state_->resources.insert_or_assign(id, std::move(r));
}

void Workspace::detach_resource(const GroupId& gid, const ResourceId& id) {
  auto& g = group_mut(gid);
  const auto& r = resource_ref(id);
  state_->urls[gid].erase(r.url.str());
  g.resource_ids.erase(std::remove(g.resource_ids.begin(), g.resource_ids.end(), id), g.resource_ids.end());
  state_->owner.erase(id);
  index_.remove(id);
}

void Workspace::reindex(const ResourceId& id) {
  index_.remove(id);
  index_.add(search::make_document(resource_ref(id), state_->owner.at(id)));
}

Resource Workspace::copy_of(const Resource& src, ResourceId id, const UserId& actor, Instant at) const {
  Resource r = src;
  r.id = std::move(id);
  r.comments.clear();
  r.created_by = actor;
  r.created_at = at;
  return r;
}

json Workspace::derived_group_event(std::string_view origin, const UserId& owner, std::string_view title,
                                    std::string_view description,
                                    const std::vector<const Resource*>& sources) const {
  auto at = now();
  json resources = json::array();
  std::uint64_t offset = 0;
  for (const auto* src : sources) resources.push_back(copy_of(*src, peek_resource_id(offset++), owner, at));
  return json{{"type", "groupDerived"},
              {"origin", origin},
              {"group", {{"id", peek_group_id()}, {"title", title}, {"description", description}}},
              {"owner", owner},
              {"resources", std::move(resources)},
              {"at", to_millis(at)}};
}

Resource Workspace::displayed(const Resource& r) const {
  auto it = state_->liveness.find(r.url.str());
  if (it == state_->liveness.end() || it->second == linkrot::SeedStatus::alive) return r;
  Resource out = r;
  out.thumbnail = ThumbnailState{ThumbnailState::Kind::deadPage, {}};
  return out;
}

// --- event application ------------------------------------------------------------------

void Workspace::apply(const json& event) {
  std::unique_lock lock(mutex_);
  apply_locked(event);
}

void Workspace::apply_locked(const json& ev) {
  const auto type = ev.at("type").get<std::string>();
  const auto at = from_millis(ev.value("at", std::int64_t{0}));
  auto& st = *state_;

  if (type == "collectionImported") {
    const auto& gj = ev.at("group");
    Group g;
    g.id = gj.at("id").get<GroupId>();
    g.title = gj.at("title").get<std::string>();
    g.description = string_or_empty(gj, "description");
    g.read_only = true;
    g.collection_id = gj.at("collectionId").get<std::string>();
    g.collector_name = string_or_empty(gj, "collectorName");
    if (st.groups.contains(g.id) || st.collections.contains(g.collection_id)) {
      throw Error(ErrorCode::CorruptState, "collection imported twice", g.collection_id);
    }
    log_activity(g, UserId("system"), ActivityKind::groupCreated, g.id.str(), at);
    st.collections[g.collection_id] = g.id;
    st.next_group = std::max(st.next_group, id_number(g.id.str()) + 1);
    auto gid = g.id;
    st.groups.emplace(gid, std::move(g));
    for (const auto& rj : ev.at("resources")) attach_resource(gid, rj.get<Resource>());
  } else if (type == "groupCreated" || type == "groupDerived") {
    const auto& gj = ev.at("group");
    Group g;
    g.id = gj.at("id").get<GroupId>();
    if (st.groups.contains(g.id)) throw Error(ErrorCode::CorruptState, "group created twice", g.id.str());
    g.title = gj.at("title").get<std::string>();
    g.description = string_or_empty(gj, "description");
    if (gj.contains("parent")) g.parent = gj.at("parent").get<GroupId>();
    auto owner = ev.at("owner").get<UserId>();
    g.members[owner] = Role::owner;
    log_activity(g, owner, ActivityKind::groupCreated, g.id.str(), at);
    st.next_group = std::max(st.next_group, id_number(g.id.str()) + 1);
    auto gid = g.id;
    st.groups.emplace(gid, std::move(g));
    if (ev.contains("resources")) {
      for (const auto& rj : ev.at("resources")) attach_resource(gid, rj.get<Resource>());
    }
  } else if (type == "memberJoined" || type == "memberLeft") {
    auto& g = group_mut(ev.at("group").get<GroupId>());
    auto user = ev.at("user").get<UserId>();
    if (type == "memberJoined") {
      g.members.emplace(user, Role::member);
      log_activity(g, user, ActivityKind::memberJoined, user.str(), at);
    } else {
      g.members.erase(user);
      log_activity(g, user, ActivityKind::memberLeft, user.str(), at);
    }
  } else if (type == "resourceAdded") {
    auto gid = ev.at("group").get<GroupId>();
    auto r = ev.at("resource").get<Resource>();
    auto rid = r.id;
    attach_resource(gid, std::move(r));
    log_activity(group_mut(gid), ev.at("actor").get<UserId>(), ActivityKind::resourceAdded, rid.str(), at);
  } else if (type == "resourceRemoved") {
    auto gid = ev.at("group").get<GroupId>();
    auto rid = ev.at("resource").get<ResourceId>();
    detach_resource(gid, rid);
    st.resources.erase(rid);
    st.receipts.erase(rid);
    std::erase_if(st.annotations, [&](const auto& kv) { return kv.first.first == rid; });
    log_activity(group_mut(gid), ev.at("actor").get<UserId>(), ActivityKind::resourceDeleted, rid.str(), at);
  } else if (type == "resourceMoved") {
    auto rid = ev.at("resource").get<ResourceId>();
    auto from = ev.at("from").get<GroupId>();
    auto to = ev.at("to").get<GroupId>();
    auto actor = ev.at("actor").get<UserId>();
    Resource r = resource_ref(rid);
    detach_resource(from, rid);
    attach_resource(to, std::move(r));
    auto node = st.annotations.extract({rid, from});
    if (!node.empty()) {
      node.key().second = to;
      st.annotations.insert(std::move(node));
    }
    log_activity(group_mut(from), actor, ActivityKind::resourceMoved, rid.str(), at);
    log_activity(group_mut(to), actor, ActivityKind::resourceMoved, rid.str(), at);
  } else if (type == "tagAdded") {
    Tag tag(ev.at("tag").get<std::string>());
    auto actor = ev.at("actor").get<UserId>();
    std::map<GroupId, ResourceId> first_in_group;
    for (const auto& rj : ev.at("resources")) {
      auto rid = rj.get<ResourceId>();
      auto& r = st.resources.at(rid);
      r.tags.insert(tag);
      reindex(rid);
      first_in_group.try_emplace(st.owner.at(rid), rid);
    }
    for (const auto& [gid, rid] : first_in_group) {
      log_activity(group_mut(gid), actor, ActivityKind::tagAdded, rid.str(), at);
    }
  } else if (type == "tagRemoved") {
    auto rid = ev.at("resource").get<ResourceId>();
    auto& r = st.resources.at(rid);
    r.tags.erase(Tag(ev.at("tag").get<std::string>()));
    reindex(rid);
    log_activity(group_mut(st.owner.at(rid)), ev.at("actor").get<UserId>(), ActivityKind::resourceEdited, rid.str(), at);
  } else if (type == "commentAdded") {
    auto rid = ev.at("resource").get<ResourceId>();
    auto c = ev.at("comment").get<Comment>();
    auto& r = st.resources.at(rid);
    r.comments.push_back(c);
    st.next_comment = std::max(st.next_comment, id_number(c.id.str()) + 1);
    log_activity(group_mut(st.owner.at(rid)), c.author, ActivityKind::commentAdded, rid.str(), at);
  } else if (type == "metadataEdited") {
    auto rid = ev.at("resource").get<ResourceId>();
    auto& r = st.resources.at(rid);
    const auto& patch = ev.at("patch");
    if (patch.contains("title")) r.title = patch.at("title").get<std::string>();
    if (patch.contains("description")) r.description = patch.at("description").get<std::string>();
    if (patch.contains("author")) r.author = patch.at("author").get<std::string>();
    if (patch.contains("customFields")) {
      for (const auto& [k, v] : patch.at("customFields").items()) {
        if (v.is_null()) {
          r.custom_fields.erase(k);
        } else {
          r.custom_fields[k] = v.get<std::string>();
        }
      }
    }
    reindex(rid);
    log_activity(group_mut(st.owner.at(rid)), ev.at("actor").get<UserId>(), ActivityKind::resourceEdited, rid.str(), at);
  } else if (type == "crawlAnnotationSet") {
    auto rid = ev.at("resource").get<ResourceId>();
    auto gid = ev.at("group").get<GroupId>();
    st.annotations[{rid, gid}] = ev.at("annotation").get<CrawlAnnotation>();
    log_activity(group_mut(gid), ev.at("actor").get<UserId>(), ActivityKind::resourceEdited, rid.str(), at);
  } else if (type == "archiveReceipt") {
    auto rid = ev.at("resource").get<ResourceId>();
    resource_ref(rid);
    st.receipts[rid].push_back(detail::receipt_from_json(ev.at("receipt")));
  } else if (type == "livenessRecorded") {
    for (const auto& e : ev.at("entries")) {
      st.liveness[e.at("url").get<std::string>()] = linkrot::parse_seed_status(e.at("status").get<std::string>());
    }
  } else if (type == "userRegistered") {
    st.users[ev.at("user").get<UserId>()] = ev.at("displayName").get<std::string>();
  } else {
    throw Error(ErrorCode::CorruptState, "unknown event type", type);
  }
  st.seq = ev.at("seq").get<std::uint64_t>();
}

// --- bookkeeping mutations ------------------------------------------------------------------

void Workspace::record_archive_receipt(const ResourceId& resource, const capture::ArchiveRequestReceipt& receipt) {
  std::unique_lock lock(mutex_);
  resource_ref(resource);
  commit(json{{"type", "archiveReceipt"},
              {"resource", resource},
              {"receipt", detail::receipt_to_json(receipt)},
              {"at", to_millis(now())}});
}

std::vector<capture::ArchiveRequestReceipt> Workspace::archive_receipts(const ResourceId& resource) const {
  std::shared_lock lock(mutex_);
  auto it = state_->receipts.find(resource);
  return it == state_->receipts.end() ? std::vector<capture::ArchiveRequestReceipt>{} : it->second;
}

void Workspace::record_liveness(const linkrot::LinkRotReport& report) {
  json entries = json::array();
  for (const auto& row : report.per_seed) {
    try {
      entries.push_back({{"url", normalize_url(row.url).str()}, {"status", linkrot::to_string(row.status)}});
    } catch (const Error&) {
      // unparseable seeds cannot match any resource
    }
  }
  if (entries.empty()) return;
  std::unique_lock lock(mutex_);
  commit(json{{"type", "livenessRecorded"}, {"entries", std::move(entries)}, {"at", to_millis(now())}});
}

void Workspace::register_user(const UserId& user, std::string_view display_name) {
  std::unique_lock lock(mutex_);
  auto it = state_->users.find(user);
  if (it != state_->users.end() && it->second == display_name) return;
  commit(json{{"type", "userRegistered"}, {"user", user}, {"displayName", display_name}, {"at", to_millis(now())}});
}

// --- reads ----------------------------------------------------------------------------------

search::SearchResult Workspace::search(const search::SearchQuery& q) const {
  std::shared_lock lock(mutex_);
  return index_.search(q);
}

bool Workspace::has_group(const GroupId& id) const {
  std::shared_lock lock(mutex_);
  return state_->groups.contains(id);
}

Group Workspace::group(const GroupId& id) const {
  std::shared_lock lock(mutex_);
  return group_ref(id);
}

std::vector<Group> Workspace::groups() const {
  std::shared_lock lock(mutex_);
  std::vector<Group> out;
  for (const auto& [_, g] : state_->groups) out.push_back(g);
  return out;
}

std::vector<GroupId> Workspace::subgroups(const GroupId& parent) const {
  std::shared_lock lock(mutex_);
  std::vector<GroupId> out;
  for (const auto& [id, g] : state_->groups) {
    if (g.parent == parent) out.push_back(id);
  }
  return out;
}

std::optional<Resource> Workspace::find_resource(const ResourceId& id) const {
  std::shared_lock lock(mutex_);
  auto it = state_->resources.find(id);
  if (it == state_->resources.end()) return std::nullopt;
  return displayed(it->second);
}

Resource Workspace::resource(const ResourceId& id) const {
  std::shared_lock lock(mutex_);
  return displayed(resource_ref(id));
}

GroupId Workspace::group_of(const ResourceId& id) const {
  std::shared_lock lock(mutex_);
  auto it = state_->owner.find(id);
  if (it == state_->owner.end()) throw Error(ErrorCode::NotFound, "no such resource", id.str());
  return it->second;
}

std::vector<Resource> Workspace::group_resources(const GroupId& id) const {
  std::shared_lock lock(mutex_);
  std::vector<Resource> out;
  for (const auto& rid : group_ref(id).resource_ids) out.push_back(displayed(resource_ref(rid)));
  return out;
}

bool Workspace::is_member(const GroupId& group, const UserId& user) const {
  std::shared_lock lock(mutex_);
  return member_locked(group_ref(group), user);
}

std::size_t Workspace::resource_count() const {
  std::shared_lock lock(mutex_);
  return state_->resources.size();
}

std::uint64_t Workspace::snapshot_hash(const GroupId& id) const {
  std::shared_lock lock(mutex_);
  const auto& g = group_ref(id);
  json j{{"id", g.id},
         {"title", g.title},
         {"description", g.description},
         {"readOnly", g.read_only},
         {"collectionId", g.collection_id},
         {"collectorName", g.collector_name}};
  json resources = json::array();
  for (const auto& rid : g.resource_ids) resources.push_back(resource_ref(rid));
  j["resources"] = std::move(resources);
  return detail::fnv1a(j.dump());
}

// --- snapshots ------------------------------------------------------------------------------

json Workspace::snapshot() const {
  std::shared_lock lock(mutex_);
  return snapshot_locked();
}

json Workspace::snapshot_locked() const {
  const auto& st = *state_;
  json groups = json::array();
  for (const auto& [_, g] : st.groups) groups.push_back(g);
  json resources = json::array();
  for (const auto& [id, r] : st.resources) {
    json rj = r;
    rj["group"] = st.owner.at(id);
    resources.push_back(std::move(rj));
  }
  json users = json::object();
  for (const auto& [u, name] : st.users) users[u.str()] = name;
  json receipts = json::object();
  for (const auto& [rid, list] : st.receipts) {
    auto& arr = receipts[rid.str()] = json::array();
    for (const auto& r : list) arr.push_back(detail::receipt_to_json(r));
  }
  json annotations = json::array();
  for (const auto& [key, a] : st.annotations) {
    annotations.push_back({{"resource", key.first}, {"group", key.second}, {"annotation", a}});
  }
  json liveness = json::object();
  for (const auto& [url, s] : st.liveness) liveness[url] = linkrot::to_string(s);

  return json{{"schemaVersion", kSchemaVersion},
              {"seq", st.seq},
              {"counters", {{"resource", st.next_resource}, {"group", st.next_group}, {"comment", st.next_comment}}},
              {"groups", std::move(groups)},
              {"resources", std::move(resources)},
              {"users", std::move(users)},
              {"receipts", std::move(receipts)},
              {"annotations", std::move(annotations)},
              {"liveness", std::move(liveness)}};
}

void Workspace::load_snapshot(const json& snap) {
  std::unique_lock lock(mutex_);
  if (snap.at("schemaVersion").get<int>() != kSchemaVersion) {
    throw Error(ErrorCode::CorruptState, "unsupported schema version", snap.at("schemaVersion").dump());
  }
  auto fresh = std::make_unique<State>();
  auto& st = *fresh;
  st.seq = snap.at("seq").get<std::uint64_t>();
  const auto& counters = snap.at("counters");
  st.next_resource = counters.at("resource").get<std::uint64_t>();
  st.next_group = counters.at("group").get<std::uint64_t>();
  st.next_comment = counters.at("comment").get<std::uint64_t>();
  for (const auto& gj : snap.at("groups")) {
    auto g = gj.get<Group>();
    if (g.read_only) st.collections[g.collection_id] = g.id;
    st.groups.emplace(g.id, std::move(g));
  }
  for (const auto& rj : snap.at("resources")) {
    auto r = rj.get<Resource>();
    auto gid = rj.at("group").get<GroupId>();
    if (!st.groups.contains(gid)) throw Error(ErrorCode::CorruptState, "resource in unknown group", r.id.str());
    st.owner[r.id] = gid;
    st.urls[gid].emplace(r.url.str(), r.id);
    st.resources.emplace(r.id, std::move(r));
  }
  for (const auto& [u, name] : snap.at("users").items()) st.users[UserId(u)] = name.get<std::string>();
  for (const auto& [rid, list] : snap.at("receipts").items()) {
    for (const auto& r : list) st.receipts[ResourceId(rid)].push_back(detail::receipt_from_json(r));
  }
  for (const auto& a : snap.at("annotations")) {
    st.annotations[{a.at("resource").get<ResourceId>(), a.at("group").get<GroupId>()}] =
        a.at("annotation").get<CrawlAnnotation>();
  }
  for (const auto& [url, s] : snap.at("liveness").items()) {
    st.liveness[url] = linkrot::parse_seed_status(s.get<std::string>());
  }

  index_.clear();
  for (const auto& [_, g] : st.groups) {
    for (const auto& rid : g.resource_ids) {
      auto it = st.resources.find(rid);
      if (it == st.resources.end()) throw Error(ErrorCode::CorruptState, "group lists unknown resource", rid.str());
      index_.add(search::make_document(it->second, g.id));
    }
  }
  state_ = std::move(fresh);
}

}  // namespace curator
