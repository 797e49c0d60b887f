#include <algorithm>
#include <mutex>
#include <unordered_set>

#include "curator/json_codec.hpp"
#include "curator/text.hpp"
#include "curator/workspace.hpp"
#include "workspace_state.hpp"

namespace curator {

namespace {

std::string required_title(std::string_view title) {
  auto t = text::trim(title);
  if (t.empty()) throw Error(ErrorCode::Validation, "title must not be empty");
  return t;
}

}  // namespace

GroupId Workspace::create_group(const UserId& owner, std::string_view title, std::string_view description) {
  auto t = required_title(title);
  std::unique_lock lock(mutex_);
  auto id = peek_group_id();
  commit(json{{"type", "groupCreated"},
              {"group", {{"id", id}, {"title", t}, {"description", description}}},
              {"owner", owner},
              {"at", to_millis(now())}});
  return id;
}

GroupId Workspace::create_subgroup(const GroupId& parent, const UserId& owner, std::string_view title) {
  auto t = required_title(title);
  std::unique_lock lock(mutex_);
  const auto& p = group_ref(parent);
  require_editable(p);
  if (p.parent) throw Error(ErrorCode::DepthExceeded, "sub-groups cannot be nested further", parent.str());
  require_member(p, owner);
  auto id = peek_group_id();
  commit(json{{"type", "groupCreated"},
              {"group", {{"id", id}, {"title", t}, {"description", ""}, {"parent", parent}}},
              {"owner", owner},
              {"at", to_millis(now())}});
  return id;
}

void Workspace::join_group(const GroupId& group, const UserId& user) {
  std::unique_lock lock(mutex_);
  if (group_ref(group).members.contains(user)) return;
  commit(json{{"type", "memberJoined"}, {"group", group}, {"user", user}, {"at", to_millis(now())}});
}

void Workspace::leave_group(const GroupId& group, const UserId& user) {
  std::unique_lock lock(mutex_);
  const auto& g = group_ref(group);
  if (!g.members.contains(user)) throw Error(ErrorCode::NotMember, user.str() + " is not a member", group.str());
  commit(json{{"type", "memberLeft"}, {"group", group}, {"user", user}, {"at", to_millis(now())}});
}

ResourceId Workspace::add_resource(const GroupId& group, const UserId& actor, const ResourceSource& source) {
  std::unique_lock lock(mutex_);
  const auto& g = group_ref(group);
  require_editable(g);
  require_member(g, actor);

  const auto at = now();
  Resource r;
  if (const auto* ref = std::get_if<ResourceId>(&source)) {
    r = copy_of(resource_ref(*ref), peek_resource_id(), actor, at);
  } else if (const auto* hit = std::get_if<web::LiveHit>(&source)) {
    r.id = peek_resource_id();
    r.url = normalize_url(hit->url);
    r.original_url = hit->url;
    r.title = hit->title;
    r.description = hit->snippet;
    r.media_type = hit->media_type;
    r.source.kind = SourceKind::liveWeb;
    r.source.provider = hit->provider;
    r.created_by = actor;
    r.created_at = at;
  } else {
    const auto& up = std::get<Upload>(source);
    r.id = peek_resource_id();
    r.url = normalize_url(up.url);
    r.original_url = up.url;
    r.title = up.title;
    r.description = up.description;
    r.author = up.author;
    r.media_type = up.media_type;
    r.source.kind = SourceKind::upload;
    r.source.provider = "upload";
    r.created_by = actor;
    r.created_at = at;
  }

  if (auto it = state_->urls.find(group); it != state_->urls.end() && it->second.contains(r.url.str())) {
    throw Error(ErrorCode::DuplicateInGroup, "group already holds " + r.url.str(), it->second.at(r.url.str()).str());
  }
  auto id = r.id;
  commit(json{{"type", "resourceAdded"}, {"group", group}, {"resource", std::move(r)}, {"actor", actor},
              {"at", to_millis(at)}});
  return id;
}

void Workspace::remove_resource(const GroupId& group, const ResourceId& resource, const UserId& actor) {
  std::unique_lock lock(mutex_);
  const auto& g = group_ref(group);
  require_editable(g);
  require_member(g, actor);
  resource_ref(resource);
  if (state_->owner.at(resource) != group) {
    throw Error(ErrorCode::NotFound, "resource is not in this group", resource.str());
  }
  commit(json{{"type", "resourceRemoved"}, {"group", group}, {"resource", resource}, {"actor", actor},
              {"at", to_millis(now())}});
}

void Workspace::move_resource(const ResourceId& resource, const GroupId& from, const GroupId& to,
                              const UserId& actor) {
  std::unique_lock lock(mutex_);
  const auto& src = group_ref(from);
  const auto& dst = group_ref(to);
  const auto& r = resource_ref(resource);
  if (state_->owner.at(resource) != from) {
    throw Error(ErrorCode::NotFound, "resource is not in the source group", resource.str());
  }
  require_editable(src);
  require_editable(dst);
  require_member(src, actor);
  require_member(dst, actor);
  if (from == to) throw Error(ErrorCode::Validation, "source and target group are the same", from.str());
  if (auto it = state_->urls.find(to); it != state_->urls.end() && it->second.contains(r.url.str())) {
    throw Error(ErrorCode::DuplicateInGroup, "target group already holds " + r.url.str(), to.str());
  }
  commit(json{{"type", "resourceMoved"}, {"resource", resource}, {"from", from}, {"to", to}, {"actor", actor},
              {"at", to_millis(now())}});
}

GroupId Workspace::copy_group(const GroupId& source, const UserId& owner, std::string_view new_title) {
  auto t = required_title(new_title);
  std::unique_lock lock(mutex_);
  const auto& g = group_ref(source);
  std::vector<const Resource*> sources;
  for (const auto& rid : g.resource_ids) sources.push_back(&resource_ref(rid));
  auto ev = derived_group_event("copy", owner, t, g.description, sources);
  auto id = ev["group"]["id"].get<GroupId>();
  commit(std::move(ev));
  return id;
}

MergeResult Workspace::merge_groups(std::span<const GroupId> sources, const UserId& owner,
                                    std::string_view new_title) {
  if (sources.size() < 2) throw Error(ErrorCode::Validation, "merge needs at least two source groups");
  auto t = required_title(new_title);
  std::unique_lock lock(mutex_);
  std::vector<const Resource*> picked;
  std::unordered_set<std::string> seen;
  std::size_t total = 0;
  for (const auto& gid : sources) {
    for (const auto& rid : group_ref(gid).resource_ids) {
      ++total;
      const auto& r = resource_ref(rid);
      if (seen.insert(r.url.str()).second) picked.push_back(&r);
    }
  }
  auto ev = derived_group_event("merge", owner, t, "", picked);
  MergeResult result{ev["group"]["id"].get<GroupId>(), total - picked.size()};
  commit(std::move(ev));
  return result;
}

BulkTagReport Workspace::bulk_tag(std::span<const ResourceId> resources, std::string_view tag_raw,
                                  const UserId& actor) {
  Tag tag(tag_raw);
  std::unique_lock lock(mutex_);
  BulkTagReport report;
  json changed = json::array();
  std::unordered_set<std::string> listed;
  for (const auto& rid : resources) {
    auto it = state_->resources.find(rid);
    if (it == state_->resources.end()) {
      report.errors.push_back({rid, ErrorCode::NotFound, "no such resource"});
      continue;
    }
    const auto& g = group_ref(state_->owner.at(rid));
    if (g.read_only) {
      report.errors.push_back({rid, ErrorCode::ReadOnlyViolation, "resource belongs to read-only '" + g.title + "'"});
      continue;
    }
    if (!member_locked(g, actor)) {
      report.errors.push_back({rid, ErrorCode::NotMember, actor.str() + " is not a member of '" + g.title + "'"});
      continue;
    }
    ++report.applied;
    if (!it->second.has_tag(tag) && listed.insert(rid.str()).second) changed.push_back(rid);
  }
  if (!changed.empty()) {
    commit(json{{"type", "tagAdded"}, {"resources", std::move(changed)}, {"tag", tag.label()}, {"actor", actor},
                {"at", to_millis(now())}});
  }
  return report;
}

std::vector<ResourceId> Workspace::resources_with_tag(std::string_view tag_raw) const {
  Tag tag(tag_raw);
  std::shared_lock lock(mutex_);
  std::vector<ResourceId> out;
  for (const auto& [_, g] : state_->groups) {
    for (const auto& rid : g.resource_ids) {
      if (resource_ref(rid).has_tag(tag)) out.push_back(rid);
    }
  }
  return out;
}

GroupId Workspace::group_by_tag(std::string_view tag_raw, const UserId& owner, std::string_view new_title) {
  Tag tag(tag_raw);
  auto t = required_title(new_title);
  std::unique_lock lock(mutex_);
  std::vector<const Resource*> picked;
  std::unordered_set<std::string> seen;
  for (const auto& [_, g] : state_->groups) {
    for (const auto& rid : g.resource_ids) {
      const auto& r = resource_ref(rid);
      if (r.has_tag(tag) && seen.insert(r.url.str()).second) picked.push_back(&r);
    }
  }
  auto ev = derived_group_event("tag", owner, t, "Resources tagged '" + tag.label() + "'", picked);
  auto id = ev["group"]["id"].get<GroupId>();
  commit(std::move(ev));
  return id;
}

std::string Workspace::export_group(const GroupId& group, ExportFormat format, const UserId& actor) const {
  std::shared_lock lock(mutex_);
  const auto& g = group_ref(group);
  if (!g.read_only) require_member(g, actor);

  if (format == ExportFormat::recordLines) {
    std::string out;
    for (const auto& rid : g.resource_ids) {
      out += json(resource_ref(rid)).dump();
      out += '\n';
    }
    return out;
  }

  CollectionManifest m;
  m.collection_id = g.read_only ? g.collection_id : "export-" + g.id.str();
  m.title = g.title;
  m.description = g.description;
  m.collector_name = g.collector_name;
  if (m.collector_name.empty() && !g.resource_ids.empty()) {
    m.collector_name = resource_ref(g.resource_ids.front()).source.collector_name;
  }
  for (const auto& rid : g.resource_ids) {
    const auto& r = resource_ref(rid);
    SeedRecord s;
    s.url = r.original_url.empty() ? r.url.str() : r.original_url;
    s.title = r.title;
    s.description = r.description;
    s.author = r.author;
    for (const auto& tag : r.tags) s.subjects.push_back(tag.label());
    if (r.source.capture_period) {
      s.first_capture = r.source.capture_period->first;
      s.last_capture = r.source.capture_period->last;
    }
    m.seeds.push_back(std::move(s));
  }
  return format_manifest(m);
}

std::vector<ActivityEvent> Workspace::activity_feed(const GroupId& group, const UserId& actor,
                                                    std::size_t limit) const {
  std::shared_lock lock(mutex_);
  const auto& g = group_ref(group);
  if (!g.read_only) require_member(g, actor);
  std::vector<ActivityEvent> out;
  for (auto it = g.activity.rbegin(); it != g.activity.rend() && out.size() < limit; ++it) out.push_back(*it);
  return out;
}

}  // namespace curator
