#include <mutex>

#include "curator/json_codec.hpp"
#include "curator/text.hpp"
#include "curator/workspace.hpp"
#include "workspace_state.hpp"

namespace curator {

void Workspace::add_tag(const ResourceId& resource, std::string_view tag_raw, const UserId& actor) {
  Tag tag(tag_raw);
  std::unique_lock lock(mutex_);
  const auto& r = resource_ref(resource);
  const auto& g = group_ref(state_->owner.at(resource));
  require_editable(g);
  require_member(g, actor);
  if (r.has_tag(tag)) return;
  commit(json{{"type", "tagAdded"}, {"resources", json::array({resource})}, {"tag", tag.label()}, {"actor", actor},
              {"at", to_millis(now())}});
}

void Workspace::remove_tag(const ResourceId& resource, std::string_view tag_raw, const UserId& actor) {
  Tag tag(tag_raw);
  std::unique_lock lock(mutex_);
  const auto& r = resource_ref(resource);
  const auto& g = group_ref(state_->owner.at(resource));
  require_editable(g);
  require_member(g, actor);
  if (!r.has_tag(tag)) return;
  commit(json{{"type", "tagRemoved"}, {"resource", resource}, {"tag", tag.label()}, {"actor", actor},
              {"at", to_millis(now())}});
}

CommentId Workspace::add_comment(const ResourceId& resource, std::string_view body, const UserId& actor) {
  std::unique_lock lock(mutex_);
  resource_ref(resource);
  const auto& g = group_ref(state_->owner.at(resource));
  require_editable(g);
  require_member(g, actor);
  auto trimmed = text::trim(body);
  if (trimmed.empty()) throw Error(ErrorCode::EmptyBody, "comment body must not be empty");

  Comment c;
  c.id = CommentId(detail::format_id('c', state_->next_comment));
  c.author = actor;
  c.body = std::move(trimmed);
  c.created_at = now();
  auto id = c.id;
  auto at = to_millis(c.created_at);
  commit(json{{"type", "commentAdded"}, {"resource", resource}, {"comment", std::move(c)},
              {"at", at}});
  return id;
}

void Workspace::edit_metadata(const ResourceId& resource, const MetadataPatch& patch, const UserId& actor) {
  std::unique_lock lock(mutex_);
  resource_ref(resource);
  const auto& g = group_ref(state_->owner.at(resource));
  require_editable(g);
  require_member(g, actor);
  if (patch.empty()) return;

  json p = json::object();
  if (patch.title) p["title"] = *patch.title;
  if (patch.description) p["description"] = *patch.description;
  if (patch.author) p["author"] = *patch.author;
  if (!patch.custom_fields.empty()) {
    json fields = json::object();
    for (const auto& [k, v] : patch.custom_fields) fields[k] = v ? json(*v) : json(nullptr);
    p["customFields"] = std::move(fields);
  }
  commit(json{{"type", "metadataEdited"}, {"resource", resource}, {"patch", std::move(p)}, {"actor", actor},
              {"at", to_millis(now())}});
}

void Workspace::set_crawl_annotation(const ResourceId& resource, const GroupId& group,
                                     const CrawlAnnotation& annotation, const UserId& actor) {
  std::unique_lock lock(mutex_);
  resource_ref(resource);
  const auto& g = group_ref(group);
  if (state_->owner.at(resource) != group) {
    throw Error(ErrorCode::Validation, "resource is not in this group", resource.str());
  }
  require_editable(g);
  require_member(g, actor);
  commit(json{{"type", "crawlAnnotationSet"}, {"resource", resource}, {"group", group}, {"annotation", annotation},
              {"actor", actor}, {"at", to_millis(now())}});
}

std::optional<CrawlAnnotation> Workspace::crawl_annotation(const ResourceId& resource, const GroupId& group) const {
  std::shared_lock lock(mutex_);
  auto it = state_->annotations.find({resource, group});
  if (it == state_->annotations.end()) return std::nullopt;
  return it->second;
}

}  // namespace curator
