#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "curator/workspace.hpp"

namespace curator {

struct Workspace::State {
  std::uint64_t seq = 0;
  std::uint64_t next_resource = 1;
  std::uint64_t next_group = 1;
  std::uint64_t next_comment = 1;
  std::map<GroupId, Group> groups;
  std::map<ResourceId, Resource> resources;
  std::map<ResourceId, GroupId> owner;
  std::map<std::string, GroupId> collections;                        // collectionId -> group
  std::map<GroupId, std::unordered_map<std::string, ResourceId>> urls;  // normalized URL per group
  std::map<UserId, std::string> users;
  std::map<ResourceId, std::vector<capture::ArchiveRequestReceipt>> receipts;
  std::map<std::pair<ResourceId, GroupId>, CrawlAnnotation> annotations;
  std::map<std::string, linkrot::SeedStatus> liveness;  // normalized URL -> last audit
};

namespace detail {
std::string format_id(char prefix, std::uint64_t n);
std::uint64_t id_number(const std::string& id);
}  // namespace detail

}  // namespace curator
