#include <algorithm>
#include <mutex>
#include <unordered_set>

#include "curator/json_codec.hpp"
#include "curator/workspace.hpp"
#include "workspace_state.hpp"

namespace curator {

ImportReport Workspace::import_collection(const CollectionManifest& m) {
  std::unique_lock lock(mutex_);
  if (state_->collections.contains(m.collection_id)) {
    throw Error(ErrorCode::DuplicateCollection, "collection '" + m.collection_id + "' is already imported",
                m.collection_id);
  }

  const auto at = now();
  ImportReport report;
  report.group = peek_group_id();
  json resources = json::array();
  std::unordered_set<std::string> seen;
  std::uint64_t offset = 0;

  for (const auto& seed : m.seeds) {
    NormalizedUrl url;
    try {
      url = normalize_url(seed.url);
    } catch (const Error& e) {
      report.rejected.push_back({seed.line, seed.url, e.what()});
      continue;
    }
    if (!seen.insert(url.str()).second) {
      report.rejected.push_back({seed.line, seed.url, "duplicate URL within the collection"});
      continue;
    }

    Resource r;
    r.id = peek_resource_id(offset++);
    r.url = std::move(url);
    r.original_url = seed.url;
    r.title = seed.title;
    r.description = seed.description;
    r.author = seed.author;
    r.source.kind = SourceKind::archiveCollection;
    r.source.collection_id = m.collection_id;
    r.source.collector_name = m.collector_name;
    r.source.provider = m.title;
    if (seed.first_capture || seed.last_capture) {
      auto first = seed.first_capture ? *seed.first_capture : *seed.last_capture;
      auto last = seed.last_capture ? *seed.last_capture : *seed.first_capture;
      r.source.capture_period = CapturePeriod{first, last};
    }
    for (const auto& subject : seed.subjects) {
      try {
        r.tags.insert(Tag(subject));
      } catch (const Error&) {
        // blank or oversized subjects carry no usable label
      }
    }
    r.created_by = UserId("import");
    r.created_at = at;
    resources.push_back(std::move(r));
  }

  report.imported = resources.size();
  commit(json{{"type", "collectionImported"},
              {"group",
               {{"id", report.group},
                {"title", m.title},
                {"description", m.description},
                {"collectionId", m.collection_id},
                {"collectorName", m.collector_name}}},
              {"resources", std::move(resources)},
              {"at", to_millis(at)}});
  return report;
}

std::vector<CollectionSummary> Workspace::list_collections() const {
  std::shared_lock lock(mutex_);
  std::vector<CollectionSummary> out;
  for (const auto& [id, g] : state_->groups) {
    if (!g.read_only) continue;
    CollectionSummary s{id, g.title, g.description, g.resource_ids.size(), g.collector_name, std::nullopt};
    for (const auto& rid : g.resource_ids) {
      const auto& period = resource_ref(rid).source.capture_period;
      if (!period) continue;
      if (!s.capture_period) {
        s.capture_period = period;
      } else {
        s.capture_period->first = std::min(s.capture_period->first, period->first);
        s.capture_period->last = std::max(s.capture_period->last, period->last);
      }
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.title != b.title) return a.title < b.title;
    return a.id < b.id;
  });
  return out;
}

}  // namespace curator
