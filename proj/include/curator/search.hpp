#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "curator/domain.hpp"

namespace curator::search {

/// Lowercased runs of word characters; every other character separates.
std::vector<std::string> tokenize(std::string_view text);

enum class FacetDimension { author, tags, group, service, collector, mediaType };

inline constexpr std::array kFacetDimensions{FacetDimension::author,  FacetDimension::tags,
                                             FacetDimension::group,   FacetDimension::service,
                                             FacetDimension::collector, FacetDimension::mediaType};

std::string_view to_string(FacetDimension d);
FacetDimension parse_facet_dimension(std::string_view s);

/// Applied identically to indexed values and to constraint values.
std::string normalize_facet_value(FacetDimension d, std::string_view value);

struct FacetConstraint {
  FacetDimension dimension;
  std::string value;
  friend auto operator<=>(const FacetConstraint&, const FacetConstraint&) = default;
};

struct QueryScope {
  std::optional<std::set<GroupId>> collections;
  std::optional<std::string> domain;       // host suffix
  std::optional<std::string> path_prefix;
  bool title_only = false;

  bool restricts_set() const { return collections || domain || path_prefix; }
};

inline constexpr std::size_t kDefaultPageSize = 12;
inline constexpr std::size_t kMaxPageSize = 100;

struct SearchQuery {
  std::string keywords;
  std::set<FacetConstraint> facets;
  QueryScope scope;
  std::size_t page = 1;
  std::size_t page_size = kDefaultPageSize;
};

struct CaptureSummary {
  Timestamp14 first;
  Timestamp14 last;
  std::optional<std::size_t> count;
};

struct Hit {
  ResourceId resource;
  double score = 0.0;
  std::string source_badge;
  std::optional<CaptureSummary> capture;
};

using FacetCounts = std::map<FacetDimension, std::map<std::string, std::size_t>>;

struct SearchResult {
  std::vector<Hit> hits;  // the requested page
  FacetCounts facet_counts;
  std::size_t total = 0;
};

/// Flattened view of a resource as the index sees it.
struct IndexedDocument {
  ResourceId id;
  std::string title;
  std::string description;
  std::string author;
  std::vector<std::string> tags;
  GroupId group;
  std::string service;
  std::string collector;
  MediaType media_type = MediaType::webpage;
  std::string host;
  std::string path;
  std::optional<CapturePeriod> capture_period;
  std::string badge;
};

IndexedDocument make_document(const Resource& r, const GroupId& group);

using FacetValues = std::map<FacetDimension, std::vector<std::string>>;

/// Facet values of one document, already normalized; empty values are omitted.
FacetValues facet_values(const IndexedDocument& doc);

bool matches_facets(const IndexedDocument& doc, const std::set<FacetConstraint>& facets);
bool matches_scope(const IndexedDocument& doc, const QueryScope& scope);

/// Per-dimension value tallies; every dimension is present, possibly empty.
FacetCounts facet_counts(std::span<const IndexedDocument* const> docs);

/// BM25 over a weighted field combination: the term frequency and the
/// document length are sums over fields scaled by the field weight, and the
/// idf is ln(1 + (N - df + 0.5) / (df + 0.5)).
struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
  // title, tags, description, author
  std::array<double, 4> field_weights{3.0, 2.0, 1.0, 1.0};
};

class SearchIndex {
 public:
  explicit SearchIndex(Bm25Params params = {});

  /// Throws Validation if the id is already indexed.
  void add(IndexedDocument doc);
  bool remove(const ResourceId& id);
  bool contains(const ResourceId& id) const;
  std::size_t size() const;
  void clear();

  /// Throws BadQuery when the keywords carry no tokens and neither facets nor a
  /// scope restriction are given.
  SearchResult search(const SearchQuery& q) const;

  const Bm25Params& params() const { return params_; }

 private:
  static constexpr std::size_t kFields = 4;
  using FieldCounts = std::array<std::uint32_t, kFields>;

  struct Posting {
    std::uint32_t slot;
    FieldCounts tf;
  };
  struct Slot {
    IndexedDocument doc;
    FieldCounts lengths{};
    std::vector<std::string> terms;
    std::vector<std::uint32_t> facets;  // interned (dimension, value) ids
    bool live = false;
  };

  std::uint32_t intern_facet(FacetDimension d, const std::string& value);

  Bm25Params params_;
  mutable std::shared_mutex mutex_;
  std::vector<Slot> slots_;
  std::vector<std::uint32_t> free_slots_;
  std::unordered_map<ResourceId, std::uint32_t> slot_of_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::array<std::uint64_t, kFields> total_lengths_{};
  std::map<FacetConstraint, std::uint32_t> facet_ids_;
  std::vector<FacetConstraint> facet_names_;
};

}  // namespace curator::search
