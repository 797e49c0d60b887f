#include "curator/search.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "curator/error.hpp"
#include "curator/text.hpp"

namespace curator::search {

std::vector<std::string> tokenize(std::string_view input) {
  std::vector<std::string> tokens;
  std::u32string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(text::encode_utf8(current));
      current.clear();
    }
  };
  for (char32_t cp : text::decode_utf8(input)) {
    if (text::is_word_char(cp)) {
      current.push_back(text::fold_case(cp));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::string_view to_string(FacetDimension d) {
  switch (d) {
    case FacetDimension::author: return "author";
    case FacetDimension::tags: return "tags";
    case FacetDimension::group: return "group";
    case FacetDimension::service: return "service";
    case FacetDimension::collector: return "collector";
    case FacetDimension::mediaType: return "mediaType";
  }
  return "author";
}

FacetDimension parse_facet_dimension(std::string_view s) {
  for (auto d : kFacetDimensions) {
    if (to_string(d) == s) return d;
  }
  throw Error(ErrorCode::BadQuery, "unknown facet dimension", std::string(s));
}

std::string normalize_facet_value(FacetDimension d, std::string_view value) {
  if (d == FacetDimension::group) return text::trim(value);
  return text::fold_case(text::trim(value));
}

IndexedDocument make_document(const Resource& r, const GroupId& group) {
  IndexedDocument doc;
  doc.id = r.id;
  doc.title = r.title;
  doc.description = r.description;
  doc.author = r.author;
  for (const auto& t : r.tags) doc.tags.push_back(t.label());
  doc.group = group;
  doc.service = r.source.provider;
  doc.collector = r.source.collector_name;
  doc.media_type = r.media_type;
  doc.host = r.url.host;
  doc.path = r.url.path;
  doc.capture_period = r.source.capture_period;
  switch (r.source.kind) {
    case SourceKind::archiveCollection: doc.badge = r.source.provider; break;
    case SourceKind::liveWeb: doc.badge = "Live web: " + r.source.provider; break;
    case SourceKind::upload: doc.badge = "Upload"; break;
  }
  return doc;
}

FacetValues facet_values(const IndexedDocument& doc) {
  FacetValues out;
  auto put = [&](FacetDimension d, std::string_view raw) {
    auto v = normalize_facet_value(d, raw);
    if (v.empty()) return;
    auto& vec = out[d];
    if (std::find(vec.begin(), vec.end(), v) == vec.end()) vec.push_back(std::move(v));
  };
  put(FacetDimension::author, doc.author);
  for (const auto& t : doc.tags) put(FacetDimension::tags, t);
  put(FacetDimension::group, doc.group.str());
  put(FacetDimension::service, doc.service);
  put(FacetDimension::collector, doc.collector);
  put(FacetDimension::mediaType, to_string(doc.media_type));
  return out;
}

namespace {

bool has_all(const FacetValues& values, const std::set<FacetConstraint>& normalized) {
  for (const auto& c : normalized) {
    auto it = values.find(c.dimension);
    if (it == values.end()) return false;
    if (std::find(it->second.begin(), it->second.end(), c.value) == it->second.end()) return false;
  }
  return true;
}

std::set<FacetConstraint> normalized(const std::set<FacetConstraint>& facets) {
  std::set<FacetConstraint> out;
  for (const auto& c : facets) out.insert({c.dimension, normalize_facet_value(c.dimension, c.value)});
  return out;
}

}  // namespace

bool matches_facets(const IndexedDocument& doc, const std::set<FacetConstraint>& facets) {
  if (facets.empty()) return true;
  return has_all(facet_values(doc), normalized(facets));
}

bool matches_scope(const IndexedDocument& doc, const QueryScope& scope) {
  if (scope.collections && !scope.collections->contains(doc.group)) return false;
  if (scope.domain) {
    std::string d = text::fold_case(text::trim(*scope.domain));
    while (!d.empty() && d.front() == '.') d.erase(d.begin());
    if (doc.host != d) {
      if (doc.host.size() <= d.size()) return false;
      if (doc.host.compare(doc.host.size() - d.size(), d.size(), d) != 0) return false;
      if (doc.host[doc.host.size() - d.size() - 1] != '.') return false;
    }
  }
  if (scope.path_prefix && !doc.path.starts_with(*scope.path_prefix)) return false;
  return true;
}

FacetCounts facet_counts(std::span<const IndexedDocument* const> docs) {
  FacetCounts counts;
  for (auto d : kFacetDimensions) counts[d];
  for (const auto* doc : docs) {
    for (const auto& [dim, values] : facet_values(*doc)) {
      for (const auto& v : values) ++counts[dim][v];
    }
  }
  return counts;
}

// --- SearchIndex --------------------------------------------------------------

SearchIndex::SearchIndex(Bm25Params params) : params_(params) {}

void SearchIndex::add(IndexedDocument doc) {
  std::unique_lock lock(mutex_);
  if (slot_of_.contains(doc.id)) throw Error(ErrorCode::Validation, "resource already indexed", doc.id.str());

  std::uint32_t slot_no;
  if (!free_slots_.empty()) {
    slot_no = free_slots_.back();
    free_slots_.pop_back();
  } else {
    slot_no = static_cast<std::uint32_t>(slots_.size());
    slots_.emplace_back();
  }
  Slot& slot = slots_[slot_no];
  slot = Slot{};

  std::unordered_map<std::string, FieldCounts> tf;
  auto count_field = [&](std::size_t field, std::string_view value) {
    for (auto& tok : tokenize(value)) {
      ++tf[tok][field];
      ++slot.lengths[field];
    }
  };
  count_field(0, doc.title);
  for (const auto& t : doc.tags) count_field(1, t);
  count_field(2, doc.description);
  count_field(3, doc.author);

  for (auto& [term, counts] : tf) {
    postings_[term].push_back(Posting{slot_no, counts});
    slot.terms.push_back(term);
  }
  for (std::size_t f = 0; f < kFields; ++f) total_lengths_[f] += slot.lengths[f];
  for (const auto& [dim, values] : facet_values(doc)) {
    for (const auto& v : values) slot.facets.push_back(intern_facet(dim, v));
  }
  slot_of_.emplace(doc.id, slot_no);
  slot.doc = std::move(doc);
  slot.live = true;
}

std::uint32_t SearchIndex::intern_facet(FacetDimension d, const std::string& value) {
  FacetConstraint key{d, value};
  auto [it, inserted] = facet_ids_.try_emplace(key, static_cast<std::uint32_t>(facet_names_.size()));
  if (inserted) facet_names_.push_back(std::move(key));
  return it->second;
}

bool SearchIndex::remove(const ResourceId& id) {
  std::unique_lock lock(mutex_);
  auto it = slot_of_.find(id);
  if (it == slot_of_.end()) return false;
  auto slot_no = it->second;
  Slot& slot = slots_[slot_no];
  for (const auto& term : slot.terms) {
    auto pit = postings_.find(term);
    if (pit == postings_.end()) continue;
    auto& list = pit->second;
    list.erase(std::remove_if(list.begin(), list.end(), [&](const Posting& p) { return p.slot == slot_no; }),
               list.end());
    if (list.empty()) postings_.erase(pit);
  }
  for (std::size_t f = 0; f < kFields; ++f) total_lengths_[f] -= slot.lengths[f];
  slot = Slot{};
  free_slots_.push_back(slot_no);
  slot_of_.erase(it);
  return true;
}

bool SearchIndex::contains(const ResourceId& id) const {
  std::shared_lock lock(mutex_);
  return slot_of_.contains(id);
}

std::size_t SearchIndex::size() const {
  std::shared_lock lock(mutex_);
  return slot_of_.size();
}

void SearchIndex::clear() {
  std::unique_lock lock(mutex_);
  slots_.clear();
  free_slots_.clear();
  slot_of_.clear();
  postings_.clear();
  total_lengths_ = {};
  facet_ids_.clear();
  facet_names_.clear();
}

SearchResult SearchIndex::search(const SearchQuery& q) const {
  if (q.page == 0) throw Error(ErrorCode::BadQuery, "page must be positive");
  if (q.page_size == 0 || q.page_size > kMaxPageSize) throw Error(ErrorCode::BadQuery, "pageSize must be in [1, 100]");

  auto tokens = tokenize(q.keywords);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  if (tokens.empty() && q.facets.empty() && !q.scope.restricts_set()) {
    throw Error(ErrorCode::BadQuery, "query needs keywords, a facet or a scope restriction");
  }

  std::shared_lock lock(mutex_);
  const std::size_t n_docs = slot_of_.size();
  std::array<bool, kFields> use{true, true, true, true};
  if (q.scope.title_only) use = {true, false, false, false};

  double avg_len = 0.0;
  for (std::size_t f = 0; f < kFields; ++f) {
    if (use[f]) avg_len += params_.field_weights[f] * static_cast<double>(total_lengths_[f]);
  }
  avg_len = n_docs ? avg_len / static_cast<double>(n_docs) : 0.0;

  struct Candidate {
    std::uint32_t slot;
    double score;
  };
  std::vector<Candidate> candidates;

  if (tokens.empty()) {
    for (std::uint32_t s = 0; s < slots_.size(); ++s) {
      if (slots_[s].live) candidates.push_back({s, 0.0});
    }
  } else {
    struct Acc {
      std::size_t matched = 0;
      double score = 0.0;
    };
    std::vector<Acc> acc(slots_.size());
    for (const auto& term : tokens) {
      auto pit = postings_.find(term);
      if (pit == postings_.end()) return SearchResult{{}, facet_counts({}), 0};
      const auto& list = pit->second;
      std::size_t df = 0;
      for (const auto& p : list) {
        for (std::size_t f = 0; f < kFields; ++f) {
          if (use[f] && p.tf[f] > 0) {
            ++df;
            break;
          }
        }
      }
      double idf = std::log(1.0 + (static_cast<double>(n_docs) - df + 0.5) / (df + 0.5));
      for (const auto& p : list) {
        double tfw = 0.0;
        double dl = 0.0;
        for (std::size_t f = 0; f < kFields; ++f) {
          if (!use[f]) continue;
          tfw += params_.field_weights[f] * p.tf[f];
          dl += params_.field_weights[f] * slots_[p.slot].lengths[f];
        }
        if (tfw <= 0.0) continue;
        double norm = avg_len > 0.0 ? dl / avg_len : 1.0;
        auto& a = acc[p.slot];
        ++a.matched;
        a.score += idf * tfw * (params_.k1 + 1.0) / (tfw + params_.k1 * (1.0 - params_.b + params_.b * norm));
      }
    }
    for (std::uint32_t s = 0; s < acc.size(); ++s) {
      if (acc[s].matched == tokens.size()) candidates.push_back({s, acc[s].score});
    }
  }

  std::vector<std::uint32_t> required;
  bool satisfiable = true;
  for (const auto& c : normalized(q.facets)) {
    auto it = facet_ids_.find(c);
    if (it == facet_ids_.end()) {
      satisfiable = false;
      break;
    }
    required.push_back(it->second);
  }

  SearchResult result;
  for (auto d : kFacetDimensions) result.facet_counts[d];
  std::vector<Candidate> filtered;
  std::vector<std::size_t> tallies(facet_names_.size(), 0);
  for (const auto& c : candidates) {
    if (!satisfiable) break;
    const auto& slot = slots_[c.slot];
    if (!matches_scope(slot.doc, q.scope)) continue;
    bool ok = std::all_of(required.begin(), required.end(), [&](std::uint32_t id) {
      return std::find(slot.facets.begin(), slot.facets.end(), id) != slot.facets.end();
    });
    if (!ok) continue;
    filtered.push_back(c);
    for (auto id : slot.facets) ++tallies[id];
  }
  for (std::size_t id = 0; id < tallies.size(); ++id) {
    if (tallies[id]) result.facet_counts[facet_names_[id].dimension][facet_names_[id].value] = tallies[id];
  }

  auto recency = [&](const Candidate& c) -> const std::optional<CapturePeriod>& {
    return slots_[c.slot].doc.capture_period;
  };
  const std::size_t begin = (q.page - 1) * q.page_size;
  const std::size_t end = std::min(filtered.size(), begin + q.page_size);
  auto ranked = [&](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    const auto& ra = recency(a);
    const auto& rb = recency(b);
    if (ra.has_value() != rb.has_value()) return ra.has_value();
    if (ra && ra->last != rb->last) return ra->last > rb->last;
    return slots_[a.slot].doc.id < slots_[b.slot].doc.id;
  };
  if (begin < end) std::partial_sort(filtered.begin(), filtered.begin() + end, filtered.end(), ranked);

  result.total = filtered.size();
  for (std::size_t i = begin; i < end; ++i) {
    const auto& doc = slots_[filtered[i].slot].doc;
    Hit hit;
    hit.resource = doc.id;
    hit.score = filtered[i].score;
    hit.source_badge = doc.badge;
    if (doc.capture_period) hit.capture = CaptureSummary{doc.capture_period->first, doc.capture_period->last, {}};
    result.hits.push_back(std::move(hit));
  }
  return result;
}

}  // namespace curator::search
