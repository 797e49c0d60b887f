#include "support.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#ifndef CURATOR_FIXTURE_DIR
#error "CURATOR_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace curator::testing {

namespace fs = std::filesystem;

fs::path fixture(const std::string& relative) { return fs::path(CURATOR_FIXTURE_DIR) / relative; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
}

TempDir::TempDir() {
  std::string pattern = (fs::temp_directory_path() / "curator-test-XXXXXX").string();
  if (!::mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

// --- clock / fakes ----------------------------------------------------------------

ManualClock::ManualClock(std::int64_t start_ms) : ms_(std::make_shared<std::atomic<std::int64_t>>(start_ms)) {}

Clock ManualClock::clock() const {
  auto ms = ms_;
  return [ms] { return from_millis(ms->load()); };
}

void ManualClock::advance(std::chrono::milliseconds d) { *ms_ += d.count(); }

Instant ManualClock::now() const { return from_millis(ms_->load()); }

HttpResponse FakeTransport::get(const std::string& url, const HeaderList&) { return call("GET", url); }
HttpResponse FakeTransport::head(const std::string& url, const HeaderList&) { return call("HEAD", url); }

HttpResponse FakeTransport::call(const std::string& method, const std::string& url) {
  {
    std::lock_guard lock(mutex_);
    requests_.push_back(method + " " + url);
  }
  return handler_(method, url);
}

std::vector<std::string> FakeTransport::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

std::size_t FakeTransport::request_count() const {
  std::lock_guard lock(mutex_);
  return requests_.size();
}

linkrot::SeedStatus ScriptedChecker::probe(const std::string& url) {
  ++probes_;
  auto it = table_.find(url);
  return it == table_.end() ? linkrot::SeedStatus::otherError : it->second;
}

// --- corpora ------------------------------------------------------------------------

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words{
      "human",   "rights",   "tibet",    "occupy",   "movement", "archive",  "protest", "news",
      "report",  "freedom",  "press",    "refugee",  "camp",     "march",    "city",    "wall",
      "street",  "oakland",  "boston",   "library",  "columbia", "global",   "events",  "social",
      "media",   "video",    "photo",    "statement", "campaign", "justice", "law",     "court",
      "prison",  "torture",  "women",    "children", "religion", "minority", "election", "youth",
      "labor",   "union",    "strike",   "health",   "water",    "land",     "forest",  "river",
      "2008",    "2011",     "2012",     "2015",     "burma",    "china",    "uyghur",  "nepal"};
  return words;
}

std::string random_words(Rng& rng, std::size_t min_words, std::size_t max_words) {
  const auto& v = vocabulary();
  // Skewed choice so that a few words are common and multi-word queries still hit.
  std::uniform_int_distribution<std::size_t> count(min_words, max_words);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::string out;
  auto n = count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    auto idx = static_cast<std::size_t>(std::pow(u(rng), 2.0) * static_cast<double>(v.size()));
    if (!out.empty()) out += rng() % 5 == 0 ? ", " : " ";
    std::string w = v[std::min(idx, v.size() - 1)];
    if (rng() % 4 == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    out += w;
  }
  return out;
}

Timestamp14 random_timestamp(Rng& rng, int first_year, int last_year) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int y = first_year + static_cast<int>(rng() % static_cast<unsigned>(last_year - first_year + 1));
  int m = 1 + static_cast<int>(rng() % 12);
  int days = kDays[m - 1] + (m == 2 && y % 4 == 0 && (y % 100 != 0 || y % 400 == 0) ? 1 : 0);
  int d = 1 + static_cast<int>(rng() % static_cast<unsigned>(days));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d%02d%02d%02d%02d%02d", y, m, d, static_cast<int>(rng() % 24),
                static_cast<int>(rng() % 60), static_cast<int>(rng() % 60));
  return Timestamp14::parse(buf);
}

CollectionManifest synthetic_manifest(Rng& rng, const ManifestShape& shape) {
  static const std::vector<std::string> tlds{"org", "net", "com", "org.uk", "info"};
  static const std::vector<std::string> paths{"", "about", "news", "reports/2011", "blog/post", "media/photos"};
  CollectionManifest m;
  m.collection_id = shape.collection_id;
  m.title = shape.title;
  m.description = "Synthetic collection " + shape.collection_id + ": " + random_words(rng, 3, 8);
  m.collector_name = shape.collector;
  std::set<std::string> used;
  while (m.seeds.size() < shape.seeds) {
    auto host_no = rng() % std::max<std::size_t>(shape.host_pool, 1);
    std::string host = "site" + std::to_string(host_no) + "." + tlds[host_no % tlds.size()];
    if (host_no % 3 == 0) host = "www." + host;
    std::string url = (rng() % 4 == 0 ? "https://" : "http://") + host + "/" + paths[rng() % paths.size()];
    if (rng() % 3 == 0) url += "/page" + std::to_string(rng() % 1000);
    if (!used.insert(url).second) continue;

    SeedRecord s;
    s.url = url;
    s.title = random_words(rng, 1, 5);
    s.description = random_words(rng, 0, 12);
    static const std::vector<std::string> authors{"", "", "Human Rights Watch", "Amnesty International",
                                                  "Occupy Wall Street", "Tibet Information Network",
                                                  "Columbia University Libraries"};
    s.author = authors[rng() % authors.size()];
    auto n_subjects = rng() % 4;
    for (std::size_t i = 0; i < n_subjects; ++i) s.subjects.push_back(random_words(rng, 1, 2));
    if (rng() % 5 != 0) {
      auto a = random_timestamp(rng);
      auto b = random_timestamp(rng);
      s.first_capture = std::min(a, b);
      s.last_capture = std::max(a, b);
    }
    m.seeds.push_back(std::move(s));
  }
  return m;
}

std::vector<capture::Capture> random_captures(Rng& rng, std::size_t n) {
  std::vector<capture::Capture> out;
  std::set<std::string> seen;
  while (out.size() < n) {
    capture::Capture c;
    c.urlkey = "org,example)/";
    c.timestamp = random_timestamp(rng, 1996, 2024);
    c.original = "http://example.org/";
    c.mime_type = "text/html";
    c.status_code = 200;
    c.digest = "D" + std::to_string(out.size());
    c.length = rng() % 100000;
    if (!seen.insert(c.timestamp.str()).second) continue;
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  return out;
}

// --- workload ---------------------------------------------------------------------------

RandomWorkload::RandomWorkload(Workspace& ws, std::uint64_t seed) : ws_(ws), rng_(seed) {
  for (const auto& g : ws_.groups()) groups_.push_back(g.id);
}

void RandomWorkload::run(std::size_t operations) {
  for (std::size_t i = 0; i < operations; ++i) step();
}

GroupId RandomWorkload::pick_group() {
  if (groups_.empty() || rng_() % 25 == 0) {
    auto owner = pick_user();
    groups_.push_back(ws_.create_group(owner, "Group " + random_words(rng_, 1, 3), random_words(rng_, 0, 6)));
  }
  return groups_[rng_() % groups_.size()];
}

std::optional<ResourceId> RandomWorkload::pick_resource(const GroupId& g) {
  auto ids = ws_.group(g).resource_ids;
  if (ids.empty()) return std::nullopt;
  return ids[rng_() % ids.size()];
}

UserId RandomWorkload::pick_user() {
  static const std::array<const char*, 3> users{"alice", "bob", "carol"};
  return UserId(users[rng_() % users.size()]);
}

std::string RandomWorkload::pick_url() {
  return "http://site" + std::to_string(rng_() % 30) + ".org/" + vocabulary()[rng_() % vocabulary().size()];
}

void RandomWorkload::step() {
  ++stats_.attempted;
  try {
    auto g = pick_group();
    auto user = pick_user();
    auto rid = pick_resource(g);
    switch (rng_() % 16) {
      case 0: ws_.join_group(g, user); break;
      case 1: ws_.leave_group(g, user); break;
      case 2:
      case 3: {
        Upload up;
        up.url = pick_url();
        up.title = random_words(rng_, 1, 4);
        up.description = random_words(rng_, 0, 8);
        ws_.add_resource(g, user, up);
        break;
      }
      case 4: {
        auto src = pick_resource(groups_[rng_() % groups_.size()]);
        if (!src) return;
        ws_.add_resource(g, user, *src);
        break;
      }
      case 5:
        if (!rid) return;
        ws_.remove_resource(g, *rid, user);
        break;
      case 6: {
        if (!rid) return;
        ws_.move_resource(*rid, g, groups_[rng_() % groups_.size()], user);
        break;
      }
      case 7:
        if (!rid) return;
        ws_.add_tag(*rid, vocabulary()[rng_() % vocabulary().size()], user);
        break;
      case 8: {
        if (!rid) return;
        auto tags = ws_.resource(*rid).tags;
        if (tags.empty()) return;
        ws_.remove_tag(*rid, tags.begin()->label(), user);
        break;
      }
      case 9:
        if (!rid) return;
        ws_.add_comment(*rid, rng_() % 10 == 0 ? "  " : random_words(rng_, 1, 10), user);
        break;
      case 10: {
        if (!rid) return;
        MetadataPatch p;
        if (rng_() % 2) p.title = random_words(rng_, 1, 4);
        if (rng_() % 2) p.description = random_words(rng_, 0, 8);
        if (rng_() % 3 == 0) p.custom_fields["note"] = random_words(rng_, 1, 2);
        if (rng_() % 5 == 0) p.custom_fields["note"] = std::nullopt;
        ws_.edit_metadata(*rid, p, user);
        break;
      }
      case 11: {
        if (!rid) return;
        CrawlAnnotation a{static_cast<CrawlFrequency>(rng_() % 6), static_cast<CrawlDepth>(rng_() % 2),
                          random_words(rng_, 0, 6)};
        ws_.set_crawl_annotation(*rid, g, a, user);
        break;
      }
      case 12:
        if (rng_() % 4) return;
        groups_.push_back(ws_.copy_group(g, user, "Copy " + random_words(rng_, 1, 2)));
        break;
      case 13: {
        if (rng_() % 4) return;
        std::vector<GroupId> sources{g, groups_[rng_() % groups_.size()]};
        groups_.push_back(ws_.merge_groups(sources, user, "Merged " + random_words(rng_, 1, 2)).group);
        break;
      }
      case 14: {
        std::vector<ResourceId> ids;
        for (int i = 0; i < 4; ++i) {
          if (auto r = pick_resource(groups_[rng_() % groups_.size()])) ids.push_back(*r);
        }
        ws_.bulk_tag(ids, vocabulary()[rng_() % vocabulary().size()], user);
        break;
      }
      case 15:
        if (ws_.group(g).parent || rng_() % 3) return;
        groups_.push_back(ws_.create_subgroup(g, user, "Sub " + random_words(rng_, 1, 2)));
        break;
    }
    ++stats_.succeeded;
  } catch (const Error& e) {
    ++stats_.rejected[e.code()];
  }
}

// --- oracle -----------------------------------------------------------------------------

namespace {

std::string lower_trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  std::string out = s.substr(b, e - b + 1);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim_only(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Values a document exposes per dimension, normalized, empties omitted.
std::map<std::string, std::set<std::string>> oracle_values(const OracleDoc& d) {
  std::map<std::string, std::set<std::string>> v;
  auto put = [&](const char* dim, const std::string& raw, bool fold) {
    auto n = fold ? lower_trim(raw) : trim_only(raw);
    if (!n.empty()) v[dim].insert(n);
  };
  put("author", d.author, true);
  for (const auto& t : d.tags) put("tags", t, true);
  put("group", d.group.str(), false);
  put("service", d.service, true);
  put("collector", d.collector, true);
  put("mediaType", d.media, true);
  return v;
}

}  // namespace

std::vector<OracleDoc> oracle_corpus(const Workspace& ws) {
  std::vector<OracleDoc> out;
  for (const auto& g : ws.groups()) {
    for (const auto& r : ws.group_resources(g.id)) {
      OracleDoc d;
      d.id = r.id;
      d.group = g.id;
      d.title = r.title;
      d.description = r.description;
      d.author = r.author;
      d.service = r.source.provider;
      d.collector = r.source.collector_name;
      d.media = std::string(to_string(r.media_type));
      d.host = r.url.host;
      d.path = r.url.path;
      for (const auto& t : r.tags) d.tags.push_back(t.label());
      for (auto& t : oracle_tokens(d.title)) d.title_terms.insert(t);
      for (const auto* field : {&d.description, &d.author}) {
        for (auto& t : oracle_tokens(*field)) d.other_terms.insert(t);
      }
      for (const auto& tag : d.tags) {
        for (auto& t : oracle_tokens(tag)) d.other_terms.insert(t);
      }
      d.values = oracle_values(d);
      out.push_back(std::move(d));
    }
  }
  return out;
}

std::vector<std::string> oracle_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool oracle_matches(const OracleDoc& d, const search::SearchQuery& q) {
  for (const auto& t : oracle_tokens(q.keywords)) {
    if (d.title_terms.contains(t)) continue;
    if (q.scope.title_only || !d.other_terms.contains(t)) return false;
  }

  for (const auto& c : q.facets) {
    auto dim = std::string(search::to_string(c.dimension));
    auto want = c.dimension == search::FacetDimension::group ? trim_only(c.value) : lower_trim(c.value);
    auto it = d.values.find(dim);
    if (it == d.values.end() || !it->second.contains(want)) return false;
  }

  if (q.scope.collections && !q.scope.collections->contains(d.group)) return false;
  if (q.scope.domain) {
    auto dom = lower_trim(*q.scope.domain);
    while (!dom.empty() && dom[0] == '.') dom.erase(0, 1);
    bool ok = d.host == dom || (d.host.size() > dom.size() + 1 && d.host.ends_with("." + dom));
    if (!ok) return false;
  }
  if (q.scope.path_prefix && d.path.rfind(*q.scope.path_prefix, 0) != 0) return false;
  return true;
}

std::map<std::string, std::map<std::string, std::size_t>> oracle_facet_counts(
    const std::vector<const OracleDoc*>& docs) {
  std::map<std::string, std::map<std::string, std::size_t>> out;
  for (const char* dim : {"author", "tags", "group", "service", "collector", "mediaType"}) out[dim];
  for (const auto* d : docs) {
    for (const auto& [dim, vals] : d->values) {
      for (const auto& v : vals) ++out[dim][v];
    }
  }
  return out;
}

std::map<std::string, std::map<std::string, std::size_t>> to_plain(const search::FacetCounts& counts) {
  std::map<std::string, std::map<std::string, std::size_t>> out;
  for (const auto& [dim, vals] : counts) out[std::string(search::to_string(dim))] = vals;
  return out;
}

std::vector<search::Hit> all_hits(const Workspace& ws, search::SearchQuery q) {
  std::vector<search::Hit> out;
  q.page_size = search::kMaxPageSize;
  for (q.page = 1;; ++q.page) {
    auto r = ws.search(q);
    out.insert(out.end(), r.hits.begin(), r.hits.end());
    if (out.size() >= r.total || r.hits.empty()) break;
  }
  return out;
}

std::string seed_fields_key(const Resource& r) {
  std::string key = r.url.str() + '\x1f' + r.original_url + '\x1f' + r.title + '\x1f' + r.description + '\x1f' +
                    r.author + '\x1f' + r.source.collector_name + '\x1f';
  for (const auto& t : r.tags) key += t.label() + ',';
  if (r.source.capture_period) key += r.source.capture_period->first.str() + "-" + r.source.capture_period->last.str();
  return key;
}

bool seed_fields_equal(const Resource& a, const Resource& b) { return seed_fields_key(a) == seed_fields_key(b); }

}  // namespace curator::testing
