#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "curator/capture.hpp"
#include "curator/http_transport.hpp"
#include "curator/linkrot.hpp"
#include "curator/manifest.hpp"
#include "curator/search.hpp"
#include "curator/workspace.hpp"

namespace curator::testing {

std::filesystem::path fixture(const std::string& relative);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& data);

/// Directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Deterministic clock shared by copies.
class ManualClock {
 public:
  explicit ManualClock(std::int64_t start_ms = 1'318'000'000'000);
  Clock clock() const;
  void advance(std::chrono::milliseconds d);
  Instant now() const;

 private:
  std::shared_ptr<std::atomic<std::int64_t>> ms_;
};

/// Transport answering from a callback and logging every request.
class FakeTransport : public HttpTransport {
 public:
  using Handler = std::function<HttpResponse(const std::string& method, const std::string& url)>;
  explicit FakeTransport(Handler h) : handler_(std::move(h)) {}

  using HttpTransport::get;
  using HttpTransport::head;
  HttpResponse get(const std::string& url, const HeaderList& headers) override;
  HttpResponse head(const std::string& url, const HeaderList& headers) override;

  std::vector<std::string> requests() const;
  std::size_t request_count() const;

 private:
  HttpResponse call(const std::string& method, const std::string& url);
  Handler handler_;
  mutable std::mutex mutex_;
  std::vector<std::string> requests_;
};

/// Liveness checker answering from a table; unknown URLs are otherError.
class ScriptedChecker : public linkrot::LivenessChecker {
 public:
  explicit ScriptedChecker(std::map<std::string, linkrot::SeedStatus> table) : table_(std::move(table)) {}
  linkrot::SeedStatus probe(const std::string& url) override;
  std::size_t probes() const { return probes_; }

 private:
  std::map<std::string, linkrot::SeedStatus> table_;
  std::atomic<std::size_t> probes_{0};
};

// --- synthetic corpora -----------------------------------------------------------

using Rng = std::mt19937_64;

/// Small ASCII vocabulary so a brute-force oracle can tokenize independently.
const std::vector<std::string>& vocabulary();
std::string random_words(Rng& rng, std::size_t min_words, std::size_t max_words);
Timestamp14 random_timestamp(Rng& rng, int first_year = 2008, int last_year = 2015);

struct ManifestShape {
  std::string collection_id;
  std::string title;
  std::string collector;
  std::size_t seeds = 10;
  std::size_t host_pool = 40;  // distinct hosts to draw from
};
CollectionManifest synthetic_manifest(Rng& rng, const ManifestShape& shape);

/// Random captures with valid timestamps, ascending and duplicate-free.
std::vector<capture::Capture> random_captures(Rng& rng, std::size_t n);

// --- random workloads ------------------------------------------------------------

struct WorkloadStats {
  std::size_t attempted = 0;
  std::size_t succeeded = 0;
  std::map<ErrorCode, std::size_t> rejected;
};

/// Drives a mix of curation and enrichment calls by alice, bob and carol
/// against whatever groups exist, including read-only ones. Library errors
/// are counted, anything else propagates.
class RandomWorkload {
 public:
  RandomWorkload(Workspace& ws, std::uint64_t seed);
  void run(std::size_t operations);
  void step();
  const WorkloadStats& stats() const { return stats_; }

 private:
  GroupId pick_group();
  std::optional<ResourceId> pick_resource(const GroupId& g);
  UserId pick_user();
  std::string pick_url();

  Workspace& ws_;
  Rng rng_;
  std::vector<GroupId> groups_;
  WorkloadStats stats_;
};

// --- search oracle -------------------------------------------------------------

/// Straight scan over resource records, written without the index code.
struct OracleDoc {
  ResourceId id;
  GroupId group;
  std::string title, description, author, service, collector, media, host, path;
  std::vector<std::string> tags;
  // derived once by oracle_corpus
  std::set<std::string> title_terms, other_terms;
  std::map<std::string, std::set<std::string>> values;
};

std::vector<OracleDoc> oracle_corpus(const Workspace& ws);
std::vector<std::string> oracle_tokens(const std::string& s);
bool oracle_matches(const OracleDoc& d, const search::SearchQuery& q);
std::map<std::string, std::map<std::string, std::size_t>> oracle_facet_counts(const std::vector<const OracleDoc*>& docs);
std::map<std::string, std::map<std::string, std::size_t>> to_plain(const search::FacetCounts& counts);

/// Every hit across all pages, in order.
std::vector<search::Hit> all_hits(const Workspace& ws, search::SearchQuery q);

/// Field-level comparison used by round-trip checks: everything a manifest
/// carries (url, original url, title, description, author, tags, capture
/// period, collector).
bool seed_fields_equal(const Resource& a, const Resource& b);
std::string seed_fields_key(const Resource& r);

}  // namespace curator::testing
