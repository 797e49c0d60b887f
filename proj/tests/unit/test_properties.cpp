#include <doctest.h>

#include <set>

#include "curator/capture.hpp"
#include "curator/error.hpp"
#include "curator/workspace.hpp"
#include "support.hpp"

using namespace curator;
using namespace curator::testing;

namespace {

std::string random_url(Rng& rng) {
  static const std::vector<std::string> schemes{"http", "HTTP", "https", "Https"};
  static const std::vector<std::string> hosts{"example.org", "WWW.HRW.ORG", "occupywallst.org.", "Tibet.Net",
                                              "a-b.example.co.uk", "127.0.0.1", "[::1]"};
  static const std::vector<std::string> segments{"", "a", "News", ".", "..", "%7e", "x%2f", "a b", "~u", "2011"};
  std::string url = schemes[rng() % schemes.size()] + "://" + hosts[rng() % hosts.size()];
  switch (rng() % 4) {
    case 0: url += ":80"; break;
    case 1: url += ":443"; break;
    case 2: url += ":" + std::to_string(1 + rng() % 65535); break;
    default: break;
  }
  auto depth = rng() % 5;
  for (std::size_t i = 0; i < depth; ++i) url += "/" + segments[rng() % segments.size()];
  if (rng() % 3 == 0) url += "/";
  if (rng() % 4 == 0) url += "?q=" + vocabulary()[rng() % vocabulary().size()];
  if (rng() % 4 == 0) url += "#frag";
  return url;
}

std::set<std::string> url_set(const Workspace& ws, const GroupId& g) {
  std::set<std::string> out;
  for (const auto& r : ws.group_resources(g)) out.insert(r.url.str());
  return out;
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("URL normalization is idempotent") {
    Rng rng(1);
    for (int i = 0; i < 3000; ++i) {
      auto raw = random_url(rng);
      CAPTURE(raw);
      auto once = normalize_url(raw);
      CHECK(normalize_url(once.str()) == once);
      CHECK(once.str() == normalize_url(once.str()).str());
    }
  }

  TEST_CASE("tags and timestamps round-trip") {
    Rng rng(2);
    for (int i = 0; i < 2000; ++i) {
      auto words = random_words(rng, 1, 4);
      Tag t(words);
      CHECK(Tag(t.label()) == t);
      auto ts = random_timestamp(rng, 1996, 2030);
      CHECK(parse_timestamp14(ts.str()) == ts);
      CHECK(Timestamp14::from_time(ts.time()) == ts);
    }
  }

  TEST_CASE("timeline bins conserve the capture count") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
      auto caps = random_captures(rng, rng() % 500);
      for (auto g : {capture::Granularity::year, capture::Granularity::month}) {
        auto t = capture::build_timeline(caps, g);
        std::size_t sum = 0;
        for (const auto& b : t.bins) sum += b.count;
        CHECK(sum == caps.size());
        for (std::size_t k = 1; k < t.bins.size(); ++k) CHECK(t.bins[k - 1].period < t.bins[k].period);
      }
    }
  }

  TEST_CASE("index add then remove leaves results unchanged") {
    Rng rng(4);
    Workspace ws;
    ws.import_collection(synthetic_manifest(rng, {"base", "Base", "Collector", 80}));
    auto g = ws.create_group(UserId("alice"), "Scratch", "");
    for (int i = 0; i < 50; ++i) {
      search::SearchQuery q;
      q.keywords = vocabulary()[rng() % vocabulary().size()];
      auto before = all_hits(ws, q);
      Upload up;
      up.url = "http://scratch.org/" + std::to_string(i);
      up.title = q.keywords + " " + random_words(rng, 0, 3);
      auto rid = ws.add_resource(g, UserId("alice"), up);
      CHECK(all_hits(ws, q).size() == before.size() + 1);
      ws.remove_resource(g, rid, UserId("alice"));
      auto after = all_hits(ws, q);
      REQUIRE(after.size() == before.size());
      for (std::size_t k = 0; k < after.size(); ++k) {
        CHECK(after[k].resource == before[k].resource);
        CHECK(after[k].score == doctest::Approx(before[k].score).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("random workloads keep structural invariants") {
    for (std::uint64_t seed = 10; seed < 16; ++seed) {
      CAPTURE(seed);
      Rng rng(seed);
      Workspace ws;
      auto ro = ws.import_collection(synthetic_manifest(rng, {"ro", "Read only", "Collector", 40})).group;
      auto ro_hash = ws.snapshot_hash(ro);
      RandomWorkload load(ws, seed);
      load.run(400);
      CHECK(load.stats().succeeded > 50);
      CHECK(ws.snapshot_hash(ro) == ro_hash);

      std::set<ResourceId> seen;
      std::size_t count = 0;
      for (const auto& g : ws.groups()) {
        std::set<std::string> urls;
        for (const auto& rid : g.resource_ids) {
          CHECK(seen.insert(rid).second);
          CHECK(ws.group_of(rid) == g.id);
          CHECK(urls.insert(ws.resource(rid).url.str()).second);
          ++count;
        }
        if (g.parent) CHECK_FALSE(ws.group(*g.parent).parent.has_value());
      }
      CHECK(count == ws.resource_count());

      Workspace copy;
      copy.load_snapshot(ws.snapshot());
      CHECK(copy.snapshot() == ws.snapshot());
    }
  }

  TEST_CASE("copy and merge laws") {
    Rng rng(20);
    Workspace ws;
    std::vector<GroupId> groups;
    for (int i = 0; i < 6; ++i) {
      groups.push_back(ws.import_collection(synthetic_manifest(
                                                rng, {"c" + std::to_string(i), "C" + std::to_string(i), "Collector",
                                                      static_cast<std::size_t>(5 + rng() % 30), 25}))
                           .group);
    }
    for (int i = 0; i < 60; ++i) {
      auto a = groups[rng() % groups.size()];
      auto b = groups[rng() % groups.size()];
      auto ha = ws.snapshot_hash(a);
      auto hb = ws.snapshot_hash(b);

      auto copy = ws.copy_group(a, UserId("alice"), "Copy");
      auto src = ws.group_resources(a);
      auto dst = ws.group_resources(copy);
      REQUIRE(src.size() == dst.size());
      for (std::size_t k = 0; k < src.size(); ++k) {
        CHECK(seed_fields_equal(src[k], dst[k]));
        CHECK(src[k].id != dst[k].id);
      }

      std::vector<GroupId> sources{a, b};
      auto merged = ws.merge_groups(sources, UserId("alice"), "Merged");
      auto ua = url_set(ws, a);
      auto ub = url_set(ws, b);
      std::set<std::string> uni = ua;
      uni.insert(ub.begin(), ub.end());
      CHECK(url_set(ws, merged.group) == uni);
      CHECK(ws.group(merged.group).resource_ids.size() == uni.size());
      CHECK(merged.duplicates_dropped == ua.size() + ub.size() - uni.size());

      CHECK(ws.snapshot_hash(a) == ha);
      CHECK(ws.snapshot_hash(b) == hb);
    }
  }
}
