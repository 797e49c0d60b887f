#include "curator/linkrot.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <thread>
#include <unordered_map>

#include "curator/domain.hpp"
#include "curator/error.hpp"

namespace curator::linkrot {

std::string_view to_string(SeedStatus s) {
  switch (s) {
    case SeedStatus::alive: return "alive";
    case SeedStatus::http404: return "http404";
    case SeedStatus::otherError: return "otherError";
    case SeedStatus::redirectSquat: return "redirectSquat";
  }
  return "otherError";
}

SeedStatus parse_seed_status(std::string_view s) {
  if (s == "alive") return SeedStatus::alive;
  if (s == "http404") return SeedStatus::http404;
  if (s == "otherError") return SeedStatus::otherError;
  if (s == "redirectSquat") return SeedStatus::redirectSquat;
  throw Error(ErrorCode::Validation, "unknown seed status", std::string(s));
}

int percent_half_up(std::size_t alive, std::size_t total) {
  if (total == 0) return 0;
  return static_cast<int>((200 * alive + total) / (2 * total));
}

LinkRotReport summarize(std::vector<SeedOutcome> per_seed) {
  LinkRotReport report;
  for (const auto& row : per_seed) {
    auto& tally = report.categories[row.category];
    ++tally.total;
    if (row.status == SeedStatus::alive) ++tally.alive;
  }
  for (auto& [_, tally] : report.categories) tally.percent_alive = percent_half_up(tally.alive, tally.total);
  report.per_seed = std::move(per_seed);
  return report;
}

std::string registrable_domain(std::string_view host_in) {
  std::string host(host_in);
  std::transform(host.begin(), host.end(), host.begin(), [](unsigned char c) { return std::tolower(c); });
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (host.empty() || host.front() == '[') return host;
  if (std::all_of(host.begin(), host.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; })) {
    return host;
  }

  static constexpr std::array<std::string_view, 30> kTwoLevelSuffixes{
      "co.uk", "org.uk", "ac.uk",  "gov.uk", "me.uk",  "com.au", "net.au", "org.au", "edu.au", "gov.au",
      "co.jp", "ne.jp",  "or.jp",  "ac.jp",  "co.nz",  "org.nz", "com.br", "org.br", "com.cn", "org.cn",
      "co.in", "org.in", "co.za",  "org.za", "com.mx", "com.tr", "com.ar", "co.kr",  "com.sg", "com.hk"};

  std::vector<std::string_view> labels;
  std::string_view rest(host);
  while (true) {
    auto dot = rest.find('.');
    labels.push_back(rest.substr(0, dot));
    if (dot == std::string_view::npos) break;
    rest.remove_prefix(dot + 1);
  }
  if (labels.size() <= 2) return host;
  std::string last_two = std::string(labels[labels.size() - 2]) + "." + std::string(labels.back());
  bool two_level = std::find(kTwoLevelSuffixes.begin(), kTwoLevelSuffixes.end(), last_two) != kTwoLevelSuffixes.end();
  if (two_level) return std::string(labels[labels.size() - 3]) + "." + last_two;
  return last_two;
}

namespace {

std::string host_of(std::string_view url) {
  try {
    return normalize_url(url).host;
  } catch (const Error&) {
    return {};
  }
}

std::string resolve_location(const std::string& base, const std::string& location) {
  if (location.find("://") != std::string::npos) return location;
  auto [origin, target] = split_origin(base);
  if (location.starts_with("//")) return base.substr(0, base.find("://") + 1) + location;
  if (location.starts_with("/")) return origin + location;
  auto slash = target.rfind('/', target.find('?'));
  return origin + target.substr(0, slash + 1) + location;
}

}  // namespace

HttpLivenessChecker::HttpLivenessChecker(std::shared_ptr<HttpTransport> transport, int max_redirects)
    : transport_(std::move(transport)), max_redirects_(max_redirects) {}

SeedStatus HttpLivenessChecker::probe(const std::string& url) {
  auto origin_domain = registrable_domain(host_of(url));
  if (origin_domain.empty()) return SeedStatus::otherError;
  std::string current = url;
  try {
    for (int hop = 0; hop <= max_redirects_; ++hop) {
      auto res = transport_->head(current);
      if (res.status == 405 || res.status == 501) res = transport_->get(current);
      if (res.status >= 300 && res.status < 400 && !res.location.empty()) {
        current = resolve_location(current, res.location);
        continue;
      }
      if (res.status >= 200 && res.status < 300) {
        return registrable_domain(host_of(current)) == origin_domain ? SeedStatus::alive
                                                                     : SeedStatus::redirectSquat;
      }
      if (res.status == 404) return SeedStatus::http404;
      return SeedStatus::otherError;
    }
  } catch (const std::exception&) {
    return SeedStatus::otherError;
  }
  return SeedStatus::otherError;  // redirect loop
}

LinkRotReport audit_liveness(std::span<const SeedInput> seeds, LivenessChecker& checker,
                             const AuditOptions& options) {
  for (const auto& s : seeds) {
    if (s.category.empty()) throw Error(ErrorCode::Validation, "seed category must not be empty", s.url);
  }

  // Seeds of one host form a queue that a single worker drains in order.
  std::vector<std::vector<std::size_t>> host_queues;
  std::unordered_map<std::string, std::size_t> queue_of;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    auto host = host_of(seeds[i].url);
    if (host.empty()) host = "\x01" + std::to_string(i);  // unparseable: own queue
    auto [it, inserted] = queue_of.try_emplace(host, host_queues.size());
    if (inserted) host_queues.emplace_back();
    host_queues[it->second].push_back(i);
  }

  std::vector<SeedStatus> statuses(seeds.size(), SeedStatus::otherError);
  std::atomic<std::size_t> next_queue{0};
  auto worker = [&] {
    for (auto q = next_queue.fetch_add(1); q < host_queues.size(); q = next_queue.fetch_add(1)) {
      for (auto idx : host_queues[q]) {
        try {
          statuses[idx] = checker.probe(seeds[idx].url);
        } catch (...) {
          statuses[idx] = SeedStatus::otherError;
        }
      }
    }
  };

  std::size_t n_workers = std::min(std::max<std::size_t>(options.parallelism, 1), host_queues.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  }

  std::vector<SeedOutcome> rows;
  rows.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) rows.push_back({seeds[i].url, seeds[i].category, statuses[i]});
  return summarize(std::move(rows));
}

}  // namespace curator::linkrot
