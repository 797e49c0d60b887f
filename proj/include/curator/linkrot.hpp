#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curator/http_transport.hpp"

namespace curator::linkrot {

enum class SeedStatus { alive, http404, otherError, redirectSquat };
std::string_view to_string(SeedStatus s);
SeedStatus parse_seed_status(std::string_view s);

struct SeedInput {
  std::string url;
  std::string category;
};

struct CategoryTally {
  std::size_t total = 0;
  std::size_t alive = 0;
  int percent_alive = 0;
  friend bool operator==(const CategoryTally&, const CategoryTally&) = default;
};

struct SeedOutcome {
  std::string url;
  std::string category;
  SeedStatus status = SeedStatus::otherError;
  friend bool operator==(const SeedOutcome&, const SeedOutcome&) = default;
};

struct LinkRotReport {
  std::map<std::string, CategoryTally> categories;
  std::vector<SeedOutcome> per_seed;  // input order
};

/// round(100 * alive / total) with halves rounded up; 0 when total is 0.
int percent_half_up(std::size_t alive, std::size_t total);

/// Rebuilds the category summary from per-seed rows.
LinkRotReport summarize(std::vector<SeedOutcome> per_seed);

class LivenessChecker {
 public:
  virtual ~LivenessChecker() = default;
  /// Must not throw; failures are reported as otherError.
  virtual SeedStatus probe(const std::string& url) = 0;
};

/// Approximates the registrable domain (eTLD+1) with a short list of common
/// two-level public suffixes.
std::string registrable_domain(std::string_view host);

/// HEAD (falling back to GET when HEAD is refused), following up to
/// max_redirects Location hops. 2xx on the original registrable domain is
/// alive; 2xx after landing on another registrable domain is redirectSquat;
/// 404 is http404; everything else is otherError.
class HttpLivenessChecker : public LivenessChecker {
 public:
  explicit HttpLivenessChecker(std::shared_ptr<HttpTransport> transport, int max_redirects = 10);
  SeedStatus probe(const std::string& url) override;

 private:
  std::shared_ptr<HttpTransport> transport_;
  int max_redirects_;
};

struct AuditOptions {
  std::size_t parallelism = 8;
};

/// Probes every seed with bounded parallelism; seeds sharing a host are
/// probed one after another. Throws Validation for an empty category label.
LinkRotReport audit_liveness(std::span<const SeedInput> seeds, LivenessChecker& checker,
                             const AuditOptions& options = {});

}  // namespace curator::linkrot
