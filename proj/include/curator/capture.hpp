#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curator/clock.hpp"
#include "curator/domain.hpp"
#include "curator/http_transport.hpp"

namespace curator::capture {

/// One line of the default 7-field CDX response:
///   urlkey timestamp original mimetype statuscode digest length
struct Capture {
  std::string urlkey;
  Timestamp14 timestamp;
  std::string original;
  std::string mime_type;
  std::optional<int> status_code;  // "-" on the wire when absent
  std::string digest;
  std::uint64_t length = 0;

  friend bool operator==(const Capture&, const Capture&) = default;
};

/// One Capture per non-empty line. Throws LineError{CdxSyntax} naming the
/// 1-based line for a wrong field count, bad timestamp or bad number.
std::vector<Capture> parse_cdx_response(std::string_view body);

std::string format_cdx_line(const Capture& c);
/// Canonical body: one line per capture, each terminated by '\n'.
std::string format_cdx(std::span<const Capture> captures);

/// Sorts by (timestamp, digest) and drops repeats of that pair.
std::vector<Capture> sort_and_dedup(std::vector<Capture> captures);

enum class Granularity { year, month };
std::string_view to_string(Granularity g);
Granularity parse_granularity(std::string_view s);

struct TimelineBin {
  std::string period;  // "2008" or "2008-05"
  std::size_t count = 0;
  friend bool operator==(const TimelineBin&, const TimelineBin&) = default;
};

struct TimelineBins {
  Granularity granularity = Granularity::year;
  std::vector<TimelineBin> bins;  // contiguous, zero-filled, first..last period
};

TimelineBins build_timeline(std::span<const Capture> captures, Granularity granularity);

struct ArchiveRequestReceipt {
  Instant requested_at;
  std::string target_url;
  bool accepted = false;
  friend bool operator==(const ArchiveRequestReceipt&, const ArchiveRequestReceipt&) = default;
};

struct CaptureClientConfig {
  std::string cdx_endpoint;   // e.g. https://web.archive.org/cdx/search/cdx
  std::string save_endpoint;  // e.g. https://web.archive.org/save
  std::chrono::milliseconds idempotency_window = std::chrono::seconds(60);
};

/// Talks to a CDX server and a save-page endpoint.
class CaptureClient {
 public:
  CaptureClient(CaptureClientConfig config, std::shared_ptr<HttpTransport> transport, Clock clock);

  /// GET <cdx>?url=<url>; ascending and duplicate-free on (timestamp, digest).
  /// Throws UpstreamUnavailable for non-200 answers or transport failure.
  std::vector<Capture> fetch_captures(std::string_view url) const;

  struct ArchiveOutcome {
    ArchiveRequestReceipt receipt;
    bool fresh = true;  // false when served from the idempotency window
  };

  /// GET <save>/<url>. An accepted receipt is reused for the same normalized
  /// URL within the idempotency window without another outbound request.
  /// Transport failures yield accepted=false rather than an exception.
  ArchiveOutcome archive_now(std::string_view url);

  const CaptureClientConfig& config() const { return config_; }

 private:
  CaptureClientConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  Clock clock_;
  std::mutex archive_mutex_;
  std::map<std::string, ArchiveRequestReceipt> recent_;
};

}  // namespace curator::capture
