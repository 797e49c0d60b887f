#include "curator/capture.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "curator/error.hpp"

namespace curator::capture {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::vector<Capture> parse_cdx_response(std::string_view body) {
  std::vector<Capture> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < body.size()) {
    auto nl = body.find('\n', pos);
    auto line = body.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? body.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 7) {
      throw LineError(ErrorCode::CdxSyntax, line_no,
                      "expected 7 fields, found " + std::to_string(fields.size()));
    }
    Capture c;
    c.urlkey = fields[0];
    try {
      c.timestamp = Timestamp14::parse(fields[1]);
    } catch (const Error& e) {
      throw LineError(ErrorCode::CdxSyntax, line_no, e.what());
    }
    c.original = fields[2];
    c.mime_type = fields[3];
    if (fields[4] != "-") {
      int status = 0;
      if (!parse_number(fields[4], status) || status < 0) {
        throw LineError(ErrorCode::CdxSyntax, line_no, "bad status code '" + std::string(fields[4]) + "'");
      }
      c.status_code = status;
    }
    c.digest = fields[5];
    if (!parse_number(fields[6], c.length)) {
      throw LineError(ErrorCode::CdxSyntax, line_no, "bad length '" + std::string(fields[6]) + "'");
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string format_cdx_line(const Capture& c) {
  std::string line;
  line.reserve(c.urlkey.size() + c.original.size() + c.digest.size() + 64);
  line += c.urlkey;
  line += ' ';
  line += c.timestamp.str();
  line += ' ';
  line += c.original;
  line += ' ';
  line += c.mime_type;
  line += ' ';
  line += c.status_code ? std::to_string(*c.status_code) : std::string("-");
  line += ' ';
  line += c.digest;
  line += ' ';
  line += std::to_string(c.length);
  return line;
}

std::string format_cdx(std::span<const Capture> captures) {
  std::string out;
  for (const auto& c : captures) {
    out += format_cdx_line(c);
    out += '\n';
  }
  return out;
}

std::vector<Capture> sort_and_dedup(std::vector<Capture> captures) {
  std::stable_sort(captures.begin(), captures.end(), [](const Capture& a, const Capture& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.digest < b.digest;
  });
  captures.erase(std::unique(captures.begin(), captures.end(),
                             [](const Capture& a, const Capture& b) {
                               return a.timestamp == b.timestamp && a.digest == b.digest;
                             }),
                 captures.end());
  return captures;
}

std::string_view to_string(Granularity g) { return g == Granularity::year ? "year" : "month"; }

Granularity parse_granularity(std::string_view s) {
  if (s == "year") return Granularity::year;
  if (s == "month") return Granularity::month;
  throw Error(ErrorCode::Validation, "granularity must be 'year' or 'month'", std::string(s));
}

TimelineBins build_timeline(std::span<const Capture> captures, Granularity granularity) {
  TimelineBins out;
  out.granularity = granularity;
  if (captures.empty()) return out;

  // Periods are indexed as months since year 0 (or plain years).
  auto period_of = [&](const Capture& c) -> long {
    long y = c.timestamp.year();
    return granularity == Granularity::year ? y : y * 12 + static_cast<long>(c.timestamp.month()) - 1;
  };
  auto [lo_it, hi_it] = std::minmax_element(captures.begin(), captures.end(), [&](const auto& a, const auto& b) {
    return period_of(a) < period_of(b);
  });
  long lo = period_of(*lo_it);
  long hi = period_of(*hi_it);

  out.bins.resize(static_cast<std::size_t>(hi - lo + 1));
  for (long p = lo; p <= hi; ++p) {
    char label[16];
    if (granularity == Granularity::year) {
      std::snprintf(label, sizeof label, "%04ld", p);
    } else {
      std::snprintf(label, sizeof label, "%04ld-%02ld", p / 12, p % 12 + 1);
    }
    out.bins[static_cast<std::size_t>(p - lo)].period = label;
  }
  for (const auto& c : captures) ++out.bins[static_cast<std::size_t>(period_of(c) - lo)].count;
  return out;
}

// --- CaptureClient -----------------------------------------------------------

CaptureClient::CaptureClient(CaptureClientConfig config, std::shared_ptr<HttpTransport> transport, Clock clock)
    : config_(std::move(config)), transport_(std::move(transport)), clock_(std::move(clock)) {}

std::vector<Capture> CaptureClient::fetch_captures(std::string_view url) const {
  if (config_.cdx_endpoint.empty() || !transport_) {
    throw Error(ErrorCode::UpstreamUnavailable, "no CDX endpoint configured");
  }
  std::string request = config_.cdx_endpoint;
  request += request.find('?') == std::string::npos ? '?' : '&';
  request += "url=" + url_encode_component(url);

  auto res = transport_->get(request);
  if (res.status != 200) {
    throw Error(ErrorCode::UpstreamUnavailable, "CDX endpoint answered HTTP " + std::to_string(res.status),
                request);
  }
  return sort_and_dedup(parse_cdx_response(res.body));
}

CaptureClient::ArchiveOutcome CaptureClient::archive_now(std::string_view url) {
  auto key = normalize_url(url).str();
  std::lock_guard lock(archive_mutex_);
  auto now = clock_();
  if (auto it = recent_.find(key); it != recent_.end()) {
    if (now - it->second.requested_at < config_.idempotency_window) return {it->second, false};
    recent_.erase(it);
  }

  ArchiveRequestReceipt receipt{now, std::string(url), false};
  if (!config_.save_endpoint.empty() && transport_) {
    std::string request = config_.save_endpoint;
    if (!request.empty() && request.back() == '/') request.pop_back();
    request += '/';
    request += url;
    try {
      auto res = transport_->get(request);
      receipt.accepted = res.status >= 200 && res.status < 400;
    } catch (const Error&) {
      receipt.accepted = false;
    }
  }
  if (receipt.accepted) recent_[key] = receipt;
  return {receipt, true};
}

}  // namespace curator::capture
