#include "curator/domain.hpp"

#include <cctype>
#include <cstdio>

#include "curator/error.hpp"
#include "curator/text.hpp"

namespace curator {

std::int64_t to_millis(Instant t) { return t.time_since_epoch().count(); }
Instant from_millis(std::int64_t ms) { return Instant(std::chrono::milliseconds(ms)); }

namespace {

bool is_unreserved(unsigned char c) {
  return std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

void append_pct(std::string& out, unsigned char c) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  out.push_back('%');
  out.push_back(kHex[c >> 4]);
  out.push_back(kHex[c & 0x0F]);
}

bool needs_escape(unsigned char c) {
  if (c <= 0x20 || c >= 0x7F) return true;
  switch (c) {
    case '"': case '<': case '>': case '\\': case '^': case '`': case '{': case '|': case '}':
      return true;
    default:
      return false;
  }
}

// Uppercase escape hex, decode escaped unreserved characters, escape raw
// bytes that may not appear in a path. A '%' without two hex digits becomes %25.
std::string percent_normalize(std::string_view path) {
  std::string out;
  out.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    auto c = static_cast<unsigned char>(path[i]);
    if (c == '%') {
      bool two_follow = i + 2 < path.size();
      int hi = two_follow ? hex_value(path[i + 1]) : -1;
      int lo = two_follow ? hex_value(path[i + 2]) : -1;
      if (hi < 0 || lo < 0) {
        append_pct(out, '%');
        continue;
      }
      auto decoded = static_cast<unsigned char>(hi * 16 + lo);
      if (is_unreserved(decoded)) {
        out.push_back(static_cast<char>(decoded));
      } else {
        append_pct(out, decoded);
      }
      i += 2;
    } else if (needs_escape(c)) {
      append_pct(out, c);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

// RFC 3986 section 5.2.4.
std::string remove_dot_segments(std::string_view in) {
  std::vector<std::string_view> segments;
  std::size_t pos = 1;  // path always starts with '/'
  bool trailing_dir = false;
  while (pos <= in.size()) {
    auto next = in.find('/', pos);
    auto seg = in.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    trailing_dir = false;
    if (seg == ".") {
      trailing_dir = true;
    } else if (seg == "..") {
      if (!segments.empty()) segments.pop_back();
      trailing_dir = true;
    } else {
      segments.push_back(seg);
    }
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  std::string out;
  for (auto seg : segments) {
    out.push_back('/');
    out.append(seg);
  }
  if (trailing_dir || out.empty()) out.push_back('/');
  return out;
}

bool valid_host_char(unsigned char c) {
  return std::isalnum(c) || c == '-' || c == '.' || c == '_' || c >= 0x80;
}

[[noreturn]] void malformed(std::string_view raw, std::string_view why) {
  throw Error(ErrorCode::MalformedUrl, "malformed URL: " + std::string(why), std::string(raw));
}

}  // namespace

std::string NormalizedUrl::str() const {
  std::string out = scheme + "://" + host;
  if (port) out += ":" + std::to_string(*port);
  out += path;
  if (!query.empty()) out += "?" + query;
  return out;
}

NormalizedUrl normalize_url(std::string_view raw_in) {
  std::string raw = text::trim(raw_in);
  if (raw.empty()) malformed(raw_in, "empty");

  auto sep = raw.find("://");
  if (sep == std::string::npos || sep == 0) malformed(raw, "missing scheme");
  NormalizedUrl url;
  url.scheme = text::fold_case(std::string_view(raw).substr(0, sep));
  if (url.scheme != "http" && url.scheme != "https") malformed(raw, "unsupported scheme");

  std::string_view rest = std::string_view(raw).substr(sep + 3);
  auto auth_end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, auth_end);
  std::string_view tail = auth_end == std::string_view::npos ? std::string_view{} : rest.substr(auth_end);

  if (authority.find('@') != std::string_view::npos) malformed(raw, "credentials in URL");

  std::string_view host;
  std::string_view port;
  if (!authority.empty() && authority.front() == '[') {
    auto close = authority.find(']');
    if (close == std::string_view::npos) malformed(raw, "unterminated IPv6 literal");
    host = authority.substr(0, close + 1);
    auto after = authority.substr(close + 1);
    if (!after.empty()) {
      if (after.front() != ':') malformed(raw, "garbage after IPv6 literal");
      port = after.substr(1);
    }
  } else {
    auto colon = authority.rfind(':');
    host = authority.substr(0, colon);
    if (colon != std::string_view::npos) port = authority.substr(colon + 1);
  }

  std::string h = text::fold_case(host);
  while (!h.empty() && h.back() == '.') h.pop_back();
  if (h.empty()) malformed(raw, "empty host");
  if (h.front() != '[') {
    for (char c : h) {
      if (!valid_host_char(static_cast<unsigned char>(c))) malformed(raw, "invalid host character");
    }
    for (const auto& label : text::split(h, '.')) {
      if (label.empty()) malformed(raw, "empty host label");
      if (label.front() == '-' || label.back() == '-') malformed(raw, "host label starts or ends with '-'");
    }
  }
  url.host = std::move(h);

  if (!port.empty()) {
    if (port.size() > 5) malformed(raw, "bad port");
    unsigned value = 0;
    for (char c : port) {
      if (!std::isdigit(static_cast<unsigned char>(c))) malformed(raw, "bad port");
      value = value * 10 + static_cast<unsigned>(c - '0');
    }
    if (value == 0 || value > 65535) malformed(raw, "port out of range");
    bool is_default = (url.scheme == "http" && value == 80) || (url.scheme == "https" && value == 443);
    if (!is_default) url.port = static_cast<std::uint16_t>(value);
  }

  auto frag = tail.find('#');
  if (frag != std::string_view::npos) tail = tail.substr(0, frag);
  auto q = tail.find('?');
  std::string_view path = tail.substr(0, q);
  if (q != std::string_view::npos) url.query = std::string(tail.substr(q + 1));

  std::string p = path.empty() ? std::string("/") : percent_normalize(path);
  p = remove_dot_segments(p);
  while (p.size() > 1 && p.back() == '/') p.pop_back();
  url.path = std::move(p);
  return url;
}

// --- Timestamp14 ------------------------------------------------------------

Timestamp14 Timestamp14::parse(std::string_view s) {
  auto bad = [&](std::string_view why) -> Error {
    return Error(ErrorCode::BadTimestamp, "bad timestamp '" + std::string(s) + "': " + std::string(why),
                 std::string(s));
  };
  if (s.size() != 14) throw bad("expected 14 digits");
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw bad("non-digit character");
  }
  auto num = [&](std::size_t off, std::size_t len) {
    int v = 0;
    for (std::size_t i = off; i < off + len; ++i) v = v * 10 + (s[i] - '0');
    return v;
  };
  int y = num(0, 4);
  int mo = num(4, 2);
  int d = num(6, 2);
  int hh = num(8, 2);
  int mm = num(10, 2);
  int ss = num(12, 2);
  if (y < 1996) throw bad("year before 1996");
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw bad("invalid calendar date");
  if (hh > 23 || mm > 59 || ss > 59) throw bad("invalid time of day");
  return Timestamp14(std::string(s));
}

Timestamp14 Timestamp14::from_time(std::chrono::sys_seconds t) {
  auto day = std::chrono::floor<std::chrono::days>(t);
  std::chrono::year_month_day ymd{day};
  std::chrono::hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d%02u%02u%02d%02d%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return parse(buf);
}

int Timestamp14::year() const { return std::stoi(value_.substr(0, 4)); }
unsigned Timestamp14::month() const { return static_cast<unsigned>(std::stoi(value_.substr(4, 2))); }
unsigned Timestamp14::day() const { return static_cast<unsigned>(std::stoi(value_.substr(6, 2))); }

std::chrono::sys_seconds Timestamp14::time() const {
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{year()}, std::chrono::month{month()}, std::chrono::day{day()}};
  auto secs = hours(std::stoi(value_.substr(8, 2))) + minutes(std::stoi(value_.substr(10, 2))) +
              seconds(std::stoi(value_.substr(12, 2)));
  return sys_days{ymd} + secs;
}

// --- Tags -------------------------------------------------------------------

std::string normalize_tag(std::string_view raw) {
  std::string label = text::fold_case(text::trim(raw));
  if (label.empty()) throw Error(ErrorCode::InvalidTag, "tag must not be empty");
  if (text::length_utf8(label) > kMaxTagLength) {
    throw Error(ErrorCode::InvalidTag, "tag longer than 64 characters", label);
  }
  return label;
}

// --- Enums ------------------------------------------------------------------

std::string_view to_string(MediaType m) {
  switch (m) {
    case MediaType::webpage: return "webpage";
    case MediaType::image: return "image";
    case MediaType::video: return "video";
  }
  return "webpage";
}

std::string_view to_string(SourceKind k) {
  switch (k) {
    case SourceKind::archiveCollection: return "archiveCollection";
    case SourceKind::liveWeb: return "liveWeb";
    case SourceKind::upload: return "upload";
  }
  return "upload";
}

MediaType parse_media_type(std::string_view s) {
  if (s == "webpage") return MediaType::webpage;
  if (s == "image") return MediaType::image;
  if (s == "video") return MediaType::video;
  throw Error(ErrorCode::Validation, "unknown media type", std::string(s));
}

SourceKind parse_source_kind(std::string_view s) {
  if (s == "archiveCollection") return SourceKind::archiveCollection;
  if (s == "liveWeb") return SourceKind::liveWeb;
  if (s == "upload") return SourceKind::upload;
  throw Error(ErrorCode::Validation, "unknown source kind", std::string(s));
}

std::string_view ThumbnailState::display_text() const {
  switch (kind) {
    case Kind::deadPage: return kDeadPagePlaceholder;
    case Kind::available: return image_ref;
    case Kind::pending: return {};
  }
  return {};
}

}  // namespace curator
