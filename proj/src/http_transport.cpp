#include "curator/http_transport.hpp"

#include <cctype>

#include <httplib.h>

#include "curator/error.hpp"

namespace curator {

std::string url_encode_component(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size() * 3);
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out.push_back(ch);
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0x0F]);
    }
  }
  return out;
}

std::pair<std::string, std::string> split_origin(std::string_view url) {
  auto sep = url.find("://");
  if (sep == std::string_view::npos) throw Error(ErrorCode::MalformedUrl, "not an absolute URL", std::string(url));
  auto path_start = url.find_first_of("/?#", sep + 3);
  std::string origin(url.substr(0, path_start));
  std::string target = path_start == std::string_view::npos ? "/" : std::string(url.substr(path_start));
  if (auto hash = target.find('#'); hash != std::string::npos) target.erase(hash);
  if (target.empty() || target.front() == '?') target.insert(target.begin(), '/');
  return {origin, target};
}

HttplibTransport::HttplibTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

HttpResponse HttplibTransport::get(const std::string& url, const HeaderList& headers) {
  return send(false, url, headers);
}

HttpResponse HttplibTransport::head(const std::string& url, const HeaderList& headers) {
  return send(true, url, headers);
}

HttpResponse HttplibTransport::send(bool head_only, const std::string& url, const HeaderList& headers) {
  auto [origin, target] = split_origin(url);
  httplib::Client client(origin);
  if (!client.is_valid()) throw Error(ErrorCode::UpstreamUnavailable, "unsupported endpoint", url);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  client.set_follow_location(false);

  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  auto res = head_only ? client.Head(target, h) : client.Get(target, h);
  if (!res) {
    throw Error(ErrorCode::UpstreamUnavailable, "request failed: " + httplib::to_string(res.error()), url);
  }
  HttpResponse out;
  out.status = res->status;
  out.body = std::move(res->body);
  out.location = res->get_header_value("Location");
  return out;
}

}  // namespace curator
