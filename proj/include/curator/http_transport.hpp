#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace curator {

using HeaderList = std::vector<std::pair<std::string, std::string>>;

struct HttpResponse {
  int status = 0;
  std::string body;
  std::string location;  // Location header, if any
};

/// Outbound HTTP seam. Implementations never follow redirects and throw
/// Error{UpstreamUnavailable} when no response arrives (DNS, connect, timeout).
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;

  virtual HttpResponse get(const std::string& url, const HeaderList& headers) = 0;
  virtual HttpResponse head(const std::string& url, const HeaderList& headers) { return get(url, headers); }

  HttpResponse get(const std::string& url) { return get(url, {}); }
  HttpResponse head(const std::string& url) { return head(url, {}); }
};

/// cpp-httplib backed transport; a fresh connection per request.
class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::milliseconds timeout = std::chrono::seconds(5));

  using HttpTransport::get;
  using HttpTransport::head;
  HttpResponse get(const std::string& url, const HeaderList& headers) override;
  HttpResponse head(const std::string& url, const HeaderList& headers) override;

 private:
  HttpResponse send(bool head_only, const std::string& url, const HeaderList& headers);
  std::chrono::milliseconds timeout_;
};

/// Percent-encodes everything outside the unreserved set.
std::string url_encode_component(std::string_view s);

/// Splits an absolute http(s) URL into "scheme://host[:port]" and the
/// request target ("/path?query", never empty).
std::pair<std::string, std::string> split_origin(std::string_view url);

}  // namespace curator
