#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "curator/capture.hpp"
#include "curator/error.hpp"
#include "curator/linkrot.hpp"
#include "curator/web_connector.hpp"
#include "curator/workspace.hpp"

namespace curator {

struct Session {
  std::string token;
  UserId user;
  std::string display_name;
};

/// token -> session
using SessionTable = std::map<std::string, Session>;

/// Reads {"tokens": [{"token", "userId", "displayName"}, ...]}.
SessionTable load_sessions(const std::filesystem::path& path);
SessionTable parse_sessions(const nlohmann::json& j);

int http_status(ErrorCode code);

struct ServiceDeps {
  std::shared_ptr<Workspace> workspace;
  SessionTable sessions;
  std::shared_ptr<capture::CaptureClient> captures;    // null when no CDX/save endpoint is configured
  std::shared_ptr<web::LiveProvider> live_provider;     // null disables live-web federation
  std::shared_ptr<linkrot::LivenessChecker> liveness;  // defaults to HTTP probing
  linkrot::AuditOptions audit_options;
};

/// The HTTP API. Error bodies are {code, message, detail}.
class ApiServer {
 public:
  explicit ApiServer(ServiceDeps deps);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds without serving; returns the bound port. Throws BindFailure.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void run();
  void stop();
  /// Blocks until the listener accepts connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::filesystem::path data_dir;
  std::optional<std::string> cdx_endpoint;
  std::optional<std::string> save_endpoint;
  std::optional<std::filesystem::path> live_provider_config;
  std::filesystem::path tokens_file;
};

/// Wires the workspace (restored from data_dir), the capture client, the live
/// provider and the sessions into a server.
ServiceDeps make_service(const ServiceConfig& config);

}  // namespace curator
