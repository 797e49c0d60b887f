#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "curator/error.hpp"
#include "curator/server.hpp"

namespace {
curator::ApiServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curatord: web archive collection service"};
  curator::ServiceConfig config;
  std::string cdx, save, provider;
  app.add_option("--port", config.port, "listen port (0 picks a free one)")->check(CLI::Range(0, 65535));
  app.add_option("--host", config.host, "listen address");
  app.add_option("--data-dir", config.data_dir, "directory holding the event log and snapshot")->required();
  app.add_option("--cdx-endpoint", cdx, "CDX query endpoint");
  app.add_option("--save-endpoint", save, "save-page endpoint");
  app.add_option("--live-provider-config", provider, "live web provider config (JSON)");
  app.add_option("--tokens-file", config.tokens_file, "bearer tokens (JSON)")->required()->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  if (!cdx.empty()) config.cdx_endpoint = cdx;
  if (!save.empty()) config.save_endpoint = save;
  if (!provider.empty()) config.live_provider_config = provider;

  try {
    curator::ApiServer server(curator::make_service(config));
    int port = server.bind(config.host, config.port);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on " << config.host << ':' << port << std::endl;
    server.run();
    g_server = nullptr;
  } catch (const curator::Error& e) {
    std::cerr << "curatord: " << curator::to_string(e.code()) << ": " << e.what();
    if (!e.detail().empty()) std::cerr << " (" << e.detail() << ')';
    std::cerr << '\n';
    return 1;
  }
  return 0;
}
