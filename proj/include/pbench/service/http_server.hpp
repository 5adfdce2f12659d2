#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "pbench/error.hpp"
#include "pbench/service/collection.hpp"

namespace httplib {
class Server;
}

namespace pbench {

/// HTTP front of a CollectionService.
///
///   GET  /healthz
///   GET  /experiments/{id}                 experiment JSON
///   POST /experiments/{id}/sessions        {"sessionId", "experimentId", "counter", "assignment"}
///   GET  /sessions/{id}                    session JSON
///   GET  /sessions/{id}/presign[?part=descriptions]   {"uploadURL": "/uploads/<token>"}
///   PUT  /uploads/{token}                  text/csv body
///   POST /sessions/{id}/results            form fields dataOutput [, descriptionsOutput]
///   GET  /stimuli/...                      static files
///
/// Every response carries permissive CORS headers and OPTIONS preflights are
/// answered for every path. Errors are {"error": message} with 400/404/409/
/// 410/413/500 status codes.
class HttpServer {
 public:
  HttpServer(CollectionService& service, std::filesystem::path stimuli_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Returns the bound port (an ephemeral one when `port` is 0). Throws Io if
  /// binding fails.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  void serve();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  CollectionService& service_;
  std::filesystem::path stimuli_dir_;
  std::unique_ptr<httplib::Server> server_;
};

/// Maps an ErrorKind onto an HTTP status code.
int http_status(ErrorKind kind) noexcept;

}  // namespace pbench
