#include "pbench/service/http_server.hpp"

#include "httplib.h"
#include "json.hpp"
#include "pbench/error.hpp"

namespace pbench {

using nlohmann::json;

int http_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return 400;
    case ErrorKind::NotFound: return 404;
    case ErrorKind::Conflict: return 409;
    case ErrorKind::Expired: return 410;
    case ErrorKind::TooLarge: return 413;
    case ErrorKind::Analysis:
    case ErrorKind::Io: return 500;
  }
  return 500;
}

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Runs a handler, translating library errors into JSON error responses.
template <class F>
httplib::Server::Handler guarded(F&& f) {
  return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_json(res, {{"error", e.what()}}, http_status(e.kind()));
    } catch (const std::exception& e) {
      send_json(res, {{"error", e.what()}}, 500);
    }
  };
}

json ack_json(const StoreAck& ack) {
  return {{"status", "stored"}, {"experimentId", ack.experiment_id}, {"sessionId", ack.session_id}, {"bytes", ack.bytes}};
}

std::optional<std::string> form_field(const httplib::Request& req, const std::string& key) {
  if (req.has_param(key)) return req.get_param_value(key);
  if (req.has_file(key)) return req.get_file_value(key).content;
  return std::nullopt;
}

}  // namespace

HttpServer::HttpServer(CollectionService& service, std::filesystem::path stimuli_dir)
    : service_(service), stimuli_dir_(std::move(stimuli_dir)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
  auto& s = *server_;
  // Slack over the cap so the service, not the transport, reports the limit.
  s.set_payload_max_length(service_.config().max_upload_bytes + 64 * 1024);

  s.set_post_routing_handler([](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Max-Age", "600");
  });
  s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok\n", "text/plain"); });

  s.Get(R"(/experiments/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          res.set_content(experiment_to_json(service_.experiment(req.matches[1].str())), "application/json");
        }));

  s.Post(R"(/experiments/([^/]+)/sessions)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const auto session = service_.create_session(req.matches[1].str());
           send_json(res,
                     {{"sessionId", session.id},
                      {"experimentId", session.experiment_id},
                      {"counter", session.counter},
                      {"assignment", session.assignment}},
                     201);
         }));

  s.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto session = service_.session(req.matches[1].str());
          send_json(res, {{"sessionId", session.id},
                          {"experimentId", session.experiment_id},
                          {"counter", session.counter},
                          {"assignment", session.assignment},
                          {"state", std::string(to_string(session.state))}});
        }));

  s.Get(R"(/sessions/([^/]+)/presign)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          UploadPart part = UploadPart::Results;
          if (req.has_param("part")) {
            const auto p = req.get_param_value("part");
            if (p == "descriptions") {
              part = UploadPart::Descriptions;
            } else if (p != "results") {
              fail(ErrorKind::InvalidInput, "unknown upload part '" + p + "'");
            }
          }
          const auto ticket = service_.presign_upload(req.matches[1].str(), part);
          const auto expires = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   ticket.expires_at.time_since_epoch())
                                   .count();
          res.set_header("X-Upload-Expires-Ms", std::to_string(expires));
          send_json(res, {{"uploadURL", ticket.upload_path}});
        }));

  s.Put(R"(/uploads/([0-9a-f]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          send_json(res, ack_json(service_.store_result(req.matches[1].str(), req.body)));
        }));

  s.Post(R"(/sessions/([^/]+)/results)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const auto id = req.matches[1].str();
           const auto data = form_field(req, "dataOutput");
           const auto descriptions = form_field(req, "descriptionsOutput");
           if (!data && !descriptions) fail(ErrorKind::InvalidInput, "missing form field 'dataOutput'");
           json body = json::object();
           if (descriptions) body["descriptions"] = ack_json(service_.accept_form_descriptions(id, *descriptions));
           if (data) body["results"] = ack_json(service_.accept_form_result(id, *data));
           send_json(res, body);
         }));

  if (!stimuli_dir_.empty() && std::filesystem::is_directory(stimuli_dir_)) {
    s.set_mount_point("/stimuli", stimuli_dir_.string());
  }
}

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound <= 0) fail(ErrorKind::Io, "cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) fail(ErrorKind::Io, "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::serve() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace pbench
