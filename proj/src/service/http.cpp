#include <httplib.h>

#include <cctype>

#include "nass/service/service.hpp"

namespace nass::service {

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  std::string host;
  int port = 0;

  explicit Impl(Service& s) : service(s) {
    auto dispatch = [this](const httplib::Request& in, httplib::Response& out) {
      Request req;
      req.method = in.method;
      req.path = in.path;
      req.body = in.body;
      for (const auto& [k, v] : in.headers) {
        std::string name = k;
        for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        req.headers[name] = v;
      }
      Response res = service.handle(req);
      out.status = res.status;
      out.set_content(res.body.dump(), "application/json; charset=utf-8");
    };
    server.Get(R"(/.*)", dispatch);
    server.Post(R"(/.*)", dispatch);
    server.Put(R"(/.*)", dispatch);
    server.Delete(R"(/.*)", dispatch);
    server.Patch(R"(/.*)", dispatch);
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw Error(ErrorCode::InvalidConfig, "cannot bind " + host + ":" + std::to_string(port));
  impl_->host = host;
  impl_->port = bound;
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace nass::service
