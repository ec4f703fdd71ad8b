#include "voxsim/service_http.hpp"

#include <thread>

#include "httplib.h"

namespace voxsim {

struct HttpService::Impl {
  httplib::Server server;
  std::thread thread;
};

HttpService::HttpService(SessionManager& sessions) : impl_(std::make_unique<Impl>()) {
  auto handler = [&sessions](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    r.body = req.body;
    const ApiResponse out = handle_request(sessions, r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  const std::string pattern = R"(/sessions(/.*)?)";
  impl_->server.Get(pattern, handler);
  impl_->server.Post(pattern, handler);
  impl_->server.Put(pattern, handler);
}

HttpService::~HttpService() { stop(); }

bool HttpService::listen(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    port_ = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) return false;
  return impl_->server.listen_after_bind();
}

int HttpService::start(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    port_ = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) return -1;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void HttpService::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace voxsim
