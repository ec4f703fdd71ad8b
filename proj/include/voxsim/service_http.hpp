#pragma once

#include <memory>
#include <string>

#include "voxsim/service.hpp"

namespace voxsim {

// cpp-httplib server in front of handle_request().
class HttpService {
 public:
  explicit HttpService(SessionManager& sessions);
  ~HttpService();

  // Binds and blocks until stop(). Port 0 picks a free port (see port()).
  bool listen(const std::string& host, int port);
  // Binds without blocking the caller; returns the bound port or -1.
  int start(const std::string& host, int port);
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = -1;
};

}  // namespace voxsim
