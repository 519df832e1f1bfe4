#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "bezknot/session.hpp"

namespace httplib {
class Server;
}

namespace bezknot::workbench {

inline constexpr int kApiVersion = 1;

struct ServerOptions {
  std::string host = "127.0.0.1";
  std::size_t default_samples = 512;
  std::size_t max_samples = 100'000;
  std::size_t max_subdivision_depth = 12;
  // An event stream ends after this long without new events.
  std::chrono::milliseconds stream_idle_timeout{30'000};
};

// HTTP front end for a SessionStore. JSON bodies carry "api": 1; errors are
// {"api": 1, "error": {"code": ..., "message": ...}} with a 4xx status.
class Server {
 public:
  explicit Server(ServerOptions options = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(int port);
  // Blocks serving requests until stop().
  bool listen();
  void stop();

  SessionStore& store() { return store_; }

 private:
  void install_routes();

  ServerOptions options_;
  SessionStore store_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace bezknot::workbench
