#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "fishtank/session.hpp"

namespace httplib {
class Server;
}

namespace fishtank {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;               // 0 picks a free port
  std::string assets;            // static asset directory; empty serves none
  std::uint64_t tick_budget = 1'000'000;  // max ticks per /api/quiesce
  bool background_ticks = true;
};

/// JSON-over-HTTP access to a Database plus static asset serving. A
/// background worker drains the work queue while the server runs.
class Service {
 public:
  Service(Database& db, ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds and serves on a background thread. Returns the bound port.
  int start();
  /// Serves on the calling thread until stop().
  void run();
  void stop();

  int port() const noexcept { return port_; }

 private:
  void routes();
  int bind();
  void start_worker();
  void worker_loop();

  Database& db_;
  ServiceConfig config_;
  std::unique_ptr<httplib::Server> server_;
  std::thread listener_;
  std::thread worker_;
  std::atomic<bool> stopping_{false};
  std::mutex wake_mutex_;
  std::condition_variable wake_;
  int port_ = 0;
};

}  // namespace fishtank
