#include "fishtank/service.hpp"

#include <filesystem>

#include "httplib.h"

#include "fishtank/error.hpp"
#include "fishtank/wire.hpp"

namespace fishtank {

namespace {

namespace fs = std::filesystem;

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

Json error_body(const Error& e) {
  Json j = {{"error", std::string(errc_name(e.code()))}, {"message", e.what()}};
  if (e.line() > 0) {
    j["line"] = e.line();
    j["column"] = e.column();
  }
  return j;
}

int status_for(const Error& e) {
  switch (e.code()) {
    case Errc::QueueFull: return 503;
    case Errc::BudgetExhausted:
    case Errc::BuiltinTypeError: return 422;
    case Errc::NotQuiescent: return 409;
    case Errc::StorageError:
    case Errc::CorruptJournal: return 500;
    default: return 400;
  }
}

// Runs `body` and maps failures onto JSON error responses.
template <typename F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    send_json(res, status_for(e), error_body(e));
  } catch (const Json::exception& e) {
    send_json(res, 400, {{"error", "SyntaxError"}, {"message", e.what()}});
  }
}

Json parse_body(const httplib::Request& req) {
  Json j = Json::parse(req.body);
  if (!j.is_object()) throw Error(Errc::SyntaxError, "request body must be a JSON object");
  return j;
}

std::string content_type(const fs::path& p) {
  static const std::map<std::string, std::string> types = {
      {".html", "text/html; charset=utf-8"}, {".htm", "text/html; charset=utf-8"},
      {".js", "text/javascript"},            {".mjs", "text/javascript"},
      {".css", "text/css"},                  {".json", "application/json"},
      {".png", "image/png"},                 {".jpg", "image/jpeg"},
      {".jpeg", "image/jpeg"},               {".gif", "image/gif"},
      {".svg", "image/svg+xml"},             {".ico", "image/x-icon"},
      {".txt", "text/plain; charset=utf-8"}, {".map", "application/json"},
  };
  auto it = types.find(p.extension().string());
  return it == types.end() ? "application/octet-stream" : it->second;
}

bool has_dotdot(std::string_view path) {
  std::size_t start = 0;
  while (start <= path.size()) {
    std::size_t end = path.find_first_of("/\\", start);
    if (end == std::string_view::npos) end = path.size();
    if (path.substr(start, end - start) == "..") return true;
    start = end + 1;
  }
  return false;
}

}  // namespace

Service::Service(Database& db, ServiceConfig config)
    : db_(db), config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
  routes();
}

Service::~Service() { stop(); }

void Service::routes() {
  httplib::Server& srv = *server_;

  srv.Post("/api/axioms", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      Json body = parse_body(req);
      std::string op = body.at("op").get<std::string>();
      Axiom a = db_.parse_axiom(body.at("axiom").get<std::string>());
      if (op == "insert") {
        db_.tank().insert(a);
      } else if (op == "remove") {
        db_.tank().remove(a);
      } else {
        throw Error(Errc::SyntaxError, "op must be \"insert\" or \"remove\"");
      }
      wake_.notify_one();
      send_json(res, 200, {{"queued", true}});
    });
  });

  srv.Post("/api/query", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      Json body = parse_body(req);
      std::int64_t limit = body.value("limit", std::int64_t{100});
      if (limit < 1) throw Error(Errc::SyntaxError, "limit must be at least 1");
      DGoal goal = db_.parse_query(body.at("goal").get<std::string>());
      Json results = Json::array();
      for (const QueryResult& r : db_.query(goal, static_cast<std::size_t>(limit))) {
        results.push_back(result_to_json(r));
      }
      send_json(res, 200, {{"results", std::move(results)}});
    });
  });

  srv.Post("/api/quiesce", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      std::uint64_t ticks = db_.quiesce(config_.tick_budget);
      send_json(res, 200, {{"ticks", ticks}});
    });
  });

  srv.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
    TankStats st = db_.tank().stats();
    Json dead = Json::array();
    for (const DeadLetter& d : st.dead_letters) {
      dead.push_back({{"axiom", print(d.axiom)}, {"delta", d.delta}, {"error", d.error}});
    }
    send_json(res, 200,
              {{"queue_length", st.queue_length},
               {"ticks", st.ticks},
               {"partition_accesses", st.io.partition_accesses},
               {"generic_accesses", st.io.generic_accesses},
               {"partitions", st.partitions},
               {"dead_letters", std::move(dead)}});
  });

  srv.Get(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string& path = req.path;
    if (has_dotdot(path)) {
      send_json(res, 403, {{"error", "Forbidden"}});
      return;
    }
    if (path.starts_with("/api/") || config_.assets.empty()) {
      send_json(res, 404, {{"error", "NotFound"}});
      return;
    }
    fs::path file = fs::path(config_.assets) / fs::path(path).relative_path();
    if (path == "/" || fs::is_directory(file)) file /= "index.html";
    std::error_code ec;
    if (!fs::is_regular_file(file, ec)) {
      send_json(res, 404, {{"error", "NotFound"}});
      return;
    }
    res.set_content(read_file_bytes(file.string()), content_type(file));
  });
}

int Service::bind() {
  if (config_.port == 0) {
    port_ = server_->bind_to_any_port(config_.host);
  } else {
    port_ = server_->bind_to_port(config_.host, config_.port) ? config_.port : -1;
  }
  if (port_ < 0) {
    throw Error(Errc::StorageError, "cannot bind " + config_.host + ":" +
                                        std::to_string(config_.port));
  }
  return port_;
}

void Service::start_worker() {
  if (!config_.background_ticks) return;
  worker_ = std::thread([this] { worker_loop(); });
}

void Service::worker_loop() {
  while (!stopping_) {
    bool worked = false;
    try {
      worked = db_.tank().tick().has_value();
    } catch (const Error&) {
      // Storage failures are reported through the next quiesce call.
    }
    if (!worked) {
      std::unique_lock lock(wake_mutex_);
      wake_.wait_for(lock, std::chrono::milliseconds(20));
    }
  }
}

int Service::start() {
  int port = bind();
  start_worker();
  listener_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port;
}

void Service::run() {
  bind();
  start_worker();
  server_->listen_after_bind();
}

void Service::stop() {
  stopping_ = true;
  wake_.notify_all();
  if (server_) server_->stop();
  if (listener_.joinable()) listener_.join();
  if (worker_.joinable()) worker_.join();
}

}  // namespace fishtank
