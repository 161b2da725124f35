#include <pthread.h>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fishtank/error.hpp"
#include "fishtank/service.hpp"
#include "fishtank/session.hpp"
#include "fishtank/shell.hpp"

using namespace fishtank;

namespace {

DatabaseConfig make_config(std::uint64_t solve_budget, std::uint64_t tick_budget) {
  DatabaseConfig c;
  c.tank.guard_budget.max_steps = solve_budget;
  c.query_budget.max_steps = solve_budget;
  c.max_ticks = tick_budget;
  return c;
}

int serve(int port, const std::string& assets, const std::string& journal,
          const std::vector<std::string>& loads, DatabaseConfig config) {
  if (const char* env = std::getenv("FISHTANK_PORT")) port = std::stoi(env);

  std::unique_ptr<Database> db;
  LoadMode mode = LoadMode::Full;
  if (journal.empty()) {
    db = std::make_unique<Database>(config);
  } else {
    auto [opened, had_records] = Database::open(journal, config);
    db = std::move(opened);
    // Axioms from the load files are already in a non-empty journal.
    if (had_records) mode = LoadMode::DefinitionsOnly;
  }
  for (const std::string& path : loads) db->load_file(path, mode);

  ServiceConfig sc;
  sc.port = port;
  sc.assets = assets;
  sc.tick_budget = config.max_ticks;
  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  Service service(*db, sc);
  service.start();
  std::cout << "listening on http://" << sc.host << ':' << service.port() << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  service.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FishTank deductive database"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::uint64_t solve_budget = SolveBudget{}.max_steps;
  std::uint64_t tick_budget = DatabaseConfig{}.max_ticks;
  app.add_option("--solve-budget", solve_budget, "Resolution steps per guard or query");
  app.add_option("--tick-budget", tick_budget, "Maximum ticks per quiesce");

  std::string script;
  CLI::App* run = app.add_subcommand("run", "Execute a command script");
  run->add_option("script", script, "Script file")->required()->check(CLI::ExistingFile);

  app.add_subcommand("repl", "Interactive session (default)");

  int port = 8080;
  std::string assets, journal;
  std::vector<std::string> loads;
  CLI::App* srv = app.add_subcommand("serve", "Serve the HTTP API and static assets");
  srv->add_option("--port", port, "TCP port (FISHTANK_PORT overrides)");
  srv->add_option("--assets", assets, "Static asset directory");
  srv->add_option("--journal", journal, "Journal file for durability");
  srv->add_option("--load", loads, "Program file to load (repeatable)");

  CLI11_PARSE(app, argc, argv);
  DatabaseConfig config = make_config(solve_budget, tick_budget);

  try {
    if (*srv) return serve(port, assets, journal, loads, config);
    Database db(config);
    if (*run) {
      std::ifstream in(script);
      std::filesystem::path base = std::filesystem::absolute(script).parent_path();
      return Shell(db, std::cout, std::cerr, base).run(in);
    }
    Shell shell(db, std::cout, std::cerr);
    std::string line;
    while (std::cout << "fishtank> " << std::flush, std::getline(std::cin, line)) {
      shell.eval(line);
    }
    std::cout << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::NotQuiescent ? kShellNotQuiescent : kShellError;
  }
}
