#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "fishtank/lang.hpp"
#include "fishtank/query.hpp"
#include "fishtank/static_engine.hpp"
#include "fishtank/storage.hpp"
#include "fishtank/tank.hpp"

namespace fishtank {

struct DatabaseConfig {
  TankConfig tank;
  SolveBudget query_budget;
  std::uint64_t max_ticks = 1'000'000;  // per quiesce call
};

enum class LoadMode {
  Full,             // declarations, static clauses, and axioms
  DefinitionsOnly,  // skip axioms (they are already in a recovered journal)
};

struct LoadSummary {
  std::size_t declarations = 0;
  std::size_t static_clauses = 0;
  std::size_t axioms = 0;
};

/// A tank together with its declarations: the unit the CLI and the HTTP
/// service operate on. The prelude is loaded on construction.
class Database {
 public:
  explicit Database(DatabaseConfig config = {}, std::shared_ptr<JournalSink> journal = nullptr);

  /// Opens a file-backed database, replaying any existing journal. The
  /// returned flag is true when the journal already held records.
  static std::pair<std::unique_ptr<Database>, bool> open(const std::string& journal_path,
                                                         DatabaseConfig config = {},
                                                         bool sync_every_append = true);

  /// Parses and validates the whole program before changing anything.
  /// Static clauses replace S atomically; axioms are inserted.
  LoadSummary load_program(std::string_view text, LoadMode mode = LoadMode::Full);
  LoadSummary load_file(const std::string& path, LoadMode mode = LoadMode::Full);

  Axiom parse_axiom(std::string_view text) const;
  DGoal parse_query(std::string_view text) const;

  void insert(std::string_view axiom_text) { tank_.insert(parse_axiom(axiom_text)); }
  void remove(std::string_view axiom_text) { tank_.remove(parse_axiom(axiom_text)); }
  void insert(const Axiom& a);
  void remove(const Axiom& a);

  std::vector<QueryResult> query(std::string_view goal_text, std::size_t limit = SIZE_MAX) const;
  std::vector<QueryResult> query(const DGoal& goal, std::size_t limit = SIZE_MAX) const;

  std::uint64_t quiesce() { return tank_.quiesce(config_.max_ticks); }
  std::uint64_t quiesce(std::uint64_t max_ticks) { return tank_.quiesce(max_ticks); }

  Tank& tank() noexcept { return tank_; }
  const Tank& tank() const noexcept { return tank_; }
  Declarations declarations() const;
  const DatabaseConfig& config() const noexcept { return config_; }

 private:
  DatabaseConfig config_;
  mutable std::shared_mutex decls_mutex_;
  Declarations decls_;
  Tank tank_;
};

std::string read_text_file(const std::string& path);

}  // namespace fishtank
