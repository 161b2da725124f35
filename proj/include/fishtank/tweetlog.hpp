#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fishtank/session.hpp"
#include "fishtank/wire.hpp"

namespace fishtank::tweetlog {

/// Loads schema.clg, grammar.clg, and rules.clg from `asset_dir`.
LoadSummary load(Database& db, const std::string& asset_dir, LoadMode mode = LoadMode::Full);

struct Operation {
  std::string op;  // "insert" | "remove"
  std::string axiom;
};

struct Expectation {
  std::string goal;
  std::vector<QueryResult> includes;  // each must be a subset of some result
  std::optional<std::size_t> count;   // exact number of results
};

struct Fixture {
  std::string name;
  std::vector<Operation> ops;
  std::vector<Expectation> expect;
};

Fixture load_fixture(const std::string& path);

using QueryFn = std::function<std::vector<QueryResult>(const std::string& goal)>;

/// Checks every expectation through `run_query`; returns one message per
/// mismatch (empty when the fixture holds).
std::vector<std::string> check(const Fixture& f, const QueryFn& run_query);

/// Applies the fixture's operations to `db` (without quiescing).
void apply_ops(const Fixture& f, Database& db);

}  // namespace fishtank::tweetlog
