#pragma once

// Random workloads for property tests: small programs over a handful of
// fact-names and constants, with guards built from member/2 and
// charCodes/2, and interleaved insert/remove logs.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fishtank/lang.hpp"
#include "fishtank/session.hpp"
#include "oracle/oracle.hpp"

namespace testsupport {

using Rng = std::mt19937_64;

struct GenLimits {
  int max_fact_names = 8;
  int max_constants = 4;
  int max_rules = 6;
  int max_ops = 40;
  int max_ticks_between = 3;
};

struct Instance {
  std::string program;  // declarations only
  fishtank::Declarations decls;
  std::vector<std::string> fact_names;  // "name/arity"
  std::vector<std::string> constants;   // surface syntax
  std::vector<fishtank::Axiom> rules;
  oracle::OpLog ops;
  std::vector<int> ticks_after;  // ticks to run after each op

  /// Surface text of every op, for logging failures.
  std::string describe() const;
};

Instance random_instance(Rng& rng, const GenLimits& limits = {});

/// A random ground fact over the instance's names and constants.
fishtank::Axiom random_fact(Rng& rng, const Instance& inst);

/// Fresh database with the instance's declarations loaded.
std::unique_ptr<fishtank::Database> make_database(
    const Instance& inst, std::shared_ptr<fishtank::JournalSink> journal = nullptr);

/// Pushes `ops` into the tank, running the scheduled ticks between them.
void drive(fishtank::Database& db, const oracle::OpLog& ops, const std::vector<int>& ticks_after);

/// Static database with the prelude, for the oracle.
const fishtank::StaticDB& prelude_static_db();

}  // namespace testsupport
