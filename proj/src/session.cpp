#include "fishtank/session.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

#include "fishtank/error.hpp"

namespace fishtank {

namespace {

std::shared_ptr<const StaticDB> prelude_db(Declarations& decls) {
  auto db = std::make_shared<StaticDB>();
  for (StaticClause& c : load_prelude(decls)) db->add(std::move(c));
  return db;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::StorageError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Database::Database(DatabaseConfig config, std::shared_ptr<JournalSink> journal)
    : config_(config), tank_(prelude_db(decls_), std::move(journal), config.tank) {}

std::pair<std::unique_ptr<Database>, bool> Database::open(const std::string& journal_path,
                                                          DatabaseConfig config,
                                                          bool sync_every_append) {
  Recovered r = replay(read_file_bytes(journal_path));
  auto sink = std::make_shared<FileJournal>(journal_path, r.valid_bytes, sync_every_append);
  auto db = std::make_unique<Database>(config, sink);
  db->tank().restore(r);
  bool had_records = r.valid_bytes > journal::kHeader.size();
  return {std::move(db), had_records};
}

LoadSummary Database::load_program(std::string_view text, LoadMode mode) {
  std::unique_lock lock(decls_mutex_);
  Declarations next = decls_;
  std::vector<ProgramItem> items = parse_program(text, next);

  LoadSummary summary;
  std::vector<Axiom> axioms;
  auto db = std::make_shared<StaticDB>(*tank_.static_db());
  for (ProgramItem& item : items) {
    if (std::holds_alternative<Declaration>(item)) {
      ++summary.declarations;
    } else if (auto* c = std::get_if<StaticClause>(&item)) {
      db->add(std::move(*c));
      ++summary.static_clauses;
    } else {
      axioms.push_back(std::get<Axiom>(item));
    }
  }
  decls_ = std::move(next);
  if (summary.static_clauses > 0) tank_.set_static_db(std::move(db));
  if (mode == LoadMode::Full) {
    for (const Axiom& a : axioms) tank_.insert(a);
    summary.axioms = axioms.size();
  }
  return summary;
}

LoadSummary Database::load_file(const std::string& path, LoadMode mode) {
  return load_program(read_text_file(path), mode);
}

Axiom Database::parse_axiom(std::string_view text) const {
  std::shared_lock lock(decls_mutex_);
  return fishtank::parse_axiom(text, decls_);
}

DGoal Database::parse_query(std::string_view text) const {
  std::shared_lock lock(decls_mutex_);
  return parse_dgoal(text, decls_);
}

void Database::insert(const Axiom& a) {
  {
    std::shared_lock lock(decls_mutex_);
    validate(a, decls_);
  }
  tank_.insert(a);
}

void Database::remove(const Axiom& a) {
  {
    std::shared_lock lock(decls_mutex_);
    validate(a, decls_);
  }
  tank_.remove(a);
}

std::vector<QueryResult> Database::query(std::string_view goal_text, std::size_t limit) const {
  return query(parse_query(goal_text), limit);
}

std::vector<QueryResult> Database::query(const DGoal& goal, std::size_t limit) const {
  return fishtank::query(goal, tank_, limit, config_.query_budget);
}

Declarations Database::declarations() const {
  std::shared_lock lock(decls_mutex_);
  return decls_;
}

}  // namespace fishtank
