#include "fishtank/tweetlog.hpp"

#include "fishtank/error.hpp"
#include "fishtank/lang.hpp"

namespace fishtank::tweetlog {

LoadSummary load(Database& db, const std::string& asset_dir, LoadMode mode) {
  LoadSummary total;
  for (const char* file : {"schema.clg", "grammar.clg", "rules.clg"}) {
    LoadSummary s = db.load_file(asset_dir + "/" + file, mode);
    total.declarations += s.declarations;
    total.static_clauses += s.static_clauses;
    total.axioms += s.axioms;
  }
  return total;
}

Fixture load_fixture(const std::string& path) {
  Json j = Json::parse(read_text_file(path));
  Fixture f;
  f.name = j.value("name", path);
  for (const Json& op : j.at("ops")) {
    f.ops.push_back({op.at("op").get<std::string>(), op.at("axiom").get<std::string>()});
  }
  for (const Json& e : j.at("expect")) {
    Expectation x;
    x.goal = e.at("goal").get<std::string>();
    if (e.contains("includes")) {
      for (const Json& r : e.at("includes")) x.includes.push_back(result_from_json(r));
    }
    if (e.contains("count")) x.count = e.at("count").get<std::size_t>();
    f.expect.push_back(std::move(x));
  }
  return f;
}

namespace {

bool subset_of(const QueryResult& want, const QueryResult& got) {
  for (const auto& [name, value] : want.bindings) {
    const Term* v = got.get(name);
    if (!v || *v != value) return false;
  }
  return true;
}

std::string show(const QueryResult& r) {
  std::string out = "{";
  for (const auto& [name, value] : r.bindings) {
    if (out.size() > 1) out += ", ";
    out += name + " = " + print(value);
  }
  return out + "}";
}

}  // namespace

std::vector<std::string> check(const Fixture& f, const QueryFn& run_query) {
  std::vector<std::string> problems;
  for (const Expectation& x : f.expect) {
    std::vector<QueryResult> got = run_query(x.goal);
    if (x.count && got.size() != *x.count) {
      problems.push_back(f.name + ": " + x.goal + " returned " + std::to_string(got.size()) +
                         " results, expected " + std::to_string(*x.count));
    }
    for (const QueryResult& want : x.includes) {
      bool found = false;
      for (const QueryResult& r : got) found = found || subset_of(want, r);
      if (!found) problems.push_back(f.name + ": " + x.goal + " lacks " + show(want));
    }
  }
  return problems;
}

void apply_ops(const Fixture& f, Database& db) {
  for (const Operation& op : f.ops) {
    if (op.op == "insert") {
      db.insert(op.axiom);
    } else if (op.op == "remove") {
      db.remove(op.axiom);
    } else {
      throw Error(Errc::SyntaxError, "unknown fixture op " + op.op);
    }
  }
}

}  // namespace fishtank::tweetlog
