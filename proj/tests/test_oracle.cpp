#include "doctest.h"

#include "fishtank/error.hpp"
#include "support/gen.hpp"

using namespace fishtank;
using namespace testsupport;

TEST_CASE("random instances match the naive oracle") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    Instance inst = random_instance(rng);
    auto db = make_database(inst);
    drive(*db, inst.ops, inst.ticks_after);
    db->quiesce();
    auto expected = oracle::naive_run(inst.ops, prelude_static_db());
    if (db->tank().snapshot_counts() != expected) {
      MESSAGE(inst.describe());
      CHECK(false);
      break;
    }
  }
}

TEST_CASE("query engine agrees with a full scan") {
  Rng rng(11);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    Instance inst = random_instance(rng);
    auto db = make_database(inst);
    drive(*db, inst.ops, inst.ticks_after);
    db->quiesce();
    auto counts = db->tank().snapshot_counts();
    std::vector<std::string> goals;
    for (const std::string& c : inst.constants) {
      goals.push_back("d(" + c + ")");
      for (const std::string& key : inst.fact_names) {
        std::string name = key.substr(0, key.find('/'));
        bool binary = key.back() == '2';
        goals.push_back(name + "(" + c + (binary ? ", Y)" : ")"));
        goals.push_back(name + "(" + c + (binary ? ", Y), \\+ d(" + c + ")" : "), d(" + c + ")"));
      }
    }
    for (const std::string& text : goals) {
      DGoal g = db->parse_query(text);
      std::vector<Term> got;
      try {
        for (const QueryResult& r : db->query(g)) {
          std::vector<Term> values;
          for (const auto& [n, v] : r.bindings) values.push_back(v);
          got.push_back(normalize_variables(Term::compound("", values)));
        }
      } catch (const Error& e) {
        // Generic clause bodies may reach a non-ground first argument.
        CHECK(e.code() == Errc::UnindexedQuery);
        continue;
      }
      std::sort(got.begin(), got.end());
      CAPTURE(text);
      CHECK(got == oracle::naive_query(g, counts, prelude_static_db()));
      ++checked;
    }
  }
  CHECK(checked > 500);
}
