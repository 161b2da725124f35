// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "fishtank/error.hpp"
#include "fishtank/service.hpp"
#include "fishtank/tweetlog.hpp"
#include "support/gen.hpp"
#include "support/http_client.hpp"

using namespace fishtank;
using namespace testsupport;
using Clock = std::chrono::steady_clock;
using oracle::Counts;

namespace {

const std::string kAssets = FISHTANK_SOURCE_DIR "/tweetlog";

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

Counts run_tank(const Instance& inst, const oracle::OpLog& ops, const std::vector<int>& ticks) {
  auto db = make_database(inst);
  drive(*db, ops, ticks);
  db->quiesce();
  return db->tank().snapshot_counts();
}

// 1
Outcome oracle_equivalence() {
  Outcome o;
  Rng rng(1001);
  auto t0 = Clock::now();
  std::size_t entries = 0, rules = 0;
  for (int i = 0; i < 1000 && o.pass; ++i) {
    Instance inst = random_instance(rng);
    Counts got = run_tank(inst, inst.ops, inst.ticks_after);
    Counts want = oracle::naive_run(inst.ops, prelude_static_db());
    entries += want.size();
    rules += inst.rules.size();
    if (got != want) o.fail("instance " + std::to_string(i) + " differs:\n" + inst.describe());
  }
  double secs = seconds_since(t0);
  if (o.pass && secs >= 60) o.fail("took " + fmt_seconds(secs));
  if (o.pass) {
    o.detail = "1000 instances, " + std::to_string(rules) + " rules, " + std::to_string(entries) +
               " final entries, " + fmt_seconds(secs);
  }
  return o;
}

// 2
Outcome order_independence() {
  Outcome o;
  Rng rng(2002);
  for (int i = 0; i < 200 && o.pass; ++i) {
    Instance inst = random_instance(rng);
    Counts first = run_tank(inst, inst.ops, inst.ticks_after);
    for (int p = 0; p < 10 && o.pass; ++p) {
      oracle::OpLog ops = inst.ops;
      std::shuffle(ops.begin(), ops.end(), rng);
      std::vector<int> ticks = inst.ticks_after;
      std::shuffle(ticks.begin(), ticks.end(), rng);
      if (run_tank(inst, ops, ticks) != first) {
        o.fail("instance " + std::to_string(i) + " permutation " + std::to_string(p));
      }
    }
  }
  if (o.pass) o.detail = "200 instances x 10 permutations";
  return o;
}

// 3
Outcome add_remove_symmetry() {
  Outcome o;
  Rng rng(3003);
  for (int i = 0; i < 200 && o.pass; ++i) {
    Instance inst = random_instance(rng);
    oracle::OpLog ops;
    for (const auto& item : inst.ops) {
      if (item.op == oracle::Op::Insert) ops.push_back(item);
    }
    oracle::OpLog removals = ops;
    for (auto& item : removals) item.op = oracle::Op::Remove;
    std::shuffle(removals.begin(), removals.end(), rng);
    ops.insert(ops.end(), removals.begin(), removals.end());
    std::vector<int> ticks(ops.size());
    for (int& t : ticks) t = std::uniform_int_distribution<int>(0, 3)(rng);
    Counts got = run_tank(inst, ops, ticks);
    if (!got.empty()) {
      o.fail("instance " + std::to_string(i) + " left " + std::to_string(got.size()) +
             " entries");
    }
  }
  if (o.pass) o.detail = "200 instances quiesce to an empty store";
  return o;
}

// 4
Outcome product_law() {
  Outcome o;
  Rng rng(4004);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int i = 0; i < 100 && o.pass; ++i) {
    Database db;
    db.load_program(":- fact p/1, q/2.\n");
    int sols = uni(1, 4);
    std::string list = "[";
    for (int k = 0; k < sols; ++k) list += (k ? ", " : "") + std::to_string(10 + k);
    list += "]";
    Axiom rule = db.parse_axiom("p(X) { member(Y, " + list + ") } ~> q(X, Y).");
    std::string subject = uni(0, 1) ? "\"s\"" : "s(" + std::to_string(i) + ")";
    Axiom fact = db.parse_axiom("p(" + subject + ").");
    int n = uni(-3, 5), m = uni(-3, 5);
    if (n == 0) n = 1;
    if (m == 0) m = 2;
    // Interleave so that either side may arrive first.
    std::vector<std::pair<Axiom, int>> pushes;
    for (int k = 0; k < std::abs(n); ++k) pushes.emplace_back(fact, n > 0 ? 1 : -1);
    for (int k = 0; k < std::abs(m); ++k) pushes.emplace_back(rule, m > 0 ? 1 : -1);
    std::shuffle(pushes.begin(), pushes.end(), rng);
    for (const auto& [a, d] : pushes) db.tank().push(a, d);
    db.quiesce();
    auto counts = db.tank().snapshot_counts();
    for (int k = 0; k < sols; ++k) {
      Axiom q = db.parse_axiom("q(" + subject + ", " + std::to_string(10 + k) + ").");
      auto it = counts.find(q);
      std::int64_t got = it == counts.end() ? 0 : it->second;
      if (got != static_cast<std::int64_t>(n) * m) {
        o.fail("n=" + std::to_string(n) + " m=" + std::to_string(m) + " got " +
               std::to_string(got));
      }
    }
  }
  if (o.pass) o.detail = "100 cases, n and m in [-3, 5]";
  return o;
}

// 5
Outcome io_counts() {
  Outcome o;
  Rng rng(5005);
  int facts = 0, queries = 0, rule_inserts = 0;
  for (int i = 0; i < 200 && o.pass; ++i) {
    Instance inst = random_instance(rng);
    auto db = make_database(inst);
    drive(*db, inst.ops, inst.ticks_after);
    db->quiesce();
    PartitionStore& store = db->tank().store();

    Axiom f = random_fact(rng, inst);
    if (subject_of(f)) {
      db->insert(f);
      store.reset_io_counters();
      db->tank().tick();
      if (store.io_counters().partition_accesses != 1) {
        o.fail("concrete fact tick cost " +
               std::to_string(store.io_counters().partition_accesses));
      }
      ++facts;
      db->quiesce();
    }

    // Single ground DAtoms cost one partition each; a conjunction of two
    // fact atoms pays one more per solution of its first conjunct.
    const std::string& c = inst.constants.front();
    const std::string& key = inst.fact_names.front();
    std::string head = key.substr(0, key.find('/')) + "(" + c;
    std::string atom = head + (key.back() == '2' ? ", Y)" : ")");
    std::string atom2 = head + (key.back() == '2' ? ", Y2)" : ")");
    try {
      store.reset_io_counters();
      std::size_t n1 = db->query(atom).size();
      std::uint64_t single = store.io_counters().partition_accesses;
      store.reset_io_counters();
      db->query(atom + ", " + atom2);
      std::uint64_t conj = store.io_counters().partition_accesses;
      if (single != 1 || conj != 1 + n1) {
        o.fail("query " + atom + " cost " + std::to_string(single) + "/" + std::to_string(conj));
      }
      ++queries;
    } catch (const Error& e) {
      if (e.code() != Errc::UnindexedQuery) throw;
    }

    // Generic rule insert: one access per partition holding the name.
    const std::string& target = inst.fact_names[inst.fact_names.size() - 1];
    std::string tname = target.substr(0, target.find('/'));
    std::string trigger = tname + (target.back() == '2' ? "(A, B)" : "(A)");
    Axiom rule = db->parse_axiom(trigger + " ~> d(A).");
    std::set<SubjectKey> holders;
    for (const auto& [a, n] : db->tank().snapshot_counts()) {
      if (predicate_key(a.key_atom()) == target) {
        if (auto s = subject_of(a)) holders.insert(*s);
      }
    }
    db->insert(rule);
    store.reset_io_counters();
    db->tank().tick();
    if (store.io_counters().partition_accesses != holders.size()) {
      o.fail("generic rule insert touched " +
             std::to_string(store.io_counters().partition_accesses) + " partitions, expected " +
             std::to_string(holders.size()));
    }
    ++rule_inserts;
  }
  if (o.pass) {
    o.detail = std::to_string(facts) + " fact ticks, " + std::to_string(queries) +
               " queries, " + std::to_string(rule_inserts) + " generic rule inserts";
  }
  return o;
}

// 6
Outcome tweetlog_end_to_end() {
  Outcome o;
  auto t0 = Clock::now();
  for (const char* name : {"basic", "retraction"}) {
    auto f = tweetlog::load_fixture(kAssets + "/fixtures/" + name + ".json");
    Database db;
    tweetlog::load(db, kAssets);
    tweetlog::apply_ops(f, db);
    db.quiesce();
    for (const auto& p : tweetlog::check(f, [&](const std::string& g) { return db.query(g); })) {
      o.fail(std::string(name) + " in-process: " + p);
    }

    Database served;
    tweetlog::load(served, kAssets);
    served.quiesce();
    Service svc(served, ServiceConfig{.port = 0});
    ApiClient client(svc.start());
    for (const auto& p : client.run_fixture(f)) o.fail(std::string(name) + " over HTTP: " + p);
    svc.stop();
  }

  Database db;
  tweetlog::load(db, kAssets);
  auto sols = solve_all(parse_goal("charCodes(\"hello @a #greet\", C), parse(nt(tokens(T)), C, [])",
                                   db.declarations()),
                        Term::var("T"), *db.tank().static_db(), SolveBudget{}, 10);
  Term want = parse_term("[word(\"hello\"), userID(\"a\"), hashtag(\"greet\")]");
  if (sols.size() != 1 || sols[0] != want) o.fail("tokenization of \"hello @a #greet\"");

  db.quiesce();
  db.insert("tweeted(user(\"z\"), 1, text(plain(\"one #two @three four\"))).");
  db.quiesce();
  std::size_t index = 0;
  for (const auto& [a, n] : db.tank().snapshot_counts()) {
    if (a.is_fact() && a.term().name() == "searchIndex") index += static_cast<std::size_t>(n);
  }
  if (index != 5) o.fail("4-token tweet gave " + std::to_string(index) + " index entries");

  double secs = seconds_since(t0);
  if (secs >= 5) o.fail("took " + fmt_seconds(secs));
  if (o.pass) o.detail = "fixtures in-process and over HTTP, " + fmt_seconds(secs);
  return o;
}

// Independent scanner for the token language: split on spaces; inside a
// run, '#' and '@' start tags and any other character extends a word.
Term scan_tokens(const std::string& s) {
  std::vector<Term> out;
  std::size_t i = 0;
  auto is_word = [](char c) { return c != ' ' && c != '@' && c != '#'; };
  while (i < s.size()) {
    if (s[i] == ' ') {
      ++i;
      continue;
    }
    std::string kind = "word";
    if (s[i] == '#' || s[i] == '@') {
      kind = s[i] == '#' ? "hashtag" : "userID";
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && is_word(s[j])) ++j;
    out.push_back(Term::compound(kind, {Term::string(s.substr(i, j - i))}));
    i = j;
  }
  return make_list(out);
}

// 7
Outcome tokenizer_differential() {
  Outcome o;
  Database db;
  tweetlog::load(db, kAssets);
  auto sdb = db.tank().static_db();
  Rng rng(7007);
  const std::string alphabet = "abcxyzABZ @#";
  for (int i = 0; i < 1000 && o.pass; ++i) {
    int len = std::uniform_int_distribution<int>(0, 40)(rng);
    std::string s;
    for (int k = 0; k < len; ++k) {
      s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    }
    Term goal = Term::compound(",", {Term::compound("charCodes", {Term::string(s), Term::var("C")}),
                                     parse_term("parse(nt(tokens(T)), C, [])")});
    auto sols = solve_all(Goal(goal), Term::var("T"), *sdb, SolveBudget{}, 3);
    Term want = scan_tokens(s);
    if (sols.size() != 1 || sols[0] != want) {
      o.fail("\"" + s + "\": " + std::to_string(sols.size()) + " parses, expected " + print(want));
    }
  }
  if (o.pass) o.detail = "1000 strings up to 40 characters";
  return o;
}

// 8
Outcome durability() {
  Outcome o;
  Rng rng(8008);
  int cuts = 0, file_cuts = 0;
  for (int i = 0; i < 50 && o.pass; ++i) {
    Instance inst = random_instance(rng);
    auto journal = std::make_shared<MemoryJournal>();
    auto db = make_database(inst, journal);
    drive(*db, inst.ops, inst.ticks_after);
    db->quiesce();
    Counts full = db->tank().snapshot_counts();
    std::string bytes = journal->contents();
    std::vector<std::size_t> ends = journal->record_ends();

    for (int c = 0; c < 20 && o.pass; ++c) {
      // Half the cuts land on record boundaries, half anywhere.
      std::size_t cut = c % 2 == 0 && !ends.empty()
                            ? ends[std::uniform_int_distribution<std::size_t>(0, ends.size() - 1)(rng)]
                            : std::uniform_int_distribution<std::size_t>(0, bytes.size())(rng);
      std::string prefix = bytes.substr(0, cut);
      std::unique_ptr<Database> restarted;
      if (c == 0) {
        // One cut per instance goes through a real file and Database::open.
        auto path = std::filesystem::temp_directory_path() /
                    ("fishtank_accept_" + std::to_string(i) + ".ftj");
        std::ofstream(path, std::ios::binary | std::ios::trunc) << prefix;
        auto [opened, had] = Database::open(path.string());
        restarted = std::move(opened);
        restarted->load_program(inst.program, LoadMode::DefinitionsOnly);
        ++file_cuts;
        std::filesystem::remove(path);
      } else {
        Recovered r = replay(prefix);
        restarted = make_database(inst);
        restarted->tank().restore(r);
      }
      restarted->quiesce();

      Recovered r = replay(prefix);
      oracle::OpLog acked(inst.ops.begin(), inst.ops.begin() + static_cast<long>(r.client_pushes));
      Counts want = r.client_pushes == inst.ops.size() ? full
                                                       : oracle::naive_run(acked, prelude_static_db());
      if (restarted->tank().snapshot_counts() != want) {
        o.fail("instance " + std::to_string(i) + " cut at byte " + std::to_string(cut));
      }
      ++cuts;
    }
  }
  if (o.pass) {
    o.detail = std::to_string(cuts) + " cut points over 50 instances (" +
               std::to_string(file_cuts) + " through a journal file)";
  }
  return o;
}

// Random surface items for the round-trip check.
class ItemGen {
 public:
  explicit ItemGen(Rng& rng) : rng_(rng) {}

  Term term(int depth) {
    switch (uni(0, depth > 0 ? 6 : 3)) {
      case 0: return Term::integer(std::uniform_int_distribution<std::int64_t>(-1'000'000'000'000, 1'000'000'000'000)(rng_));
      case 1: return Term::string(text());
      case 2: return Term::var(var_name());
      case 3: return Term::atom(atom_name());
      case 4: {
        std::vector<Term> items;
        for (int k = uni(0, 3); k > 0; --k) items.push_back(term(depth - 1));
        std::optional<Term> tail;
        if (!items.empty() && uni(0, 4) == 0) tail = Term::var(var_name());
        return make_list(items, tail);
      }
      default: {
        std::vector<Term> args;
        for (int k = uni(1, 3); k > 0; --k) args.push_back(term(depth - 1));
        return Term::compound(atom_name(), args);
      }
    }
  }

  int uni(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string var_name() {
    static const std::vector<std::string> names = {"X", "Y", "Zed", "_Tmp", "A1", "B_2"};
    return names[static_cast<std::size_t>(uni(0, static_cast<int>(names.size()) - 1))];
  }

 private:
  std::string atom_name() {
    static const std::vector<std::string> names = {"a", "foo", "bar_baz", "x1", "nil", "user"};
    return names[static_cast<std::size_t>(uni(0, static_cast<int>(names.size()) - 1))];
  }

  std::string text() {
    static const std::vector<std::string> pieces = {"a", "Z", " ", "\"", "\\", "\n", "\t",
                                                    "@", "#", "é", "✓", "0", "'"};
    std::string s;
    for (int k = uni(0, 6); k > 0; --k) {
      s += pieces[static_cast<std::size_t>(uni(0, static_cast<int>(pieces.size()) - 1))];
    }
    return s;
  }

  Rng& rng_;
};

// 9
Outcome parser_round_trip() {
  Outcome o;
  Rng rng(9009);
  ItemGen gen(rng);
  Declarations decls = Database().declarations();
  parse_program(":- fact f/2, g/1.\n:- dynamic d/2.\n:- static s/2.\n", decls);
  auto check = [&](const std::string& printed, const auto& reparsed, const auto& original) {
    if (!(reparsed == original)) o.fail("round trip changed " + printed);
  };
  int counts[4] = {0, 0, 0, 0};
  std::string last;
  for (int i = 0; i < 1000 && o.pass; ++i) {
    int kind = gen.uni(0, 3);
    ++counts[kind];
    try {
      if (kind == 0) {
        Term t = gen.term(3);
        std::string p = last = print(t);
        check(p, parse_term(p), t);
      } else if (kind == 1) {
        // Static clause: a head plus a guard-style body.
        Term x = Term::var(gen.var_name());
        Term head = Term::compound("s", {x, gen.term(2)});
        Goal body = Goal(Term::compound("member", {x, gen.term(2)}));
        if (gen.uni(0, 1)) body = Goal::conj(body, Goal::negation(Goal(Term::compound("=", {x, gen.term(1)}))));
        StaticClause c{head, body};
        std::string p = last = print(c);
        Declarations d = decls;
        auto items = parse_program(p + ".", d);
        if (items.size() != 1 || !std::holds_alternative<StaticClause>(items[0])) {
          o.fail("static clause did not reparse: " + p);
        } else {
          check(p, std::get<StaticClause>(items[0]), c);
        }
      } else if (kind == 2) {
        // Fact or guarded rule.
        Term x = Term::var("X");
        Axiom fact = Axiom::fact(Term::compound("f", {gen.term(2), gen.term(2)}));
        Axiom a = fact;
        if (gen.uni(0, 1)) {
          Goal guard = Goal(Term::compound("member", {Term::var("Y"), gen.term(2)}));
          Axiom cons = Axiom::fact(Term::compound("g", {Term::var("Y")}));
          if (gen.uni(0, 1)) cons = Axiom::rule(Term::compound("g", {x}), Goal::truth(), cons);
          a = Axiom::rule(Term::compound("f", {x, gen.term(2)}), guard, cons);
        }
        std::string p = last = print(a);
        check(p, parse_axiom(p, decls), a);
      } else {
        // Dynamic clause with a mixed body.
        Term x = Term::var("X");
        DGoal body = DGoal(Term::compound("f", {x, gen.term(2)}));
        if (gen.uni(0, 1)) body = DGoal::conj(body, DGoal::negation(DGoal(Term::compound("d", {x, gen.term(1)}))));
        if (gen.uni(0, 1)) body = DGoal::conj(DGoal::embed(Goal(Term::compound("s", {x, gen.term(1)}))), body);
        Axiom a = Axiom::clause(Term::compound("d", {x, gen.term(2)}), body);
        std::string p = last = print(a);
        check(p, parse_axiom(p, decls), a);
      }
    } catch (const Error& e) {
      o.fail(last + " raised " + e.what());
    }
  }
  if (o.pass) {
    o.detail = std::to_string(counts[0]) + " terms, " + std::to_string(counts[1]) +
               " static clauses, " + std::to_string(counts[2]) + " facts/rules, " +
               std::to_string(counts[3]) + " dynamic clauses";
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"oracle-equivalence", oracle_equivalence},
      {"order-independence", order_independence},
      {"add-remove-symmetry", add_remove_symmetry},
      {"product-law", product_law},
      {"io-counts", io_counts},
      {"tweetlog-end-to-end", tweetlog_end_to_end},
      {"tokenizer-differential", tokenizer_differential},
      {"durability-replay", durability},
      {"parser-round-trip", parser_round_trip},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
