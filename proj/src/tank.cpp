#include "fishtank/tank.hpp"

#include "fishtank/error.hpp"

namespace fishtank {

std::vector<Axiom> derive(const Axiom& alpha, const Axiom& beta, const StaticDB& db,
                          SolveBudget budget) {
  const Axiom* fact = nullptr;
  const Axiom* rule = nullptr;
  if (alpha.is_fact() && beta.is_rule()) {
    fact = &alpha;
    rule = &beta;
  } else if (alpha.is_rule() && beta.is_fact()) {
    fact = &beta;
    rule = &alpha;
  } else {
    return {};
  }
  const Term& trigger = rule->trigger();
  const Term& f = fact->term();
  if (trigger.name() != f.name() || trigger.arity() != f.arity()) return {};

  Axiom renamed = rename_apart(*rule, fresh_scope());
  Substitution s;
  if (!unify(renamed.trigger(), f, s)) return {};

  std::vector<Axiom> out;
  Term consequence = renamed.consequence().term();
  Goal guard = renamed.guard();
  if (guard.kind() == Goal::Kind::True) {
    out.emplace_back(normalize_variables(apply(s, consequence)));
    return out;
  }
  StepCounter steps(budget);
  Resolver(db, steps).solve(guard.term(), s, [&](const Substitution& sol) {
    out.emplace_back(normalize_variables(apply(sol, consequence)));
    return true;
  });
  return out;
}

Tank::Tank(std::shared_ptr<const StaticDB> db, std::shared_ptr<JournalSink> journal,
           TankConfig config)
    : db_(db ? std::move(db) : std::make_shared<const StaticDB>()),
      config_(config),
      queue_(std::move(journal), config.queue_capacity) {}

void Tank::restore(const Recovered& r) {
  for (const auto& [a, d] : r.writes) store_.apply(a, d);
  queue_.restore(r);
  ticks_ = r.ticks;
  std::lock_guard lock(dead_mutex_);
  dead_letters_ = r.dead_letters;
}

void Tank::push(const Axiom& a, std::int64_t delta) {
  if (delta == 0) return;
  queue_.push(a, delta);
}

std::shared_ptr<const StaticDB> Tank::static_db() const {
  std::lock_guard lock(db_mutex_);
  return db_;
}

void Tank::set_static_db(std::shared_ptr<const StaticDB> db) {
  std::lock_guard lock(db_mutex_);
  db_ = std::move(db);
}

void Tank::dead_letter(const QueueEntry& e, const std::string& error) {
  std::lock_guard lock(dead_mutex_);
  dead_letters_.push_back({e.axiom, e.delta, error});
}

std::optional<TickReport> Tank::tick() {
  std::lock_guard serial(tick_mutex_);
  std::optional<QueueEntry> popped = queue_.pop();
  if (!popped) return std::nullopt;
  const QueueEntry& e = *popped;
  TickReport report{e};
  std::shared_ptr<const StaticDB> db = static_db();
  const std::string pk = predicate_key(e.axiom.key_atom());
  std::vector<std::pair<Axiom, std::int64_t>> derived;

  auto pair_with = [&](const Group& g) {
    for (const Entry& other : g.entries()) {
      for (Axiom& gamma : derive(e.axiom, other.axiom, *db, config_.guard_budget)) {
        derived.emplace_back(std::move(gamma), e.delta * other.mult);
      }
    }
  };
  // Guard failures poison only this entry: nothing derived, T unchanged.
  auto commit = [&](auto&& find_counterparts, auto&& write) {
    try {
      if (!e.axiom.is_clause()) find_counterparts();
    } catch (const Error& err) {
      if (err.code() != Errc::BudgetExhausted && err.code() != Errc::BuiltinTypeError) throw;
      queue_.commit(e.seq, {}, std::nullopt, journal::Status::Dead, err.what());
      dead_letter(e, err.what());
      report.dead = true;
      return;
    }
    queue_.commit(e.seq, derived, std::pair{e.axiom, e.delta}, journal::Status::Applied);
    write();
    report.derived = derived.size();
  };

  if (std::optional<SubjectKey> key = subject_of(e.axiom)) {
    store_.update_partition(*key, [&](Partition& p) {
      commit(
          [&] {
            if (const Group* g = p.group(pk)) pair_with(*g);
            pair_with(*store_.read_generic(pk));
          },
          [&] { p.add(e.axiom, e.delta); });
    });
  } else {
    commit(
        [&] {
          for (const auto& [k, p] : store_.scan_by_name(pk)) pair_with(*p->group(pk));
          pair_with(*store_.read_generic(pk));
        },
        [&] { store_.update_generic(pk, [&](Group& g) { g.add(e.axiom, e.delta); }); });
  }
  ++ticks_;
  return report;
}

std::uint64_t Tank::quiesce(std::uint64_t max_ticks) {
  // Always go through tick(): it waits for a tick in flight on another
  // thread, so an empty pop means every popped entry has been applied.
  std::uint64_t n = 0;
  while (true) {
    if (n >= max_ticks && queue_.size() > 0) {
      throw Error(Errc::NotQuiescent, "queue still holds " + std::to_string(queue_.size()) +
                                          " entries after " + std::to_string(n) + " ticks");
    }
    if (!tick()) return n;
    ++n;
  }
}

std::map<Axiom, std::int64_t> Tank::snapshot_counts() const {
  std::map<Axiom, std::int64_t> out;
  for (const Entry& e : store_.all_entries()) out[e.axiom] += e.mult;
  return out;
}

TankStats Tank::stats() const {
  TankStats s;
  s.queue_length = queue_.size();
  s.ticks = ticks_.load();
  s.io = store_.io_counters();
  s.partitions = store_.partition_count();
  std::lock_guard lock(dead_mutex_);
  s.dead_letters = dead_letters_;
  return s;
}

}  // namespace fishtank
