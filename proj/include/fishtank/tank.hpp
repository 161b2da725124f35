#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <vector>

#include "fishtank/axiom.hpp"
#include "fishtank/static_engine.hpp"
#include "fishtank/storage.hpp"

namespace fishtank {

/// Axioms derived from one (fact, rule) pair: one per guard solution, in
/// solution order, with variables normalized. Pairs other than fact x rule
/// (in either order) derive nothing.
std::vector<Axiom> derive(const Axiom& alpha, const Axiom& beta, const StaticDB& db,
                          SolveBudget budget = {});

struct TankConfig {
  SolveBudget guard_budget;
  std::size_t queue_capacity = 0;  // 0 = unbounded
};

struct TickReport {
  QueueEntry entry;
  std::size_t derived = 0;
  bool dead = false;
};

struct TankStats {
  std::size_t queue_length = 0;
  std::uint64_t ticks = 0;
  IoCounters io;
  std::size_t partitions = 0;
  std::vector<DeadLetter> dead_letters;
};

/// The (S, T, Q) state machine. Ticks are serialized; queries and pushes
/// may run concurrently with them.
class Tank {
 public:
  explicit Tank(std::shared_ptr<const StaticDB> db, std::shared_ptr<JournalSink> journal = nullptr,
                TankConfig config = {});

  /// Loads recovered journal state into an empty tank.
  void restore(const Recovered& r);

  void insert(const Axiom& a) { push(a, +1); }
  void remove(const Axiom& a) { push(a, -1); }
  void push(const Axiom& a, std::int64_t delta);

  /// Processes the head of Q; nullopt when Q is empty.
  std::optional<TickReport> tick();

  /// Ticks until Q is empty. Throws NotQuiescent after `max_ticks` ticks
  /// with work remaining. Returns the number of ticks performed.
  std::uint64_t quiesce(std::uint64_t max_ticks = 1'000'000);

  std::map<Axiom, std::int64_t> snapshot_counts() const;
  std::vector<QueueEntry> queue_contents() const { return queue_.contents(); }
  std::size_t queue_length() const { return queue_.size(); }
  TankStats stats() const;

  std::shared_ptr<const StaticDB> static_db() const;
  void set_static_db(std::shared_ptr<const StaticDB> db);

  PartitionStore& store() noexcept { return store_; }
  const PartitionStore& store() const noexcept { return store_; }
  const TankConfig& config() const noexcept { return config_; }

 private:
  void dead_letter(const QueueEntry& e, const std::string& error);

  mutable std::mutex db_mutex_;
  std::shared_ptr<const StaticDB> db_;
  TankConfig config_;
  PartitionStore store_;
  DurableQueue queue_;
  std::mutex tick_mutex_;
  std::atomic<std::uint64_t> ticks_{0};
  mutable std::mutex dead_mutex_;
  std::vector<DeadLetter> dead_letters_;
};

}  // namespace fishtank
