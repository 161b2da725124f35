#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fishtank/axiom.hpp"
#include "fishtank/term.hpp"

namespace fishtank {

// --- partitions ----------------------------------------------------------

struct Entry {
  Axiom axiom;
  std::int64_t mult;
};

/// Entries sharing one predicate key, in insertion order. Zero
/// multiplicities are pruned.
class Group {
 public:
  std::span<const Entry> entries() const noexcept { return entries_; }
  std::int64_t mult(const Axiom& a) const;
  bool empty() const noexcept { return entries_.empty(); }
  /// Returns the new multiplicity.
  std::int64_t add(const Axiom& a, std::int64_t delta);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<Axiom, std::size_t, AxiomHash> index_;
};

using GroupPtr = std::shared_ptr<const Group>;

/// All concrete axioms of one subject, grouped by the predicate key of
/// their key atom. Copying shares the groups; `add` copies only the group
/// it touches.
class Partition {
 public:
  const Group* group(std::string_view pred_key) const;
  const std::map<std::string, GroupPtr, std::less<>>& groups() const noexcept { return groups_; }
  bool empty() const noexcept { return groups_.empty(); }
  std::int64_t add(const Axiom& a, std::int64_t delta);

 private:
  std::map<std::string, GroupPtr, std::less<>> groups_;
};

using PartitionPtr = std::shared_ptr<const Partition>;

struct IoCounters {
  std::uint64_t partition_accesses = 0;
  std::uint64_t generic_accesses = 0;
};

/// Subject-partitioned axiom store T. Readers get immutable snapshots;
/// writers to the same key are serialized.
class PartitionStore {
 public:
  PartitionStore();

  /// Snapshot of one partition (never null). Counts one partition access.
  PartitionPtr read_partition(const SubjectKey& key) const;

  /// Runs `mutator` on a private copy of the partition while holding the
  /// key's write lock, then publishes the copy. Counts one partition access.
  void update_partition(const SubjectKey& key, const std::function<void(Partition&)>& mutator);

  /// Every partition holding entries under `pred_key`, in key order. Counts
  /// one partition access per partition returned.
  std::vector<std::pair<SubjectKey, PartitionPtr>> scan_by_name(std::string_view pred_key) const;

  /// True if any partition holds entries under `pred_key` (index lookup,
  /// not counted).
  bool has_concrete(std::string_view pred_key) const;

  /// Generic section group for `pred_key` (never null). Counts one generic access.
  GroupPtr read_generic(std::string_view pred_key) const;
  void update_generic(std::string_view pred_key, const std::function<void(Group&)>& mutator);

  /// Direct add used by journal replay; not counted.
  void apply(const Axiom& a, std::int64_t delta);

  /// Every stored entry, partitions in key order then the generic section.
  std::vector<Entry> all_entries() const;
  std::size_t partition_count() const;

  IoCounters io_counters() const noexcept;
  void reset_io_counters() noexcept;

 private:
  std::mutex& key_lock(const SubjectKey& key);
  void publish(const SubjectKey& key, PartitionPtr before, PartitionPtr after);

  mutable std::shared_mutex map_mutex_;
  std::map<SubjectKey, PartitionPtr> partitions_;
  std::map<std::string, std::set<SubjectKey>, std::less<>> name_index_;
  std::map<std::string, GroupPtr, std::less<>> generic_;

  std::array<std::mutex, 64> key_locks_;
  std::mutex generic_write_;

  mutable std::atomic<std::uint64_t> partition_accesses_{0};
  mutable std::atomic<std::uint64_t> generic_accesses_{0};
};

// --- journal -------------------------------------------------------------

namespace journal {

inline constexpr std::string_view kHeader = "FTJ1";
inline constexpr std::uint8_t kPush = 0x10;
inline constexpr std::uint8_t kPopCommit = 0x11;
inline constexpr std::uint8_t kPartitionWrite = 0x12;

enum class Origin : std::uint8_t { Client = 0, Derived = 1 };
enum class Status : std::uint8_t { Applied = 0, Dead = 1 };

std::string push_record(Origin origin, std::int64_t delta, const Axiom& a);
std::string pop_commit_record(std::uint64_t seq, Status status, std::string_view error = {});
std::string partition_write_record(std::int64_t delta, const Axiom& a);

}  // namespace journal

/// Append-only byte sink for journal records.
class JournalSink {
 public:
  virtual ~JournalSink() = default;
  /// Appends `bytes` durably (according to the sink's sync policy).
  virtual void append(std::string_view bytes) = 0;
};

class MemoryJournal final : public JournalSink {
 public:
  MemoryJournal() : bytes_(journal::kHeader) {}
  void append(std::string_view bytes) override;
  std::string contents() const;
  /// Offsets at which every record ends, for cut-point testing.
  std::vector<std::size_t> record_ends() const;

 private:
  mutable std::mutex mutex_;
  std::string bytes_;
  std::vector<std::size_t> ends_;
};

class FileJournal final : public JournalSink {
 public:
  /// Opens (creating if missing) and truncates the file to `valid_bytes`;
  /// writes the header when the file is new or empty.
  FileJournal(const std::string& path, std::size_t valid_bytes, bool sync_every_append = true);
  ~FileJournal() override;
  void append(std::string_view bytes) override;

 private:
  std::mutex mutex_;
  std::FILE* file_ = nullptr;
  bool sync_;
};

std::string read_file_bytes(const std::string& path);

struct QueueEntry {
  std::uint64_t seq;
  Axiom axiom;
  std::int64_t delta;
};

struct DeadLetter {
  Axiom axiom;
  std::int64_t delta;
  std::string error;
};

/// State recovered from a journal.
struct Recovered {
  std::vector<std::pair<Axiom, std::int64_t>> writes;  // partition writes, in order
  std::vector<QueueEntry> queue;                       // pending entries, FIFO
  std::vector<DeadLetter> dead_letters;
  std::uint64_t next_seq = 0;
  std::uint64_t ticks = 0;
  std::uint64_t client_pushes = 0;
  std::size_t valid_bytes = 0;  // prefix length holding only complete groups
};

/// Rebuilds state from journal bytes. A truncated or torn trailing record
/// and an incomplete trailing tick group are discarded; damage anywhere
/// else throws Error(CorruptJournal).
Recovered replay(std::string_view bytes);

/// FIFO work queue Q whose pushes are journaled before they are visible.
class DurableQueue {
 public:
  explicit DurableQueue(std::shared_ptr<JournalSink> sink, std::size_t capacity = 0);

  /// Journals and enqueues a client request. Throws QueueFull when a
  /// capacity is configured and reached.
  std::uint64_t push(const Axiom& a, std::int64_t delta);

  std::optional<QueueEntry> pop();

  /// Journals one tick's effects as a single group: derived pushes, the
  /// optional partition write, and the pop-commit of `seq`. Derived
  /// entries become visible in the queue after the group is durable.
  void commit(std::uint64_t seq, const std::vector<std::pair<Axiom, std::int64_t>>& derived,
              const std::optional<std::pair<Axiom, std::int64_t>>& write,
              journal::Status status, std::string_view error = {});

  void restore(const Recovered& r);

  std::size_t size() const;
  std::vector<QueueEntry> contents() const;

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<JournalSink> sink_;
  std::size_t capacity_;
  std::deque<QueueEntry> entries_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace fishtank
