#include "fishtank/storage.hpp"

#include <unistd.h>
#include <zlib.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fishtank/error.hpp"

namespace fishtank {

// --- groups and partitions -----------------------------------------------

std::int64_t Group::mult(const Axiom& a) const {
  auto it = index_.find(a);
  return it == index_.end() ? 0 : entries_[it->second].mult;
}

std::int64_t Group::add(const Axiom& a, std::int64_t delta) {
  auto it = index_.find(a);
  if (it == index_.end()) {
    if (delta == 0) return 0;
    index_.emplace(a, entries_.size());
    entries_.push_back({a, delta});
    return delta;
  }
  std::size_t pos = it->second;
  std::int64_t m = entries_[pos].mult += delta;
  if (m == 0) {
    index_.erase(it);
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(pos));
    for (std::size_t i = pos; i < entries_.size(); ++i) index_[entries_[i].axiom] = i;
  }
  return m;
}

const Group* Partition::group(std::string_view pred_key) const {
  auto it = groups_.find(pred_key);
  return it == groups_.end() ? nullptr : it->second.get();
}

std::int64_t Partition::add(const Axiom& a, std::int64_t delta) {
  std::string key = predicate_key(a.key_atom());
  auto it = groups_.find(key);
  auto g = it == groups_.end() ? std::make_shared<Group>() : std::make_shared<Group>(*it->second);
  std::int64_t m = g->add(a, delta);
  if (g->empty()) {
    if (it != groups_.end()) groups_.erase(it);
  } else {
    groups_[key] = std::move(g);
  }
  return m;
}

// --- store ---------------------------------------------------------------

namespace {

const PartitionPtr& empty_partition() {
  static const PartitionPtr p = std::make_shared<const Partition>();
  return p;
}

const GroupPtr& empty_group() {
  static const GroupPtr g = std::make_shared<const Group>();
  return g;
}

}  // namespace

PartitionStore::PartitionStore() = default;

std::mutex& PartitionStore::key_lock(const SubjectKey& key) {
  return key_locks_[SubjectKeyHash{}(key) % key_locks_.size()];
}

PartitionPtr PartitionStore::read_partition(const SubjectKey& key) const {
  partition_accesses_.fetch_add(1, std::memory_order_relaxed);
  std::shared_lock lock(map_mutex_);
  auto it = partitions_.find(key);
  return it == partitions_.end() ? empty_partition() : it->second;
}

void PartitionStore::update_partition(const SubjectKey& key,
                                      const std::function<void(Partition&)>& mutator) {
  partition_accesses_.fetch_add(1, std::memory_order_relaxed);
  std::lock_guard write(key_lock(key));
  PartitionPtr before;
  {
    std::shared_lock lock(map_mutex_);
    auto it = partitions_.find(key);
    before = it == partitions_.end() ? empty_partition() : it->second;
  }
  auto working = std::make_shared<Partition>(*before);
  mutator(*working);
  publish(key, std::move(before), std::move(working));
}

void PartitionStore::publish(const SubjectKey& key, PartitionPtr before, PartitionPtr after) {
  std::unique_lock lock(map_mutex_);
  for (const auto& [name, g] : before->groups()) {
    if (!after->group(name)) {
      auto it = name_index_.find(name);
      it->second.erase(key);
      if (it->second.empty()) name_index_.erase(it);
    }
  }
  for (const auto& [name, g] : after->groups()) {
    if (!before->group(name)) name_index_[name].insert(key);
  }
  if (after->empty()) {
    partitions_.erase(key);
  } else {
    partitions_[key] = std::move(after);
  }
}

std::vector<std::pair<SubjectKey, PartitionPtr>> PartitionStore::scan_by_name(
    std::string_view pred_key) const {
  std::vector<std::pair<SubjectKey, PartitionPtr>> out;
  {
    std::shared_lock lock(map_mutex_);
    auto it = name_index_.find(pred_key);
    if (it == name_index_.end()) return out;
    for (const SubjectKey& k : it->second) out.emplace_back(k, partitions_.at(k));
  }
  partition_accesses_.fetch_add(out.size(), std::memory_order_relaxed);
  return out;
}

bool PartitionStore::has_concrete(std::string_view pred_key) const {
  std::shared_lock lock(map_mutex_);
  return name_index_.find(pred_key) != name_index_.end();
}

GroupPtr PartitionStore::read_generic(std::string_view pred_key) const {
  generic_accesses_.fetch_add(1, std::memory_order_relaxed);
  std::shared_lock lock(map_mutex_);
  auto it = generic_.find(pred_key);
  return it == generic_.end() ? empty_group() : it->second;
}

void PartitionStore::update_generic(std::string_view pred_key,
                                    const std::function<void(Group&)>& mutator) {
  generic_accesses_.fetch_add(1, std::memory_order_relaxed);
  std::lock_guard write(generic_write_);
  GroupPtr before;
  {
    std::shared_lock lock(map_mutex_);
    auto it = generic_.find(pred_key);
    before = it == generic_.end() ? empty_group() : it->second;
  }
  auto working = std::make_shared<Group>(*before);
  mutator(*working);
  std::unique_lock lock(map_mutex_);
  if (working->empty()) {
    auto it = generic_.find(pred_key);
    if (it != generic_.end()) generic_.erase(it);
  } else {
    generic_.insert_or_assign(std::string(pred_key), std::move(working));
  }
}

void PartitionStore::apply(const Axiom& a, std::int64_t delta) {
  if (auto key = subject_of(a)) {
    std::lock_guard write(key_lock(*key));
    PartitionPtr before;
    {
      std::shared_lock lock(map_mutex_);
      auto it = partitions_.find(*key);
      before = it == partitions_.end() ? empty_partition() : it->second;
    }
    auto working = std::make_shared<Partition>(*before);
    working->add(a, delta);
    publish(*key, std::move(before), std::move(working));
    return;
  }
  std::string pk = predicate_key(a.key_atom());
  std::lock_guard write(generic_write_);
  std::unique_lock lock(map_mutex_);
  auto it = generic_.find(pk);
  auto g = it == generic_.end() ? std::make_shared<Group>() : std::make_shared<Group>(*it->second);
  g->add(a, delta);
  if (g->empty()) {
    if (it != generic_.end()) generic_.erase(it);
  } else {
    generic_[pk] = std::move(g);
  }
}

std::vector<Entry> PartitionStore::all_entries() const {
  std::shared_lock lock(map_mutex_);
  std::vector<Entry> out;
  for (const auto& [key, p] : partitions_) {
    for (const auto& [name, g] : p->groups()) {
      out.insert(out.end(), g->entries().begin(), g->entries().end());
    }
  }
  for (const auto& [name, g] : generic_) {
    out.insert(out.end(), g->entries().begin(), g->entries().end());
  }
  return out;
}

std::size_t PartitionStore::partition_count() const {
  std::shared_lock lock(map_mutex_);
  return partitions_.size();
}

IoCounters PartitionStore::io_counters() const noexcept {
  return {partition_accesses_.load(), generic_accesses_.load()};
}

void PartitionStore::reset_io_counters() noexcept {
  partition_accesses_.store(0);
  generic_accesses_.store(0);
}

// --- journal records -----------------------------------------------------

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

std::uint64_t get_uint(std::string_view& in, int bytes) {
  if (in.size() < static_cast<std::size_t>(bytes)) {
    throw Error(Errc::CorruptJournal, "record payload too short");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v = (v << 8) | static_cast<unsigned char>(in[i]);
  in.remove_prefix(bytes);
  return v;
}

std::uint32_t checksum(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

std::string frame(std::uint8_t tag, const std::string& payload) {
  std::string out;
  out.push_back(static_cast<char>(tag));
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out += payload;
  put_u32(out, checksum(out));
  return out;
}

std::string delta_axiom(std::int64_t delta, const Axiom& a) {
  std::string payload;
  put_u64(payload, static_cast<std::uint64_t>(delta));
  encode_term(a.term(), payload, true);
  return payload;
}

}  // namespace

namespace journal {

std::string push_record(Origin origin, std::int64_t delta, const Axiom& a) {
  std::string payload(1, static_cast<char>(origin));
  payload += delta_axiom(delta, a);
  return frame(kPush, payload);
}

std::string pop_commit_record(std::uint64_t seq, Status status, std::string_view error) {
  std::string payload;
  put_u64(payload, seq);
  payload.push_back(static_cast<char>(status));
  if (status == Status::Dead) {
    put_u32(payload, static_cast<std::uint32_t>(error.size()));
    payload += error;
  }
  return frame(kPopCommit, payload);
}

std::string partition_write_record(std::int64_t delta, const Axiom& a) {
  return frame(kPartitionWrite, delta_axiom(delta, a));
}

}  // namespace journal

// --- sinks ---------------------------------------------------------------

void MemoryJournal::append(std::string_view bytes) {
  std::lock_guard lock(mutex_);
  // Record ends are recovered by walking the frames just appended.
  std::size_t pos = bytes_.size();
  bytes_ += bytes;
  while (pos + 5 <= bytes_.size()) {
    std::string_view hdr(bytes_.data() + pos + 1, 4);
    std::uint32_t len = static_cast<std::uint32_t>(get_uint(hdr, 4));
    pos += 1 + 4 + len + 4;
    ends_.push_back(pos);
  }
}

std::string MemoryJournal::contents() const {
  std::lock_guard lock(mutex_);
  return bytes_;
}

std::vector<std::size_t> MemoryJournal::record_ends() const {
  std::lock_guard lock(mutex_);
  return ends_;
}

FileJournal::FileJournal(const std::string& path, std::size_t valid_bytes,
                         bool sync_every_append)
    : sync_(sync_every_append) {
  file_ = std::fopen(path.c_str(), "ab");
  if (!file_) throw Error(Errc::StorageError, "cannot open journal " + path + ": " + std::strerror(errno));
  if (::ftruncate(::fileno(file_), static_cast<off_t>(valid_bytes)) != 0) {
    throw Error(Errc::StorageError, "cannot truncate journal " + path);
  }
  if (valid_bytes < journal::kHeader.size()) {
    if (::ftruncate(::fileno(file_), 0) != 0) {
      throw Error(Errc::StorageError, "cannot truncate journal " + path);
    }
    append(journal::kHeader);
  }
}

FileJournal::~FileJournal() {
  if (file_) std::fclose(file_);
}

void FileJournal::append(std::string_view bytes) {
  std::lock_guard lock(mutex_);
  if (std::fwrite(bytes.data(), 1, bytes.size(), file_) != bytes.size() || std::fflush(file_) != 0) {
    throw Error(Errc::StorageError, "journal write failed");
  }
  if (sync_ && ::fdatasync(::fileno(file_)) != 0) {
    throw Error(Errc::StorageError, "journal sync failed");
  }
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- replay --------------------------------------------------------------

Recovered replay(std::string_view bytes) {
  Recovered r;
  if (bytes.size() < journal::kHeader.size()) {
    if (journal::kHeader.substr(0, bytes.size()) != bytes) {
      throw Error(Errc::CorruptJournal, "bad journal header");
    }
    return r;
  }
  if (bytes.substr(0, 4) != journal::kHeader) throw Error(Errc::CorruptJournal, "bad journal header");

  std::map<std::uint64_t, QueueEntry> pending;
  std::vector<std::pair<Axiom, std::int64_t>> group_pushes;
  std::vector<std::pair<Axiom, std::int64_t>> group_writes;
  bool in_group = false;
  std::size_t pos = 4;
  r.valid_bytes = pos;

  while (pos < bytes.size()) {
    std::string_view rest = bytes.substr(pos);
    if (rest.size() < 9) break;  // torn header
    std::string_view hdr = rest.substr(1, 4);
    std::uint32_t len = static_cast<std::uint32_t>(get_uint(hdr, 4));
    std::size_t total = 1 + 4 + std::size_t{len} + 4;
    if (rest.size() < total) break;  // torn record
    std::string_view crc_bytes = rest.substr(5 + len, 4);
    auto stored = static_cast<std::uint32_t>(get_uint(crc_bytes, 4));
    if (stored != checksum(rest.substr(0, 5 + len))) {
      if (pos + total == bytes.size()) break;  // torn final record
      throw Error(Errc::CorruptJournal, "checksum mismatch at offset " + std::to_string(pos));
    }
    auto tag = static_cast<std::uint8_t>(rest[0]);
    std::string_view payload = rest.substr(5, len);

    auto read_delta_axiom = [&](std::string_view& p) {
      auto delta = static_cast<std::int64_t>(get_uint(p, 8));
      Axiom a(decode_term(p));
      if (!p.empty()) throw Error(Errc::CorruptJournal, "trailing bytes in record");
      return std::pair<Axiom, std::int64_t>{a, delta};
    };

    if (tag == journal::kPush) {
      if (payload.empty()) throw Error(Errc::CorruptJournal, "empty push record");
      auto origin = static_cast<std::uint8_t>(payload[0]);
      payload.remove_prefix(1);
      auto item = read_delta_axiom(payload);
      if (origin == static_cast<std::uint8_t>(journal::Origin::Client)) {
        if (in_group) throw Error(Errc::CorruptJournal, "client push inside a tick group");
        pending.emplace(r.next_seq, QueueEntry{r.next_seq, item.first, item.second});
        ++r.next_seq;
        ++r.client_pushes;
        r.valid_bytes = pos + total;
      } else if (origin == static_cast<std::uint8_t>(journal::Origin::Derived)) {
        in_group = true;
        group_pushes.push_back(std::move(item));
      } else {
        throw Error(Errc::CorruptJournal, "unknown push origin");
      }
    } else if (tag == journal::kPartitionWrite) {
      in_group = true;
      group_writes.push_back(read_delta_axiom(payload));
    } else if (tag == journal::kPopCommit) {
      std::uint64_t seq = get_uint(payload, 8);
      auto status = static_cast<std::uint8_t>(get_uint(payload, 1));
      auto it = pending.find(seq);
      if (it == pending.end()) throw Error(Errc::CorruptJournal, "commit of unknown entry");
      if (status == static_cast<std::uint8_t>(journal::Status::Dead)) {
        auto n = static_cast<std::size_t>(get_uint(payload, 4));
        if (payload.size() != n) throw Error(Errc::CorruptJournal, "bad dead-letter payload");
        r.dead_letters.push_back({it->second.axiom, it->second.delta, std::string(payload)});
      } else if (status != static_cast<std::uint8_t>(journal::Status::Applied) || !payload.empty()) {
        throw Error(Errc::CorruptJournal, "bad pop-commit payload");
      }
      pending.erase(it);
      for (auto& w : group_writes) r.writes.push_back(std::move(w));
      for (auto& [a, d] : group_pushes) {
        pending.emplace(r.next_seq, QueueEntry{r.next_seq, a, d});
        ++r.next_seq;
      }
      group_writes.clear();
      group_pushes.clear();
      in_group = false;
      ++r.ticks;
      r.valid_bytes = pos + total;
    } else {
      throw Error(Errc::CorruptJournal, "unknown record tag at offset " + std::to_string(pos));
    }
    pos += total;
  }
  for (auto& [seq, e] : pending) r.queue.push_back(std::move(e));
  return r;
}

// --- queue ---------------------------------------------------------------

DurableQueue::DurableQueue(std::shared_ptr<JournalSink> sink, std::size_t capacity)
    : sink_(std::move(sink)), capacity_(capacity) {}

std::uint64_t DurableQueue::push(const Axiom& a, std::int64_t delta) {
  std::lock_guard lock(mutex_);
  if (capacity_ != 0 && entries_.size() >= capacity_) {
    throw Error(Errc::QueueFull, "work queue is full");
  }
  if (sink_) sink_->append(journal::push_record(journal::Origin::Client, delta, a));
  std::uint64_t seq = next_seq_++;
  entries_.push_back({seq, a, delta});
  return seq;
}

std::optional<QueueEntry> DurableQueue::pop() {
  std::lock_guard lock(mutex_);
  if (entries_.empty()) return std::nullopt;
  QueueEntry e = std::move(entries_.front());
  entries_.pop_front();
  return e;
}

void DurableQueue::commit(std::uint64_t seq,
                          const std::vector<std::pair<Axiom, std::int64_t>>& derived,
                          const std::optional<std::pair<Axiom, std::int64_t>>& write,
                          journal::Status status, std::string_view error) {
  std::lock_guard lock(mutex_);
  if (sink_) {
    std::string group;
    for (const auto& [a, d] : derived) group += journal::push_record(journal::Origin::Derived, d, a);
    if (write) group += journal::partition_write_record(write->second, write->first);
    group += journal::pop_commit_record(seq, status, error);
    sink_->append(group);
  }
  for (const auto& [a, d] : derived) entries_.push_back({next_seq_++, a, d});
}

void DurableQueue::restore(const Recovered& r) {
  std::lock_guard lock(mutex_);
  entries_.assign(r.queue.begin(), r.queue.end());
  next_seq_ = r.next_seq;
}

std::size_t DurableQueue::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::vector<QueueEntry> DurableQueue::contents() const {
  std::lock_guard lock(mutex_);
  return {entries_.begin(), entries_.end()};
}

}  // namespace fishtank
