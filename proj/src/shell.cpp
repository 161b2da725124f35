#include "fishtank/shell.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "fishtank/error.hpp"
#include "fishtank/lang.hpp"

namespace fishtank {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// A trailing all-digit word is the result limit.
std::pair<std::string_view, std::size_t> split_limit(std::string_view arg) {
  std::size_t sp = arg.find_last_of(" \t");
  if (sp == std::string_view::npos) return {arg, SIZE_MAX};
  std::string_view last = arg.substr(sp + 1);
  std::size_t limit = 0;
  auto [ptr, ec] = std::from_chars(last.data(), last.data() + last.size(), limit);
  if (ec != std::errc{} || ptr != last.data() + last.size()) return {arg, SIZE_MAX};
  if (limit == 0) throw Error(Errc::SyntaxError, "limit must be at least 1");
  return {trim(arg.substr(0, sp)), limit};
}

void print_error(std::ostream& err, const Error& e) {
  err << "error: " << e.what() << '\n';
}

}  // namespace

Shell::Shell(Database& db, std::ostream& out, std::ostream& err, std::filesystem::path base_dir)
    : db_(db), out_(out), err_(err), base_dir_(std::move(base_dir)) {}

int Shell::eval(std::string_view line) {
  line = trim(line);
  if (line.empty() || line.front() == '%') return kShellOk;
  std::size_t sp = line.find_first_of(" \t");
  std::string_view cmd = line.substr(0, sp);
  std::string_view arg = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp));
  try {
    dispatch(cmd, arg);
    return kShellOk;
  } catch (const Error& e) {
    print_error(err_, e);
    return e.code() == Errc::NotQuiescent ? kShellNotQuiescent : kShellError;
  }
}

int Shell::run(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (int rc = eval(line); rc != kShellOk) return rc;
  }
  return kShellOk;
}

void Shell::dispatch(std::string_view cmd, std::string_view arg) {
  if (cmd == "load") {
    std::filesystem::path p(arg);
    if (p.is_relative()) p = base_dir_ / p;
    LoadSummary s = db_.load_file(p.string());
    out_ << "loaded " << s.declarations << " declarations, " << s.static_clauses
         << " static clauses, " << s.axioms << " axioms\n";
  } else if (cmd == "insert") {
    db_.insert(db_.parse_axiom(arg));
    out_ << "queued\n";
  } else if (cmd == "remove") {
    db_.remove(db_.parse_axiom(arg));
    out_ << "queued\n";
  } else if (cmd == "query") {
    auto [goal, limit] = split_limit(arg);
    std::vector<QueryResult> rs = db_.query(goal, limit);
    for (const QueryResult& r : rs) {
      if (r.bindings.empty()) {
        out_ << "true\n";
        continue;
      }
      const char* sep = "";
      for (const auto& [name, value] : r.bindings) {
        out_ << sep << name << " = " << print(value);
        sep = ", ";
      }
      out_ << '\n';
    }
    out_ << "(" << rs.size() << (rs.size() == 1 ? " result)\n" : " results)\n");
  } else if (cmd == "quiesce") {
    std::uint64_t ticks = db_.quiesce();
    out_ << "quiesced after " << ticks << " ticks\n";
  } else if (cmd == "stats") {
    TankStats s = db_.tank().stats();
    out_ << "queue=" << s.queue_length << " ticks=" << s.ticks
         << " partition_accesses=" << s.io.partition_accesses
         << " generic_accesses=" << s.io.generic_accesses << " partitions=" << s.partitions
         << " dead_letters=" << s.dead_letters.size() << '\n';
    for (const DeadLetter& d : s.dead_letters) {
      out_ << "  dead " << d.delta << ' ' << print(d.axiom) << " : " << d.error << '\n';
    }
  } else if (cmd == "dump") {
    for (const auto& [a, n] : db_.tank().snapshot_counts()) {
      if (n != 0) out_ << n << ' ' << print(a) << '\n';
    }
  } else {
    throw Error(Errc::SyntaxError, "unknown command '" + std::string(cmd) + "'");
  }
}

}  // namespace fishtank
