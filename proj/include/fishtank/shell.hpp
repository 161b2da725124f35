#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "fishtank/session.hpp"

namespace fishtank {

/// Exit statuses shared by the shell and the command-line tool.
enum ShellStatus : int { kShellOk = 0, kShellError = 1, kShellNotQuiescent = 2 };

/// Line-oriented command interpreter over a Database:
///   load <path> | insert <axiom> | remove <axiom> | query <goal> [limit]
///   quiesce | stats | dump
/// Blank lines and lines starting with '%' are ignored.
class Shell {
 public:
  Shell(Database& db, std::ostream& out, std::ostream& err,
        std::filesystem::path base_dir = std::filesystem::current_path());

  /// Runs one command line and returns its status. Errors go to `err`.
  int eval(std::string_view line);

  /// Runs commands until end of input, stopping at the first failure.
  int run(std::istream& in);

 private:
  void dispatch(std::string_view cmd, std::string_view arg);

  Database& db_;
  std::ostream& out_;
  std::ostream& err_;
  std::filesystem::path base_dir_;
};

}  // namespace fishtank
