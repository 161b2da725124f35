#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fishtank/axiom.hpp"
#include "fishtank/term.hpp"

namespace fishtank {

enum class PredKind { Fact, Static, Dynamic };

std::string_view pred_kind_name(PredKind k);

struct Declaration {
  PredKind kind;
  std::string name;
  std::size_t arity;

  friend bool operator==(const Declaration&, const Declaration&) = default;
};

/// Symbol table for the three disjoint namespaces (fact-names, static
/// predicates, dynamic predicates). A name belongs to at most one kind;
/// redeclaring an existing (kind, name, arity) is a no-op.
class Declarations {
 public:
  /// Starts with the engine builtins (`=`/2, charCodes/2, parse/3) declared static.
  Declarations();

  void declare(const Declaration& d, int line = 0, int column = 0);

  std::optional<PredKind> kind_of(std::string_view name, std::size_t arity) const;
  bool has_name(std::string_view name) const;
  std::vector<Declaration> all() const;

 private:
  struct Entry {
    PredKind kind;
    std::vector<std::size_t> arities;
  };
  std::map<std::string, Entry, std::less<>> names_;
};

using ProgramItem = std::variant<Declaration, Axiom, StaticClause>;

/// Parses a `.clg` program. Declarations encountered are added to `decls`
/// as they are read and must precede use.
std::vector<ProgramItem> parse_program(std::string_view text, Declarations& decls);

Term parse_term(std::string_view text);
Goal parse_goal(std::string_view text, const Declarations& decls);
DGoal parse_dgoal(std::string_view text, const Declarations& decls);
/// A single axiom; the terminating `.` is optional.
Axiom parse_axiom(std::string_view text, const Declarations& decls);

/// Checks an axiom built programmatically against the same rules the
/// parser enforces (kinds, arities, guard staticity, bound consequence
/// variables).
void validate(const Axiom& a, const Declarations& decls);

std::string print(const Term& t);
std::string print(const Goal& g);
std::string print(const DGoal& g);
std::string print(const Axiom& a);
std::string print(const StaticClause& c);
std::string print(const Declaration& d);

}  // namespace fishtank
