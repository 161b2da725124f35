#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fishtank/term.hpp"

namespace fishtank {

// Reserved functors of the internal goal/axiom representation. None of them
// is a valid identifier in the surface syntax, so they cannot collide with
// user declarations (except `true`, which is reserved by the parser).
namespace functor {
inline constexpr std::string_view kTrue = "true";
inline constexpr std::string_view kAnd = ",";
inline constexpr std::string_view kNot = "\\+";
inline constexpr std::string_view kStatic = "$s";
inline constexpr std::string_view kRule = "~>";
inline constexpr std::string_view kClause = ":-";
inline constexpr std::string_view kEq = "=";
}  // namespace functor

/// Static goal: atom, conjunction, negation, or the trivial goal.
class Goal {
 public:
  enum class Kind { True, Atom, And, Not };

  explicit Goal(Term t) : term_(std::move(t)) {}
  static Goal truth();
  static Goal conj(const Goal& lhs, const Goal& rhs);
  static Goal negation(const Goal& inner);

  Kind kind() const;
  const Term& term() const noexcept { return term_; }
  Goal lhs() const { return Goal(term_.arg(0)); }
  Goal rhs() const { return Goal(term_.arg(1)); }
  Goal inner() const { return Goal(term_.arg(0)); }

  friend bool operator==(const Goal&, const Goal&) = default;

 private:
  Term term_;
};

/// Dynamic goal: dynamic atom, conjunction, negation, or an embedded static goal.
class DGoal {
 public:
  enum class Kind { Atom, And, Not, Static };

  explicit DGoal(Term t) : term_(std::move(t)) {}
  static DGoal conj(const DGoal& lhs, const DGoal& rhs);
  static DGoal negation(const DGoal& inner);
  static DGoal embed(const Goal& g);

  Kind kind() const;
  const Term& term() const noexcept { return term_; }
  DGoal lhs() const { return DGoal(term_.arg(0)); }
  DGoal rhs() const { return DGoal(term_.arg(1)); }
  DGoal inner() const { return DGoal(term_.arg(0)); }
  Goal static_goal() const { return Goal(term_.arg(0)); }

  friend bool operator==(const DGoal&, const DGoal&) = default;

 private:
  Term term_;
};

/// A fact, a guarded rule `trigger { guard } ~> consequence`, or a dynamic
/// clause `head :- body`.
class Axiom {
 public:
  enum class Kind { Fact, Rule, Clause };

  explicit Axiom(Term t) : term_(std::move(t)) {}
  static Axiom fact(Term atom) { return Axiom(std::move(atom)); }
  static Axiom rule(const Term& trigger, const Goal& guard, const Axiom& consequence);
  static Axiom clause(const Term& head, const DGoal& body);

  Kind kind() const;
  bool is_fact() const { return kind() == Kind::Fact; }
  bool is_rule() const { return kind() == Kind::Rule; }
  bool is_clause() const { return kind() == Kind::Clause; }

  const Term& term() const noexcept { return term_; }

  // Rule parts.
  const Term& trigger() const { return term_.arg(0); }
  Goal guard() const { return Goal(term_.arg(1)); }
  Axiom consequence() const { return Axiom(term_.arg(2)); }

  // Clause parts.
  const Term& head() const { return term_.arg(0); }
  DGoal body() const { return DGoal(term_.arg(1)); }

  /// The atom the axiom is indexed and matched by: the fact itself, the
  /// rule's trigger, or the clause's head.
  const Term& key_atom() const;

  friend bool operator==(const Axiom&, const Axiom&) = default;
  friend std::strong_ordering operator<=>(const Axiom& a, const Axiom& b) {
    return a.term_ <=> b.term_;
  }

 private:
  Term term_;
};

struct AxiomHash {
  std::size_t operator()(const Axiom& a) const noexcept { return a.term().hash(); }
};

/// `head :- body` over static predicates.
struct StaticClause {
  Term head;
  Goal body;

  friend bool operator==(const StaticClause&, const StaticClause&) = default;
};

/// "name/arity" of an atom; the grouping key inside partitions.
std::string predicate_key(const Term& atom);
std::string predicate_key(std::string_view name, std::size_t arity);

/// Subject of a concrete axiom: canonical key of the first argument of the
/// key atom when it is ground. Absent for generic axioms.
std::optional<SubjectKey> subject_of(const Axiom& a);

Axiom rename_apart(const Axiom& a, std::int64_t scope);

}  // namespace fishtank
