#include "fishtank/axiom.hpp"

namespace fishtank {

Goal Goal::truth() { return Goal(Term::atom(std::string(functor::kTrue))); }

Goal Goal::conj(const Goal& lhs, const Goal& rhs) {
  return Goal(Term::compound(std::string(functor::kAnd), {lhs.term(), rhs.term()}));
}

Goal Goal::negation(const Goal& inner) {
  return Goal(Term::compound(std::string(functor::kNot), {inner.term()}));
}

Goal::Kind Goal::kind() const {
  if (term_.is(functor::kTrue, 0)) return Kind::True;
  if (term_.is(functor::kAnd, 2)) return Kind::And;
  if (term_.is(functor::kNot, 1)) return Kind::Not;
  return Kind::Atom;
}

DGoal DGoal::conj(const DGoal& lhs, const DGoal& rhs) {
  return DGoal(Term::compound(std::string(functor::kAnd), {lhs.term(), rhs.term()}));
}

DGoal DGoal::negation(const DGoal& inner) {
  return DGoal(Term::compound(std::string(functor::kNot), {inner.term()}));
}

DGoal DGoal::embed(const Goal& g) {
  return DGoal(Term::compound(std::string(functor::kStatic), {g.term()}));
}

DGoal::Kind DGoal::kind() const {
  if (term_.is(functor::kAnd, 2)) return Kind::And;
  if (term_.is(functor::kNot, 1)) return Kind::Not;
  if (term_.is(functor::kStatic, 1)) return Kind::Static;
  return Kind::Atom;
}

Axiom Axiom::rule(const Term& trigger, const Goal& guard, const Axiom& consequence) {
  return Axiom(
      Term::compound(std::string(functor::kRule), {trigger, guard.term(), consequence.term()}));
}

Axiom Axiom::clause(const Term& head, const DGoal& body) {
  return Axiom(Term::compound(std::string(functor::kClause), {head, body.term()}));
}

Axiom::Kind Axiom::kind() const {
  if (term_.is(functor::kRule, 3)) return Kind::Rule;
  if (term_.is(functor::kClause, 2)) return Kind::Clause;
  return Kind::Fact;
}

const Term& Axiom::key_atom() const {
  switch (kind()) {
    case Kind::Rule: return trigger();
    case Kind::Clause: return head();
    case Kind::Fact: break;
  }
  return term_;
}

std::string predicate_key(std::string_view name, std::size_t arity) {
  std::string key(name);
  key.push_back('/');
  key += std::to_string(arity);
  return key;
}

std::string predicate_key(const Term& atom) { return predicate_key(atom.name(), atom.arity()); }

std::optional<SubjectKey> subject_of(const Axiom& a) {
  const Term& atom = a.key_atom();
  if (atom.arity() == 0 || !atom.arg(0).ground()) return std::nullopt;
  return canonical_encode(atom.arg(0));
}

Axiom rename_apart(const Axiom& a, std::int64_t scope) { return Axiom(rename(a.term(), scope)); }

}  // namespace fishtank
