#include "fishtank/query.hpp"

#include <functional>

#include "fishtank/error.hpp"

namespace fishtank {

const Term* QueryResult::get(std::string_view name) const {
  for (const auto& [n, v] : bindings) {
    if (n == name) return &v;
  }
  return nullptr;
}

std::vector<Term> answer_variables(const Term& goal) {
  std::vector<Term> out;
  for (const Term& v : variables_of(goal)) {
    if (!v.name().starts_with("_")) out.push_back(v);
  }
  return out;
}

namespace {

constexpr int kMaxDepth = 2000;

class Evaluator {
 public:
  Evaluator(const Tank& tank, SolveBudget budget)
      : tank_(tank), db_(tank.static_db()), steps_(budget) {}

  // Calls `k` once per solution; returns false when `k` stopped the search.
  // `s` is restored before returning.
  bool eval(const DGoal& g, Substitution& s, int depth, const std::function<bool()>& k) {
    if (depth > kMaxDepth) throw Error(Errc::BudgetExhausted, "query recursion too deep");
    switch (g.kind()) {
      case DGoal::Kind::Static:
        return Resolver(*db_, steps_).solve(g.static_goal().term(), s,
                                            [&](const Substitution&) { return k(); });
      case DGoal::Kind::And:
        return eval(g.lhs(), s, depth, [&] { return eval(g.rhs(), s, depth, k); });
      case DGoal::Kind::Not: {
        bool found = false;
        eval(g.inner(), s, depth + 1, [&] {
          found = true;
          return false;
        });
        return found ? true : k();
      }
      case DGoal::Kind::Atom:
        return atom(g.term(), s, depth, k);
    }
    return true;
  }

 private:
  bool atom(const Term& a, Substitution& s, int depth, const std::function<bool()>& k) {
    steps_.step();
    const std::string pk = predicate_key(a);
    const PartitionStore& store = tank_.store();

    std::vector<Entry> candidates;
    Term first = a.arity() > 0 ? apply(s, a.arg(0)) : Term::atom("");
    if (a.arity() > 0 && first.ground()) {
      PartitionPtr p = store.read_partition(canonical_encode(first));
      if (const Group* g = p->group(pk)) {
        candidates.assign(g->entries().begin(), g->entries().end());
      }
    } else if (store.has_concrete(pk)) {
      throw Error(Errc::UnindexedQuery,
                  pk + " has concrete clauses; its first argument must be ground");
    }
    GroupPtr generic = store.read_generic(pk);
    candidates.insert(candidates.end(), generic->entries().begin(), generic->entries().end());

    for (const Entry& e : candidates) {
      if (e.mult <= 0 || e.axiom.is_rule()) continue;
      Axiom renamed = rename_apart(e.axiom, fresh_scope());
      std::size_t mark = s.mark();
      if (!unify(renamed.key_atom(), a, s)) continue;
      bool go = renamed.is_clause() ? eval(renamed.body(), s, depth + 1, k) : k();
      s.undo(mark);
      if (!go) return false;
    }
    return true;
  }

  const Tank& tank_;
  std::shared_ptr<const StaticDB> db_;
  StepCounter steps_;
};

}  // namespace

std::vector<QueryResult> query(const DGoal& goal, const Tank& tank, std::size_t limit,
                               SolveBudget budget) {
  std::vector<QueryResult> out;
  if (limit == 0) return out;
  std::vector<Term> vars = answer_variables(goal.term());
  Evaluator ev(tank, budget);
  Substitution s;
  ev.eval(goal, s, 0, [&] {
    std::vector<Term> values;
    for (const Term& v : vars) values.push_back(apply(s, v));
    Term tuple = normalize_variables(Term::compound("", values));
    QueryResult r;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      r.bindings.emplace_back(vars[i].name(), tuple.arg(i));
    }
    out.push_back(std::move(r));
    return out.size() < limit;
  });
  return out;
}

std::size_t query_count(const DGoal& goal, const Tank& tank, std::size_t limit,
                        SolveBudget budget) {
  return query(goal, tank, limit, budget).size();
}

}  // namespace fishtank
