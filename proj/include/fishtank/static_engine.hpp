#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fishtank/axiom.hpp"
#include "fishtank/lang.hpp"
#include "fishtank/term.hpp"

namespace fishtank {

struct SolveBudget {
  std::uint64_t max_steps = 1'000'000;
};

/// Step accounting shared by every resolver working on one request.
class StepCounter {
 public:
  explicit StepCounter(SolveBudget budget) : max_(budget.max_steps) {}
  /// Throws Error(BudgetExhausted) once the limit is passed.
  void step();
  std::uint64_t used() const noexcept { return used_; }

 private:
  std::uint64_t max_;
  std::uint64_t used_ = 0;
};

/// Static clause database S. Immutable once shared; a new program load
/// builds a fresh instance and swaps it in.
class StaticDB {
 public:
  /// Throws NamespaceClash when `c` defines a builtin.
  void add(StaticClause c);

  std::span<const StaticClause> clauses_for(std::string_view name, std::size_t arity) const;
  const std::vector<StaticClause>& clauses() const noexcept { return all_; }

 private:
  std::vector<StaticClause> all_;
  std::map<std::string, std::vector<StaticClause>, std::less<>> by_pred_;
};

bool is_builtin(std::string_view name, std::size_t arity);

/// Source text of the prelude (member/2, append/3, prod/2 declaration).
std::string_view prelude_source();

/// Parses the prelude into `decls` and returns its clauses.
std::vector<StaticClause> load_prelude(Declarations& decls);

/// Called once per solution with the live substitution. Return false to
/// stop the search.
using SolutionFn = std::function<bool(const Substitution&)>;

/// Depth-first SLD resolution over S with negation as failure. Clauses are
/// tried in load order, conjunctions left to right.
class Resolver {
 public:
  Resolver(const StaticDB& db, StepCounter& steps, int depth = 0)
      : db_(db), steps_(steps), depth_(depth) {}

  /// Enumerates solutions of `goal` extending `s`. `s` is restored to its
  /// entry state before returning. Returns false if `on_solution` stopped
  /// the search.
  bool solve(const Term& goal, Substitution& s, const SolutionFn& on_solution);

 private:
  const StaticDB& db_;
  StepCounter& steps_;
  int depth_;
};

/// One-shot helpers used by tests and the CLI.
std::vector<Term> solve_all(const Goal& goal, const Term& answer, const StaticDB& db,
                            SolveBudget budget = {}, std::size_t limit = SIZE_MAX);
bool solve_once(const Goal& goal, const StaticDB& db, SolveBudget budget = {});

}  // namespace fishtank
