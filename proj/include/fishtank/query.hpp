#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fishtank/axiom.hpp"
#include "fishtank/static_engine.hpp"
#include "fishtank/tank.hpp"

namespace fishtank {

/// Bindings of the query's named variables (those not starting with `_`),
/// in first-occurrence order. Unbound parts are variable-normalized.
struct QueryResult {
  std::vector<std::pair<std::string, Term>> bindings;

  const Term* get(std::string_view name) const;
  friend bool operator==(const QueryResult&, const QueryResult&) = default;
};

/// Evaluates a dynamic goal against the current store. Dynamic atoms (and
/// fact atoms) with a ground first argument read exactly one partition plus
/// the generic section; a non-ground first argument is allowed only when
/// the predicate has no concrete entries (else UnindexedQuery). Entries
/// count when their multiplicity is positive, once each.
std::vector<QueryResult> query(const DGoal& goal, const Tank& tank, std::size_t limit = SIZE_MAX,
                               SolveBudget budget = {});

std::size_t query_count(const DGoal& goal, const Tank& tank, std::size_t limit = SIZE_MAX,
                        SolveBudget budget = {});

/// Named variables of a goal in first-occurrence order.
std::vector<Term> answer_variables(const Term& goal);

}  // namespace fishtank
