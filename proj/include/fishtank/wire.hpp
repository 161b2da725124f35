#pragma once

#include "json.hpp"

#include "fishtank/query.hpp"
#include "fishtank/term.hpp"

namespace fishtank {

using Json = nlohmann::ordered_json;

/// Term <-> JSON: {"c": name, "a": [...]}, {"n": int}, {"s": string},
/// {"v": name}. Variables with a non-zero scope serialize as `Name_scope`.
Json term_to_json(const Term& t);

/// Throws Error(SyntaxError) on malformed input.
Term term_from_json(const Json& j);

/// {"Var": TermJson, ...} with keys in binding order.
Json result_to_json(const QueryResult& r);
QueryResult result_from_json(const Json& j);

}  // namespace fishtank
