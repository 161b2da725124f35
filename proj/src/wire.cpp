#include "fishtank/wire.hpp"

#include "fishtank/error.hpp"

namespace fishtank {



Json term_to_json(const Term& t) {
  switch (t.kind()) {
    case TermKind::Int:
      return {{"n", t.int_value()}};
    case TermKind::Str:
      return {{"s", t.str_value()}};
    case TermKind::Var:
      return {{"v", t.scope() == 0 ? t.name() : t.name() + "_" + std::to_string(t.scope())}};
    case TermKind::Compound:
      break;
  }
  Json args = Json::array();
  for (const Term& a : t.args()) args.push_back(term_to_json(a));
  return {{"c", t.name()}, {"a", std::move(args)}};
}

Term term_from_json(const Json& j) {
  auto bad = [&] { return Error(Errc::SyntaxError, "malformed term JSON: " + j.dump()); };
  if (!j.is_object() || j.empty()) throw bad();
  if (j.contains("n")) {
    if (!j["n"].is_number_integer()) throw bad();
    return Term::integer(j["n"].get<std::int64_t>());
  }
  if (j.contains("s")) {
    if (!j["s"].is_string()) throw bad();
    return Term::string(j["s"].get<std::string>());
  }
  if (j.contains("v")) {
    if (!j["v"].is_string()) throw bad();
    return Term::var(j["v"].get<std::string>());
  }
  if (j.contains("c")) {
    if (!j["c"].is_string()) throw bad();
    std::vector<Term> args;
    if (j.contains("a")) {
      if (!j["a"].is_array()) throw bad();
      for (const Json& a : j["a"]) args.push_back(term_from_json(a));
    }
    return Term::compound(j["c"].get<std::string>(), std::move(args));
  }
  throw bad();
}

Json result_to_json(const QueryResult& r) {
  Json out = Json::object();
  for (const auto& [name, value] : r.bindings) out[name] = term_to_json(value);
  return out;
}

QueryResult result_from_json(const Json& j) {
  QueryResult r;
  for (const auto& [name, value] : j.items()) r.bindings.emplace_back(name, term_from_json(value));
  return r;
}

}  // namespace fishtank
