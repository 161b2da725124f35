#include "fishtank/static_engine.hpp"

#include <utility>

#include "fishtank/error.hpp"

namespace fishtank {

void StepCounter::step() {
  if (++used_ > max_) {
    throw Error(Errc::BudgetExhausted,
                "goal evaluation exceeded " + std::to_string(max_) + " steps");
  }
}

bool is_builtin(std::string_view name, std::size_t arity) {
  return (name == functor::kEq && arity == 2) || (name == "charCodes" && arity == 2) ||
         (name == "parse" && arity == 3);
}

void StaticDB::add(StaticClause c) {
  if (is_builtin(c.head.name(), c.head.arity())) {
    throw Error(Errc::NamespaceClash, predicate_key(c.head) + " is a builtin");
  }
  by_pred_[predicate_key(c.head)].push_back(c);
  all_.push_back(std::move(c));
}

std::span<const StaticClause> StaticDB::clauses_for(std::string_view name,
                                                    std::size_t arity) const {
  auto it = by_pred_.find(predicate_key(name, arity));
  if (it == by_pred_.end()) return {};
  return it->second;
}

std::vector<StaticClause> load_prelude(Declarations& decls) {
  std::vector<StaticClause> out;
  for (ProgramItem& item : parse_program(prelude_source(), decls)) {
    if (auto* c = std::get_if<StaticClause>(&item)) out.push_back(std::move(*c));
  }
  return out;
}

namespace {

// Persistent goal list. Destruction is iterative so that long continuations
// cannot overflow the native stack.
struct Cont {
  Term goal;
  std::shared_ptr<Cont> next;

  Cont(Term g, std::shared_ptr<Cont> n) : goal(std::move(g)), next(std::move(n)) {}
  ~Cont() {
    std::shared_ptr<Cont> cur = std::move(next);
    while (cur && cur.use_count() == 1) {
      std::shared_ptr<Cont> after = std::move(cur->next);
      cur = std::move(after);
    }
  }
};
using ContPtr = std::shared_ptr<Cont>;

ContPtr push(Term goal, ContPtr next) {
  return std::make_shared<Cont>(std::move(goal), std::move(next));
}

[[noreturn]] void type_error(const std::string& msg) { throw Error(Errc::BuiltinTypeError, msg); }

void append_utf8(std::string& out, std::int64_t cp) {
  if (cp < 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    type_error("charCodes/2: " + std::to_string(cp) + " is not a code point");
  }
  auto c = static_cast<std::uint32_t>(cp);
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

std::vector<std::int64_t> decode_utf8(const std::string& s) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < s.size();) {
    auto b = static_cast<unsigned char>(s[i]);
    int len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3 : (b >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) type_error("charCodes/2: invalid UTF-8");
    std::uint32_t cp = len == 1 ? b : len == 2 ? (b & 0x1F) : len == 3 ? (b & 0x0F) : (b & 0x07);
    for (int k = 1; k < len; ++k) {
      auto cb = static_cast<unsigned char>(s[i + k]);
      if ((cb >> 6) != 0x2) type_error("charCodes/2: invalid UTF-8");
      cp = (cp << 6) | (cb & 0x3F);
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

Term fresh_var(std::string_view name) { return Term::var(std::string(name), fresh_scope()); }

Term term_of(std::string_view name, std::vector<Term> args) {
  return Term::compound(std::string(name), std::move(args));
}

bool char_codes(const Term& str, const Term& codes, Substitution& s) {
  Term sw = walk(str, s);
  if (sw.is_str()) {
    std::vector<Term> items;
    for (std::int64_t cp : decode_utf8(sw.str_value())) items.push_back(Term::integer(cp));
    return unify(codes, make_list(items), s);
  }
  if (!sw.is_var()) type_error("charCodes/2: first argument must be a string");
  Term list = apply(s, codes);
  auto items = list_items(list);
  if (!items || !list.ground()) {
    type_error("charCodes/2: needs a string or a ground list of codes");
  }
  std::string text;
  for (const Term& c : *items) {
    if (!c.is_int()) type_error("charCodes/2: list element is not an integer");
    append_utf8(text, c.int_value());
  }
  return unify(sw, Term::string(std::move(text)), s);
}

// First-argument pre-filter: true when the clause head cannot match.
bool clash(const Term& head, const Term& goal, const Substitution& s) {
  if (head.arity() == 0) return false;
  const Term& h = head.arg(0);
  if (h.is_var()) return false;
  Term g = walk(goal.arg(0), s);
  if (g.is_var()) return false;
  if (g.kind() != h.kind()) return true;
  switch (g.kind()) {
    case TermKind::Int: return g.int_value() != h.int_value();
    case TermKind::Str: return g.str_value() != h.str_value();
    case TermKind::Compound: return g.arity() != h.arity() || g.name() != h.name();
    case TermKind::Var: return false;
  }
  return false;
}

constexpr int kMaxNegationDepth = 256;

}  // namespace

bool Resolver::solve(const Term& goal, Substitution& s, const SolutionFn& on_solution) {
  struct Choice {
    Term goal;
    std::size_t next_clause;
    ContPtr cont;
    std::size_t mark;
  };
  const std::size_t base = s.mark();
  struct Restore {
    Substitution& s;
    std::size_t mark;
    ~Restore() { s.undo(mark); }
  } restore{s, base};
  std::vector<Choice> choices;
  ContPtr cont = push(goal, nullptr);

  // Resolves `g` against clauses starting at `from`; on success leaves a
  // choicepoint for the remaining ones and extends the continuation.
  auto try_clauses = [&](const Term& g, std::size_t from, ContPtr rest) -> bool {
    std::span<const StaticClause> cs = db_.clauses_for(g.name(), g.arity());
    std::size_t mark = s.mark();
    for (std::size_t i = from; i < cs.size(); ++i) {
      if (clash(cs[i].head, g, s)) continue;
      std::int64_t scope = fresh_scope();
      if (!unify(rename(cs[i].head, scope), g, s)) continue;
      if (i + 1 < cs.size()) choices.push_back({g, i + 1, rest, mark});
      Goal body = cs[i].body;
      cont = body.kind() == Goal::Kind::True ? rest : push(rename(body.term(), scope), rest);
      return true;
    }
    return false;
  };

  auto backtrack = [&]() -> bool {
    while (!choices.empty()) {
      Choice c = std::move(choices.back());
      choices.pop_back();
      s.undo(c.mark);
      if (try_clauses(c.goal, c.next_clause, c.cont)) return true;
    }
    return false;
  };

  while (true) {
    if (!cont) {
      if (!on_solution(s)) return false;
      if (!backtrack()) break;
      continue;
    }
    steps_.step();
    Term g = walk(cont->goal, s);
    ContPtr rest = cont->next;
    bool ok = true;

    if (!g.is_compound()) {
      type_error("goal is not callable: " + print(apply(s, g)));
    } else if (g.is(functor::kTrue, 0)) {
      cont = rest;
    } else if (g.is(functor::kAnd, 2)) {
      cont = push(g.arg(0), push(g.arg(1), rest));
    } else if (g.is(functor::kNot, 1)) {
      if (depth_ >= kMaxNegationDepth) {
        throw Error(Errc::BudgetExhausted, "negation nested too deeply");
      }
      Resolver inner(db_, steps_, depth_ + 1);
      bool found = !inner.solve(g.arg(0), s, [](const Substitution&) { return false; });
      ok = !found;
      cont = rest;
    } else if (g.is(functor::kEq, 2)) {
      ok = unify(g.arg(0), g.arg(1), s);
      cont = rest;
    } else if (g.is("charCodes", 2)) {
      ok = char_codes(g.arg(0), g.arg(1), s);
      cont = rest;
    } else if (g.is("parse", 3)) {
      Term sym = walk(g.arg(0), s);
      const Term& in = g.arg(1);
      const Term& out = g.arg(2);
      if (!apply(s, in).ground()) type_error("parse/3: input must be a ground code list");
      if (sym.is("eps", 0)) {
        ok = unify(in, out, s);
        cont = rest;
      } else if (sym.is("seq", 2)) {
        Term mid = fresh_var("R");
        cont = push(term_of("parse", {sym.arg(0), in, mid}),
                    push(term_of("parse", {sym.arg(1), mid, out}), rest));
      } else if (sym.is("t", 1)) {
        ok = unify(in, make_list(std::vector<Term>{sym.arg(0)}, out), s);
        cont = rest;
      } else if (sym.is("cond", 2)) {
        ok = unify(in, make_list(std::vector<Term>{sym.arg(0)}, out), s);
        cont = push(sym.arg(1), rest);
      } else if (sym.is("nt", 1)) {
        Term body = fresh_var("B");
        cont = push(term_of("prod", {sym.arg(0), body}),
                    push(term_of("parse", {body, in, out}), rest));
      } else if (sym.is("call", 1)) {
        cont = push(sym.arg(0), push(term_of(functor::kEq, {in, out}), rest));
      } else if (sym.is_var()) {
        type_error("parse/3: grammar symbol is unbound");
      } else {
        type_error("parse/3: unknown grammar form " + print(apply(s, sym)));
      }
    } else {
      ok = try_clauses(g, 0, rest);
    }

    if (!ok && !backtrack()) break;
  }
  return true;
}

std::vector<Term> solve_all(const Goal& goal, const Term& answer, const StaticDB& db,
                            SolveBudget budget, std::size_t limit) {
  std::vector<Term> out;
  if (limit == 0) return out;
  StepCounter steps(budget);
  Substitution s;
  Resolver(db, steps).solve(goal.term(), s, [&](const Substitution& sol) {
    out.push_back(apply(sol, answer));
    return out.size() < limit;
  });
  return out;
}

bool solve_once(const Goal& goal, const StaticDB& db, SolveBudget budget) {
  StepCounter steps(budget);
  Substitution s;
  return !Resolver(db, steps).solve(goal.term(), s, [](const Substitution&) { return false; });
}

}  // namespace fishtank
