#include "fishtank/lang.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "fishtank/error.hpp"

namespace fishtank {

std::string_view pred_kind_name(PredKind k) {
  switch (k) {
    case PredKind::Fact: return "fact";
    case PredKind::Static: return "static";
    case PredKind::Dynamic: return "dynamic";
  }
  return "?";
}

// --- declarations --------------------------------------------------------

Declarations::Declarations() {
  declare({PredKind::Static, std::string(functor::kEq), 2});
  declare({PredKind::Static, "charCodes", 2});
  declare({PredKind::Static, "parse", 3});
}

void Declarations::declare(const Declaration& d, int line, int column) {
  if (d.name == functor::kTrue) {
    throw Error(Errc::NamespaceClash, "'true' is reserved", line, column);
  }
  auto it = names_.find(d.name);
  if (it == names_.end()) {
    names_.emplace(d.name, Entry{d.kind, {d.arity}});
    return;
  }
  Entry& e = it->second;
  if (e.kind != d.kind) {
    throw Error(Errc::NamespaceClash,
                d.name + " is already declared " + std::string(pred_kind_name(e.kind)), line,
                column);
  }
  if (std::ranges::find(e.arities, d.arity) == e.arities.end()) e.arities.push_back(d.arity);
}

std::optional<PredKind> Declarations::kind_of(std::string_view name, std::size_t arity) const {
  auto it = names_.find(name);
  if (it == names_.end()) return std::nullopt;
  if (std::ranges::find(it->second.arities, arity) == it->second.arities.end()) return std::nullopt;
  return it->second.kind;
}

bool Declarations::has_name(std::string_view name) const { return names_.contains(name); }

std::vector<Declaration> Declarations::all() const {
  std::vector<Declaration> out;
  for (const auto& [name, e] : names_) {
    for (std::size_t a : e.arities) out.push_back({e.kind, name, a});
  }
  return out;
}

// --- validation ----------------------------------------------------------

namespace {

using PositionFn = std::function<std::pair<int, int>(const Term&)>;

class Validator {
 public:
  Validator(const Declarations& decls, PositionFn pos) : decls_(decls), pos_(std::move(pos)) {}

  void axiom(const Axiom& a) {
    switch (a.kind()) {
      case Axiom::Kind::Fact:
        fact_atom(a.term());
        return;
      case Axiom::Kind::Rule: {
        std::unordered_set<Term, TermHash> bound;
        rule(a, bound);
        return;
      }
      case Axiom::Kind::Clause:
        clause(a);
        return;
    }
  }

  void static_clause(const StaticClause& c) {
    if (resolve(c.head) != PredKind::Static) {
      fail(Errc::NamespaceClash, c.head.name() + " is not a static predicate", c.head);
    }
    goal(c.body);
  }

  void goal(const Goal& g) {
    switch (g.kind()) {
      case Goal::Kind::True:
        return;
      case Goal::Kind::And:
        goal(g.lhs());
        goal(g.rhs());
        return;
      case Goal::Kind::Not:
        goal(g.inner());
        return;
      case Goal::Kind::Atom:
        callable(g.term());
        if (resolve(g.term()) != PredKind::Static) {
          fail(Errc::NonStaticGuard, predicate_key(g.term()) + " is not a static predicate",
               g.term());
        }
        return;
    }
  }

  void dgoal(const DGoal& g) {
    switch (g.kind()) {
      case DGoal::Kind::And:
        dgoal(g.lhs());
        dgoal(g.rhs());
        return;
      case DGoal::Kind::Not:
        dgoal(g.inner());
        return;
      case DGoal::Kind::Static:
        goal(g.static_goal());
        return;
      case DGoal::Kind::Atom:
        callable(g.term());
        if (resolve(g.term()) == PredKind::Static) {
          fail(Errc::NamespaceClash,
               predicate_key(g.term()) + " is static and must be embedded as a static goal",
               g.term());
        }
        return;
    }
  }

 private:
  void rule(const Axiom& r, std::unordered_set<Term, TermHash>& bound) {
    fact_atom(r.trigger());
    goal(r.guard());
    std::vector<Term> added;
    for (const Term& v : variables_of(r.trigger())) {
      if (bound.insert(v).second) added.push_back(v);
    }
    for (const Term& v : variables_of(r.guard().term())) {
      if (bound.insert(v).second) added.push_back(v);
    }
    Axiom c = r.consequence();
    switch (c.kind()) {
      case Axiom::Kind::Fact:
        fact_atom(c.term());
        for (const Term& v : variables_of(c.term())) {
          if (!bound.contains(v)) {
            fail(Errc::UnboundConsequenceVariable,
                 "variable " + v.name() + " is not bound by the trigger or guard", v);
          }
        }
        break;
      case Axiom::Kind::Rule:
        rule(c, bound);
        break;
      case Axiom::Kind::Clause:
        clause(c);
        break;
    }
    for (const Term& v : added) bound.erase(v);
  }

  void clause(const Axiom& c) {
    callable(c.head());
    if (resolve(c.head()) != PredKind::Dynamic) {
      fail(Errc::NamespaceClash, predicate_key(c.head()) + " is not a dynamic predicate",
           c.head());
    }
    dgoal(c.body());
  }

  void fact_atom(const Term& atom) {
    callable(atom);
    if (resolve(atom) != PredKind::Fact) {
      fail(Errc::NamespaceClash, predicate_key(atom) + " is not a fact-name", atom);
    }
  }

  void callable(const Term& atom) {
    if (!atom.is_compound()) fail(Errc::SyntaxError, "expected an atom", atom);
  }

  PredKind resolve(const Term& atom) {
    if (atom.is(functor::kTrue, 0)) return PredKind::Static;
    if (auto k = decls_.kind_of(atom.name(), atom.arity())) return *k;
    if (decls_.has_name(atom.name())) {
      fail(Errc::ArityMismatch, atom.name() + " is not declared with arity " +
                                    std::to_string(atom.arity()),
           atom);
    }
    fail(Errc::UndeclaredSymbol, predicate_key(atom) + " is not declared", atom);
  }

  [[noreturn]] void fail(Errc code, const std::string& message, const Term& at) {
    auto [line, column] = pos_ ? pos_(at) : std::pair<int, int>{0, 0};
    throw Error(code, message, line, column);
  }

  const Declarations& decls_;
  PositionFn pos_;
};

// --- lexer ---------------------------------------------------------------

enum class Tok { Ident, Var, Int, Str, Quoted, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::int64_t value = 0;
  int line = 1;
  int column = 1;
};

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_lower(c) || is_upper(c) || is_digit(c); }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto read_escaped = [&](char quote, int tl, int tc) {
    std::string text;
    advance(1);
    while (true) {
      if (i >= src.size()) throw Error(Errc::SyntaxError, "unterminated literal", tl, tc);
      char c = src[i];
      if (c == quote) {
        advance(1);
        return text;
      }
      if (c == '\\') {
        if (i + 1 >= src.size()) throw Error(Errc::SyntaxError, "unterminated escape", line, col);
        char e = src[i + 1];
        switch (e) {
          case '"': text.push_back('"'); break;
          case '\'': text.push_back('\''); break;
          case '\\': text.push_back('\\'); break;
          case 'n': text.push_back('\n'); break;
          case 't': text.push_back('\t'); break;
          default:
            throw Error(Errc::SyntaxError, std::string("unknown escape \\") + e, line, col);
        }
        if ((e == '\'' && quote != '\'') || (e == '"' && quote != '"')) {
          throw Error(Errc::SyntaxError, std::string("unknown escape \\") + e, line, col);
        }
        advance(2);
        continue;
      }
      text.push_back(c);
      advance(1);
    }
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int tl = line;
    int tc = col;
    if (is_lower(c) || is_upper(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      std::string text(src.substr(i, j - i));
      advance(j - i);
      out.push_back({is_lower(c) ? Tok::Ident : Tok::Var, std::move(text), 0, tl, tc});
      continue;
    }
    if (is_digit(c) || (c == '-' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      std::size_t j = i + 1;
      while (j < src.size() && is_digit(src[j])) ++j;
      std::string_view digits = src.substr(i, j - i);
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw Error(Errc::SyntaxError, "integer out of range", tl, tc);
      }
      advance(j - i);
      out.push_back({Tok::Int, std::string(digits), v, tl, tc});
      continue;
    }
    if (c == '"') {
      std::string text = read_escaped('"', tl, tc);
      out.push_back({Tok::Str, std::move(text), 0, tl, tc});
      continue;
    }
    if (c == '\'') {
      std::string text = read_escaped('\'', tl, tc);
      out.push_back({Tok::Quoted, std::move(text), 0, tl, tc});
      continue;
    }
    std::string_view rest = src.substr(i);
    std::string_view punct;
    for (std::string_view p : {"~>", ":-", "\\+"}) {
      if (rest.starts_with(p)) {
        punct = p;
        break;
      }
    }
    if (punct.empty() && std::string_view("()[]{},|/.=").find(c) != std::string_view::npos) {
      punct = rest.substr(0, 1);
    }
    if (punct.empty()) {
      throw Error(Errc::SyntaxError, std::string("unexpected character '") + c + "'", tl, tc);
    }
    out.push_back({Tok::Punct, std::string(punct), 0, tl, tc});
    advance(punct.size());
  }
  out.push_back({Tok::End, "", 0, line, col});
  return out;
}

// --- parser --------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, const Declarations* decls) : toks_(lex(text)), decls_(decls) {}

  bool at_end() const { return peek().kind == Tok::End; }

  void finish(bool allow_dot) {
    if (allow_dot && is_punct(".")) ++pos_;
    if (!at_end()) unexpected("end of input");
  }

  Term term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var: {
        ++pos_;
        std::string name = t.text;
        if (name == "_") name = "_G" + std::to_string(++anon_);
        return remember(Term::var(std::move(name)), t);
      }
      case Tok::Int:
        ++pos_;
        return remember(Term::integer(t.value), t);
      case Tok::Str:
        ++pos_;
        return remember(Term::string(t.text), t);
      case Tok::Ident:
      case Tok::Quoted: {
        ++pos_;
        std::vector<Term> args;
        if (is_punct("(")) {
          ++pos_;
          args = term_list();
          expect(")");
        }
        return remember(Term::compound(t.text, std::move(args)), t);
      }
      case Tok::Punct:
        if (t.text == "[") return list();
        if (t.text == "(") {
          ++pos_;
          std::vector<Term> items = term_list();
          expect(")");
          Term out = items.back();
          for (std::size_t k = items.size() - 1; k-- > 0;) {
            out = Term::compound(std::string(functor::kAnd), {items[k], out});
          }
          return remember(out, t);
        }
        if (t.text == "\\+") {
          ++pos_;
          Term inner = term();
          return remember(Term::compound(std::string(functor::kNot), {inner}), t);
        }
        break;
      case Tok::End:
        break;
    }
    unexpected("a term");
  }

  Goal goal() {
    std::vector<Goal> parts{goal_unary()};
    while (is_punct(",")) {
      ++pos_;
      parts.push_back(goal_unary());
    }
    Goal out = parts.back();
    for (std::size_t k = parts.size() - 1; k-- > 0;) out = Goal::conj(parts[k], out);
    return out;
  }

  DGoal dgoal() {
    std::vector<DGoal> parts{dgoal_unary()};
    while (is_punct(",")) {
      ++pos_;
      parts.push_back(dgoal_unary());
    }
    DGoal out = parts.back();
    for (std::size_t k = parts.size() - 1; k-- > 0;) out = DGoal::conj(parts[k], out);
    return out;
  }

  /// Parses one axiom (no terminating dot). Static-clause heads are
  /// rejected here; statements handle them separately.
  Axiom axiom() {
    const Token& start = peek();
    Term head = atom_term();
    std::optional<PredKind> kind = decls_->kind_of(head.name(), head.arity());
    if (is_punct("{") || is_punct("~>")) {
      Goal guard = Goal::truth();
      if (is_punct("{")) {
        ++pos_;
        guard = goal();
        expect("}");
      }
      expect("~>");
      Axiom consequence = consequence_axiom();
      return Axiom::rule(head, guard, consequence);
    }
    if (is_punct(":-")) {
      ++pos_;
      if (kind == PredKind::Dynamic) return Axiom::clause(head, dgoal());
      Goal body = goal();  // parsed for error positions; head kind decides
      (void)body;
      throw Error(Errc::NamespaceClash, predicate_key(head) + " is not a dynamic predicate",
                  start.line, start.column);
    }
    if (kind == PredKind::Dynamic) return Axiom::clause(head, DGoal::embed(Goal::truth()));
    return Axiom::fact(head);
  }

  ProgramItem statement() {
    var_first_.clear();
    anon_ = 0;
    if (is_punct(":-")) {
      std::vector<Declaration> decls = declaration();
      expect(".");
      if (decls.size() != 1) {
        // Multi-name declarations are flattened by the caller.
        pending_.assign(decls.begin() + 1, decls.end());
      }
      return decls.front();
    }
    std::size_t save = pos_;
    Term head = atom_term();
    if (decls_->kind_of(head.name(), head.arity()) == PredKind::Static && !is_punct("{") &&
        !is_punct("~>")) {
      Goal body = Goal::truth();
      if (is_punct(":-")) {
        ++pos_;
        body = goal();
      }
      expect(".");
      StaticClause c{head, body};
      validator().static_clause(c);
      return c;
    }
    pos_ = save;
    Axiom a = axiom();
    expect(".");
    validator().axiom(a);
    return a;
  }

  std::vector<Declaration> take_pending() { return std::exchange(pending_, {}); }

  Validator validator() {
    return Validator(*decls_, [this](const Term& t) -> std::pair<int, int> {
      auto it = positions_.find(t.identity());
      if (it != positions_.end()) return it->second;
      if (t.is_var()) {
        auto v = var_first_.find(t.name());
        if (v != var_first_.end()) return v->second;
      }
      return {0, 0};
    });
  }

  void set_declarations(const Declarations* d) { decls_ = d; }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool is_punct(std::string_view p) const {
    return peek().kind == Tok::Punct && peek().text == p;
  }

  [[noreturn]] void unexpected(std::string_view wanted) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw Error(Errc::SyntaxError, "expected " + std::string(wanted) + " but found " + found,
                t.line, t.column);
  }

  void expect(std::string_view p) {
    if (!is_punct(p)) unexpected("'" + std::string(p) + "'");
    ++pos_;
  }

  Term remember(Term t, const Token& at) {
    positions_[t.identity()] = {at.line, at.column};
    if (t.is_var()) var_first_.try_emplace(t.name(), at.line, at.column);
    return t;
  }

  std::vector<Term> term_list() {
    std::vector<Term> items{term()};
    while (is_punct(",")) {
      ++pos_;
      items.push_back(term());
    }
    return items;
  }

  Term list() {
    const Token& open = peek();
    expect("[");
    if (is_punct("]")) {
      ++pos_;
      return remember(Term::atom(std::string(kNil)), open);
    }
    std::vector<Term> items = term_list();
    std::optional<Term> tail;
    if (is_punct("|")) {
      ++pos_;
      tail = term();
    }
    expect("]");
    return remember(make_list(items, tail), open);
  }

  Term atom_term() {
    const Token& t = peek();
    if (t.kind != Tok::Ident && t.kind != Tok::Quoted) unexpected("an atom");
    return term();
  }

  // An atom in goal position, possibly the infix `=` builtin.
  Term goal_atom() {
    const Token& t = peek();
    Term lhs = term();
    if (is_punct("=")) {
      ++pos_;
      Term rhs = term();
      return remember(Term::compound(std::string(functor::kEq), {lhs, rhs}), t);
    }
    if (!lhs.is_compound()) {
      throw Error(Errc::SyntaxError, "expected an atom in goal position", t.line, t.column);
    }
    return lhs;
  }

  Goal goal_unary() {
    if (is_punct("\\+")) {
      ++pos_;
      return Goal::negation(goal_unary());
    }
    if (is_punct("(")) {
      ++pos_;
      Goal g = goal();
      expect(")");
      return g;
    }
    return Goal(goal_atom());
  }

  DGoal dgoal_unary() {
    if (is_punct("\\+")) {
      ++pos_;
      return DGoal::negation(dgoal_unary());
    }
    if (is_punct("(")) {
      ++pos_;
      DGoal g = dgoal();
      expect(")");
      return g;
    }
    Term atom = goal_atom();
    if (atom.is(functor::kTrue, 0) ||
        decls_->kind_of(atom.name(), atom.arity()) == PredKind::Static) {
      return DGoal::embed(Goal(atom));
    }
    return DGoal(atom);
  }

  Axiom consequence_axiom() {
    if (is_punct("(")) {
      ++pos_;
      Axiom a = axiom();
      expect(")");
      return a;
    }
    return axiom();
  }

  std::vector<Declaration> declaration() {
    expect(":-");
    const Token& kw = peek();
    PredKind kind;
    if (kw.kind == Tok::Ident && kw.text == "fact") {
      kind = PredKind::Fact;
    } else if (kw.kind == Tok::Ident && kw.text == "static") {
      kind = PredKind::Static;
    } else if (kw.kind == Tok::Ident && kw.text == "dynamic") {
      kind = PredKind::Dynamic;
    } else {
      unexpected("'fact', 'static' or 'dynamic'");
    }
    ++pos_;
    std::vector<Declaration> out;
    while (true) {
      const Token& name = peek();
      if (name.kind != Tok::Ident && name.kind != Tok::Quoted) unexpected("a predicate name");
      ++pos_;
      expect("/");
      const Token& ar = peek();
      if (ar.kind != Tok::Int || ar.value < 0) unexpected("an arity");
      ++pos_;
      out.push_back({kind, name.text, static_cast<std::size_t>(ar.value)});
      decl_pos_.push_back({name.line, name.column});
      if (!is_punct(",")) break;
      ++pos_;
    }
    return out;
  }

 public:
  std::pair<int, int> decl_position(std::size_t k) const { return decl_pos_[k]; }
  void clear_decl_positions() { decl_pos_.clear(); }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Declarations* decls_;
  std::unordered_map<const void*, std::pair<int, int>> positions_;
  std::unordered_map<std::string, std::pair<int, int>> var_first_;
  std::vector<Declaration> pending_;
  std::vector<std::pair<int, int>> decl_pos_;
  int anon_ = 0;
};

const Declarations& empty_declarations() {
  static const Declarations decls;
  return decls;
}

}  // namespace

std::vector<ProgramItem> parse_program(std::string_view text, Declarations& decls) {
  Parser p(text, &decls);
  std::vector<ProgramItem> items;
  while (!p.at_end()) {
    p.clear_decl_positions();
    ProgramItem item = p.statement();
    if (auto* d = std::get_if<Declaration>(&item)) {
      std::vector<Declaration> all{*d};
      for (Declaration& extra : p.take_pending()) all.push_back(std::move(extra));
      for (std::size_t k = 0; k < all.size(); ++k) {
        auto [line, column] = p.decl_position(k);
        decls.declare(all[k], line, column);
        items.emplace_back(all[k]);
      }
      continue;
    }
    items.push_back(std::move(item));
  }
  return items;
}

Term parse_term(std::string_view text) {
  Parser p(text, &empty_declarations());
  Term t = p.term();
  p.finish(false);
  return t;
}

Goal parse_goal(std::string_view text, const Declarations& decls) {
  Parser p(text, &decls);
  Goal g = p.goal();
  p.finish(true);
  p.validator().goal(g);
  return g;
}

DGoal parse_dgoal(std::string_view text, const Declarations& decls) {
  Parser p(text, &decls);
  DGoal g = p.dgoal();
  p.finish(true);
  p.validator().dgoal(g);
  return g;
}

Axiom parse_axiom(std::string_view text, const Declarations& decls) {
  Parser p(text, &decls);
  Axiom a = p.axiom();
  p.finish(true);
  p.validator().axiom(a);
  return a;
}

void validate(const Axiom& a, const Declarations& decls) { Validator(decls, nullptr).axiom(a); }

// --- printer -------------------------------------------------------------

namespace {

bool plain_name(const std::string& name) {
  if (name.empty() || !is_lower(name.front())) return false;
  return std::ranges::all_of(name, is_ident_char);
}

void escape_into(std::string& out, const std::string& text, char quote) {
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c == quote) {
          out.push_back('\\');
          out.push_back(c);
        } else {
          out.push_back(c);
        }
    }
  }
}

void print_name(std::string& out, const std::string& name) {
  if (plain_name(name)) {
    out += name;
    return;
  }
  out.push_back('\'');
  escape_into(out, name, '\'');
  out.push_back('\'');
}

void print_term(std::string& out, const Term& t) {
  switch (t.kind()) {
    case TermKind::Int:
      out += std::to_string(t.int_value());
      return;
    case TermKind::Str:
      out.push_back('"');
      escape_into(out, t.str_value(), '"');
      out.push_back('"');
      return;
    case TermKind::Var:
      out += t.name();
      if (t.scope() != 0) out += "_" + std::to_string(t.scope());
      return;
    case TermKind::Compound:
      break;
  }
  if (t.is(kNil, 0)) {
    out += "[]";
    return;
  }
  if (t.is(kCons, 2)) {
    out.push_back('[');
    Term cur = t;
    bool first = true;
    while (cur.is(kCons, 2)) {
      if (!first) out += ", ";
      first = false;
      print_term(out, cur.arg(0));
      cur = cur.arg(1);
    }
    if (!cur.is(kNil, 0)) {
      out.push_back('|');
      print_term(out, cur);
    }
    out.push_back(']');
    return;
  }
  if (t.is(functor::kAnd, 2)) {
    out.push_back('(');
    print_term(out, t.arg(0));
    out += ", ";
    print_term(out, t.arg(1));
    out.push_back(')');
    return;
  }
  if (t.is(functor::kNot, 1)) {
    out += "\\+ ";
    print_term(out, t.arg(0));
    return;
  }
  print_name(out, t.name());
  if (t.arity() == 0) return;
  out.push_back('(');
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ", ";
    print_term(out, t.arg(i));
  }
  out.push_back(')');
}

void print_goal(std::string& out, const Goal& g) {
  switch (g.kind()) {
    case Goal::Kind::True:
      out += "true";
      return;
    case Goal::Kind::Atom:
      if (g.term().is(functor::kEq, 2)) {
        print_term(out, g.term().arg(0));
        out += " = ";
        print_term(out, g.term().arg(1));
      } else {
        print_term(out, g.term());
      }
      return;
    case Goal::Kind::And: {
      Goal l = g.lhs();
      if (l.kind() == Goal::Kind::And) {
        out.push_back('(');
        print_goal(out, l);
        out.push_back(')');
      } else {
        print_goal(out, l);
      }
      out += ", ";
      print_goal(out, g.rhs());
      return;
    }
    case Goal::Kind::Not: {
      out += "\\+ ";
      Goal in = g.inner();
      if (in.kind() == Goal::Kind::And) {
        out.push_back('(');
        print_goal(out, in);
        out.push_back(')');
      } else {
        print_goal(out, in);
      }
      return;
    }
  }
}

void print_dgoal(std::string& out, const DGoal& g) {
  switch (g.kind()) {
    case DGoal::Kind::Atom:
      print_term(out, g.term());
      return;
    case DGoal::Kind::Static: {
      Goal s = g.static_goal();
      if (s.kind() == Goal::Kind::And) {
        out.push_back('(');
        print_goal(out, s);
        out.push_back(')');
      } else {
        print_goal(out, s);
      }
      return;
    }
    case DGoal::Kind::And: {
      DGoal l = g.lhs();
      if (l.kind() == DGoal::Kind::And) {
        out.push_back('(');
        print_dgoal(out, l);
        out.push_back(')');
      } else {
        print_dgoal(out, l);
      }
      out += ", ";
      print_dgoal(out, g.rhs());
      return;
    }
    case DGoal::Kind::Not: {
      out += "\\+ ";
      DGoal in = g.inner();
      if (in.kind() == DGoal::Kind::And) {
        out.push_back('(');
        print_dgoal(out, in);
        out.push_back(')');
      } else {
        print_dgoal(out, in);
      }
      return;
    }
  }
}

void print_axiom(std::string& out, const Axiom& a) {
  switch (a.kind()) {
    case Axiom::Kind::Fact:
      print_term(out, a.term());
      return;
    case Axiom::Kind::Clause:
      print_term(out, a.head());
      out += " :- ";
      print_dgoal(out, a.body());
      return;
    case Axiom::Kind::Rule: {
      print_term(out, a.trigger());
      Goal guard = a.guard();
      if (guard.kind() != Goal::Kind::True) {
        out += " { ";
        print_goal(out, guard);
        out += " }";
      }
      out += " ~> ";
      Axiom c = a.consequence();
      if (c.is_fact()) {
        print_axiom(out, c);
      } else {
        out.push_back('(');
        print_axiom(out, c);
        out.push_back(')');
      }
      return;
    }
  }
}

}  // namespace

std::string print(const Term& t) {
  std::string out;
  print_term(out, t);
  return out;
}

std::string print(const Goal& g) {
  std::string out;
  print_goal(out, g);
  return out;
}

std::string print(const DGoal& g) {
  std::string out;
  print_dgoal(out, g);
  return out;
}

std::string print(const Axiom& a) {
  std::string out;
  print_axiom(out, a);
  return out;
}

std::string print(const StaticClause& c) {
  std::string out;
  print_term(out, c.head);
  if (c.body.kind() != Goal::Kind::True) {
    out += " :- ";
    print_goal(out, c.body);
  }
  return out;
}

std::string print(const Declaration& d) {
  std::string out = ":- ";
  out += pred_kind_name(d.kind);
  out.push_back(' ');
  print_name(out, d.name);
  out += "/" + std::to_string(d.arity);
  return out;
}

}  // namespace fishtank
