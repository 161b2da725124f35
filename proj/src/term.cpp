#include "fishtank/term.hpp"

#include <algorithm>
#include <atomic>
#include <unordered_set>

#include "fishtank/error.hpp"

namespace fishtank {

struct Term::Node {
  TermKind kind;
  bool ground;
  std::int64_t number;  // Int value or Var scope
  std::string text;     // compound name, string payload, or var name
  std::vector<Term> args;
  std::size_t hash;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::compound(std::string name, std::vector<Term> args) {
  bool ground = true;
  std::size_t h = mix(std::hash<std::string>{}(name), 0x11);
  h = mix(h, args.size());
  for (const Term& a : args) {
    ground = ground && a.ground();
    h = mix(h, a.hash());
  }
  return Term(std::make_shared<const Node>(
      Node{TermKind::Compound, ground, 0, std::move(name), std::move(args), h}));
}

Term Term::integer(std::int64_t value) {
  std::size_t h = mix(0x22, std::hash<std::int64_t>{}(value));
  return Term(std::make_shared<const Node>(Node{TermKind::Int, true, value, {}, {}, h}));
}

Term Term::string(std::string value) {
  std::size_t h = mix(0x33, std::hash<std::string>{}(value));
  return Term(
      std::make_shared<const Node>(Node{TermKind::Str, true, 0, std::move(value), {}, h}));
}

Term Term::var(std::string name, std::int64_t scope) {
  std::size_t h = mix(mix(0x44, std::hash<std::string>{}(name)), std::hash<std::int64_t>{}(scope));
  return Term(
      std::make_shared<const Node>(Node{TermKind::Var, false, scope, std::move(name), {}, h}));
}

TermKind Term::kind() const noexcept { return node_->kind; }
const std::string& Term::name() const noexcept { return node_->text; }
std::int64_t Term::int_value() const noexcept { return node_->number; }
std::span<const Term> Term::args() const noexcept { return node_->args; }
bool Term::ground() const noexcept { return node_->ground; }
std::size_t Term::hash() const noexcept { return node_->hash; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Int:
      return a.int_value() == b.int_value();
    case TermKind::Str:
      return a.name() == b.name();
    case TermKind::Var:
      return a.scope() == b.scope() && a.name() == b.name();
    case TermKind::Compound:
      return a.name() == b.name() && std::ranges::equal(a.args(), b.args());
  }
  return false;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  // Standard order of terms: Var < Int < Str < Compound.
  auto rank = [](TermKind k) {
    switch (k) {
      case TermKind::Var: return 0;
      case TermKind::Int: return 1;
      case TermKind::Str: return 2;
      case TermKind::Compound: return 3;
    }
    return 4;
  };
  if (auto c = rank(a.kind()) <=> rank(b.kind()); c != 0) return c;
  switch (a.kind()) {
    case TermKind::Int:
      return a.int_value() <=> b.int_value();
    case TermKind::Str:
      return a.name().compare(b.name()) <=> 0;
    case TermKind::Var:
      if (auto c = a.name().compare(b.name()) <=> 0; c != 0) return c;
      return a.scope() <=> b.scope();
    case TermKind::Compound: {
      if (auto c = a.arity() <=> b.arity(); c != 0) return c;
      if (auto c = a.name().compare(b.name()) <=> 0; c != 0) return c;
      for (std::size_t i = 0; i < a.arity(); ++i) {
        if (auto c = a.arg(i) <=> b.arg(i); c != 0) return c;
      }
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

Term make_list(std::span<const Term> items, std::optional<Term> tail) {
  Term out = tail ? *tail : Term::atom(std::string(kNil));
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    out = Term::compound(std::string(kCons), {*it, out});
  }
  return out;
}

std::optional<std::vector<Term>> list_items(const Term& t) {
  std::vector<Term> out;
  Term cur = t;
  while (true) {
    if (cur.is(kNil, 0)) return out;
    if (!cur.is(kCons, 2)) return std::nullopt;
    out.push_back(cur.arg(0));
    cur = cur.arg(1);
  }
}

bool is_ground(const Term& t) { return t.ground(); }

// --- substitutions -------------------------------------------------------

std::size_t Substitution::KeyHash::operator()(const Key& k) const noexcept {
  return mix(std::hash<std::string>{}(k.name), std::hash<std::int64_t>{}(k.scope));
}

const Term* Substitution::lookup(const Term& var) const {
  if (bindings_.empty()) return nullptr;
  auto it = bindings_.find(Key{var.name(), var.scope()});
  return it == bindings_.end() ? nullptr : &it->second;
}

void Substitution::bind(const Term& var, Term value) {
  Key key{var.name(), var.scope()};
  bindings_.insert_or_assign(key, std::move(value));
  trail_.push_back(std::move(key));
}

void Substitution::undo(std::size_t mark) {
  while (trail_.size() > mark) {
    bindings_.erase(trail_.back());
    trail_.pop_back();
  }
}

Term walk(const Term& t, const Substitution& s) {
  Term cur = t;
  while (cur.is_var()) {
    const Term* next = s.lookup(cur);
    if (next == nullptr) break;
    cur = *next;
  }
  return cur;
}

Term apply(const Substitution& s, const Term& t) {
  if (t.ground() || s.empty()) return t;
  if (t.is_var()) {
    Term w = walk(t, s);
    return w.is_var() ? w : apply(s, w);
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const Term& a : t.args()) {
    Term r = apply(s, a);
    changed = changed || !r.same_node(a);
    args.push_back(std::move(r));
  }
  if (!changed) return t;
  return Term::compound(t.name(), std::move(args));
}

namespace {

bool occurs(const Term& var, const Term& t, const Substitution& s) {
  if (t.ground()) return false;
  Term w = walk(t, s);
  if (w.is_var()) return w.name() == var.name() && w.scope() == var.scope();
  if (!w.is_compound()) return false;
  for (const Term& a : w.args()) {
    if (occurs(var, a, s)) return true;
  }
  return false;
}

bool unify_rec(const Term& a, const Term& b, Substitution& s) {
  Term x = walk(a, s);
  Term y = walk(b, s);
  if (x.same_node(y)) return true;
  if (x.is_var()) {
    if (y.is_var() && x.name() == y.name() && x.scope() == y.scope()) return true;
    if (occurs(x, y, s)) return false;
    s.bind(x, y);
    return true;
  }
  if (y.is_var()) {
    if (occurs(y, x, s)) return false;
    s.bind(y, x);
    return true;
  }
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case TermKind::Int:
      return x.int_value() == y.int_value();
    case TermKind::Str:
      return x.name() == y.name();
    case TermKind::Compound:
      if (x.arity() != y.arity() || x.name() != y.name()) return false;
      if (x.ground() && y.ground()) return x == y;
      for (std::size_t i = 0; i < x.arity(); ++i) {
        if (!unify_rec(x.arg(i), y.arg(i), s)) return false;
      }
      return true;
    case TermKind::Var:
      break;
  }
  return false;
}

}  // namespace

bool unify(const Term& a, const Term& b, Substitution& s) {
  std::size_t mark = s.mark();
  if (unify_rec(a, b, s)) return true;
  s.undo(mark);
  return false;
}

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s) {
  Substitution out = s;
  if (!unify(a, b, out)) return std::nullopt;
  return out;
}

std::int64_t fresh_scope() {
  static std::atomic<std::int64_t> next{1};
  return next.fetch_add(1, std::memory_order_relaxed);
}

Term rename(const Term& t, std::int64_t scope) {
  if (t.ground()) return t;
  if (t.is_var()) return Term::var(t.name(), scope);
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const Term& a : t.args()) args.push_back(rename(a, scope));
  return Term::compound(t.name(), std::move(args));
}

namespace {

void collect_vars(const Term& t, std::vector<Term>& out,
                  std::unordered_set<Term, TermHash>& seen) {
  if (t.ground()) return;
  if (t.is_var()) {
    if (seen.insert(t).second) out.push_back(t);
    return;
  }
  for (const Term& a : t.args()) collect_vars(a, out, seen);
}

}  // namespace

std::vector<Term> variables_of(const Term& t) {
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  collect_vars(t, out, seen);
  return out;
}

Term normalize_variables(const Term& t) {
  if (t.ground()) return t;
  std::vector<Term> vars = variables_of(t);
  bool already = std::ranges::all_of(vars, [](const Term& v) { return v.scope() == 0; });
  if (already) return t;

  std::unordered_set<std::string> used;
  Substitution renaming;
  for (const Term& v : vars) {
    std::string candidate = v.name();
    for (int k = 1; used.contains(candidate); ++k) {
      candidate = v.name() + "_" + std::to_string(k);
    }
    used.insert(candidate);
    renaming.bind(v, Term::var(candidate, 0));
  }
  // Bindings point at scope-0 variables that are never themselves bound
  // unless a source variable had scope 0 with the same name; apply once
  // without chasing chains.
  struct Rebuild {
    const Substitution& map;
    Term operator()(const Term& x) const {
      if (x.ground()) return x;
      if (x.is_var()) {
        const Term* r = map.lookup(x);
        return r ? *r : x;
      }
      std::vector<Term> args;
      args.reserve(x.arity());
      for (const Term& a : x.args()) args.push_back((*this)(a));
      return Term::compound(x.name(), std::move(args));
    }
  };
  return Rebuild{renaming}(t);
}

// --- canonical encoding --------------------------------------------------

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_bytes(std::string& out, const std::string& bytes) {
  put_u32(out, static_cast<std::uint32_t>(bytes.size()));
  out.append(bytes);
}

[[noreturn]] void corrupt(const char* what) {
  throw Error(Errc::CorruptJournal, std::string("malformed term encoding: ") + what);
}

std::uint32_t get_u32(std::string_view& in) {
  if (in.size() < 4) corrupt("truncated length");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<unsigned char>(in[i]);
  in.remove_prefix(4);
  return v;
}

std::uint64_t get_u64(std::string_view& in) {
  if (in.size() < 8) corrupt("truncated integer");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<unsigned char>(in[i]);
  in.remove_prefix(8);
  return v;
}

std::string get_bytes(std::string_view& in) {
  std::uint32_t n = get_u32(in);
  if (in.size() < n) corrupt("truncated bytes");
  std::string out(in.substr(0, n));
  in.remove_prefix(n);
  return out;
}

}  // namespace

void encode_term(const Term& t, std::string& out, bool allow_vars) {
  switch (t.kind()) {
    case TermKind::Compound:
      out.push_back('\x01');
      put_bytes(out, t.name());
      put_u32(out, static_cast<std::uint32_t>(t.arity()));
      for (const Term& a : t.args()) encode_term(a, out, allow_vars);
      return;
    case TermKind::Int:
      out.push_back('\x02');
      put_u64(out, static_cast<std::uint64_t>(t.int_value()));
      return;
    case TermKind::Str:
      out.push_back('\x03');
      put_bytes(out, t.str_value());
      return;
    case TermKind::Var:
      if (!allow_vars) {
        throw Error(Errc::NonGroundSubject, "variable " + t.name() + " in subject term");
      }
      out.push_back('\x04');
      put_bytes(out, t.name());
      put_u64(out, static_cast<std::uint64_t>(t.scope()));
      return;
  }
}

SubjectKey canonical_encode(const Term& t) {
  if (!t.ground()) throw Error(Errc::NonGroundSubject, "subject term is not ground");
  std::string out;
  encode_term(t, out, false);
  return SubjectKey(std::move(out));
}

Term decode_term(std::string_view& in) {
  if (in.empty()) corrupt("missing tag");
  char tag = in.front();
  in.remove_prefix(1);
  switch (tag) {
    case '\x01': {
      std::string name = get_bytes(in);
      std::uint32_t arity = get_u32(in);
      if (arity > in.size()) corrupt("arity exceeds input");
      std::vector<Term> args;
      args.reserve(arity);
      for (std::uint32_t i = 0; i < arity; ++i) args.push_back(decode_term(in));
      return Term::compound(std::move(name), std::move(args));
    }
    case '\x02':
      return Term::integer(static_cast<std::int64_t>(get_u64(in)));
    case '\x03':
      return Term::string(get_bytes(in));
    case '\x04': {
      std::string name = get_bytes(in);
      return Term::var(std::move(name), static_cast<std::int64_t>(get_u64(in)));
    }
    default:
      corrupt("unknown tag");
  }
}

}  // namespace fishtank
