#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fishtank {

enum class TermKind : std::uint8_t { Compound, Int, Str, Var };

/// Immutable logic term. Copies share structure; all operations are
/// thread-safe because nodes are never mutated after construction.
class Term {
 public:
  static Term compound(std::string name, std::vector<Term> args = {});
  static Term atom(std::string name) { return compound(std::move(name)); }
  static Term integer(std::int64_t value);
  static Term string(std::string value);
  static Term var(std::string name, std::int64_t scope = 0);

  TermKind kind() const noexcept;
  bool is_compound() const noexcept { return kind() == TermKind::Compound; }
  bool is_int() const noexcept { return kind() == TermKind::Int; }
  bool is_str() const noexcept { return kind() == TermKind::Str; }
  bool is_var() const noexcept { return kind() == TermKind::Var; }

  // Compound name, variable name, or string payload.
  const std::string& name() const noexcept;
  const std::string& str_value() const noexcept { return name(); }
  std::int64_t int_value() const noexcept;
  std::int64_t scope() const noexcept { return int_value(); }
  std::span<const Term> args() const noexcept;
  std::size_t arity() const noexcept { return args().size(); }
  const Term& arg(std::size_t i) const { return args()[i]; }

  bool is(std::string_view functor, std::size_t n) const noexcept {
    return is_compound() && arity() == n && name() == functor;
  }

  /// True iff no variable occurs in the term (cached at construction).
  bool ground() const noexcept;
  std::size_t hash() const noexcept;

  bool same_node(const Term& other) const noexcept { return node_ == other.node_; }
  const void* identity() const noexcept { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

// Lists use the conventional '.'/2 cells terminated by '[]'.
inline constexpr std::string_view kNil = "[]";
inline constexpr std::string_view kCons = ".";

Term make_list(std::span<const Term> items, std::optional<Term> tail = std::nullopt);
/// Elements of a proper list, or nullopt when the term is not one.
std::optional<std::vector<Term>> list_items(const Term& t);

bool is_ground(const Term& t);

// --- substitutions -------------------------------------------------------

/// Variable -> term bindings in triangular form, with an undo trail so that
/// the resolution engine can backtrack cheaply.
class Substitution {
 public:
  struct Key {
    std::string name;
    std::int64_t scope;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  const Term* lookup(const Term& var) const;
  void bind(const Term& var, Term value);

  std::size_t mark() const noexcept { return trail_.size(); }
  void undo(std::size_t mark);

  std::size_t size() const noexcept { return bindings_.size(); }
  bool empty() const noexcept { return bindings_.empty(); }

 private:
  std::unordered_map<Key, Term, KeyHash> bindings_;
  std::vector<Key> trail_;
};

/// Dereferences a variable chain one level at a time until reaching a
/// non-variable or an unbound variable.
Term walk(const Term& t, const Substitution& s);

/// Replaces every bound variable, recursively.
Term apply(const Substitution& s, const Term& t);

/// In-place unification with occurs-check. On failure `s` is restored.
bool unify(const Term& a, const Term& b, Substitution& s);

/// Value-returning variant: the result extends `s`.
std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s);

/// Fresh scope ids for renaming apart; never returns 0 (reserved for source
/// variables).
std::int64_t fresh_scope();

/// Moves every variable into `scope`.
Term rename(const Term& t, std::int64_t scope);

/// Resets every variable to scope 0, keeping names; distinct variables that
/// would collide get a numeric suffix in first-occurrence order.
Term normalize_variables(const Term& t);

/// Distinct variables in first-occurrence (left-to-right, depth-first) order.
std::vector<Term> variables_of(const Term& t);

// --- canonical encoding --------------------------------------------------

/// Canonical byte encoding of a ground term, used as partition key.
class SubjectKey {
 public:
  SubjectKey() = default;
  explicit SubjectKey(std::string bytes) : bytes_(std::move(bytes)) {}

  const std::string& bytes() const noexcept { return bytes_; }

  friend bool operator==(const SubjectKey&, const SubjectKey&) = default;
  friend auto operator<=>(const SubjectKey&, const SubjectKey&) = default;

 private:
  std::string bytes_;
};

struct SubjectKeyHash {
  std::size_t operator()(const SubjectKey& k) const noexcept {
    return std::hash<std::string>{}(k.bytes());
  }
};

/// Throws Error(NonGroundSubject) if `t` contains a variable.
SubjectKey canonical_encode(const Term& t);

/// Appends the type-tagged preorder encoding of `t` to `out`. With
/// `allow_vars` variables are written with tag 0x04 (name, scope);
/// otherwise they raise NonGroundSubject.
void encode_term(const Term& t, std::string& out, bool allow_vars);

/// Decodes one term from the front of `in`, advancing it. Throws
/// Error(CorruptJournal) on malformed input.
Term decode_term(std::string_view& in);

}  // namespace fishtank

template <>
struct std::hash<fishtank::Term> {
  std::size_t operator()(const fishtank::Term& t) const noexcept { return t.hash(); }
};
