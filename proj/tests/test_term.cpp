#include "doctest.h"

#include "fishtank/axiom.hpp"
#include "fishtank/error.hpp"
#include "fishtank/lang.hpp"
#include "fishtank/term.hpp"

using namespace fishtank;

namespace {
Term t(const char* s) { return parse_term(s); }
}  // namespace

TEST_CASE("unify binds both sides") {
  Substitution s;
  REQUIRE(unify(t("f(X, 2)"), t("f(1, Y)"), s));
  CHECK(apply(s, t("X")) == Term::integer(1));
  CHECK(apply(s, t("Y")) == Term::integer(2));
  CHECK(apply(s, t("f(X, 2)")) == apply(s, t("f(1, Y)")));
}

TEST_CASE("occurs check and aliasing conflicts fail") {
  Substitution s;
  CHECK_FALSE(unify(t("X"), t("f(X)"), s));
  CHECK(s.empty());
  CHECK_FALSE(unify(t("g(X, X)"), t("g(1, 2)"), s));
  CHECK(s.empty());
  CHECK_FALSE(unify(t("f(1)"), t("f(\"1\")"), s));
}

TEST_CASE("unify failure leaves the substitution untouched") {
  Substitution s;
  REQUIRE(unify(t("Z"), t("3"), s));
  CHECK_FALSE(unify(t("f(A, B, 1)"), t("f(1, 2, 2)"), s));
  CHECK(s.size() == 1);
}

TEST_CASE("apply resolves transitively") {
  Substitution s;
  s.bind(t("X"), t("g(Y)"));
  s.bind(t("Y"), t("2"));
  CHECK(apply(s, t("X")) == t("g(2)"));
  CHECK(apply(Substitution{}, t("f(A, b)")) == t("f(A, b)"));
}

TEST_CASE("groundness") {
  CHECK(is_ground(t("user(\"bob\")")));
  CHECK_FALSE(is_ground(t("f(X)")));
  CHECK(is_ground(t("f(g(1, \"a\"), 2)")));
}

TEST_CASE("canonical encoding is bit exact") {
  std::string expect;
  expect += '\x01';
  expect += std::string("\x00\x00\x00\x04", 4) + "user";
  expect += std::string("\x00\x00\x00\x01", 4);
  expect += '\x03';
  expect += std::string("\x00\x00\x00\x03", 4) + "bob";
  CHECK(canonical_encode(t("user(\"bob\")")).bytes() == expect);

  std::string five("\x02\x00\x00\x00\x00\x00\x00\x00\x05", 9);
  CHECK(canonical_encode(Term::integer(5)).bytes() == five);
  std::string minus_one("\x02\xff\xff\xff\xff\xff\xff\xff\xff", 9);
  CHECK(canonical_encode(Term::integer(-1)).bytes() == minus_one);
}

TEST_CASE("canonical encoding is injective and deterministic") {
  CHECK(canonical_encode(t("user(\"bob\")")) == canonical_encode(t("user(\"bob\")")));
  CHECK(canonical_encode(t("user(\"bob\")")) != canonical_encode(t("user(\"bo\")")));
  CHECK(canonical_encode(t("f(1)")) != canonical_encode(t("f(\"1\")")));
  CHECK(canonical_encode(t("f(ab)")) != canonical_encode(t("f(a, b)")));
  CHECK_THROWS_AS(canonical_encode(t("f(X)")), Error);
}

TEST_CASE("encoding round-trips through the decoder") {
  for (const char* src : {"f(g(1, \"a\"), [1, 2, 3], -7)", "'hello world'(\"\\n\")", "x"}) {
    std::string bytes = canonical_encode(t(src)).bytes();
    std::string_view in = bytes;
    CHECK(decode_term(in) == t(src));
    CHECK(in.empty());
  }
  std::string with_var;
  encode_term(Term::var("X", 9), with_var, true);
  std::string_view in = with_var;
  Term back = decode_term(in);
  CHECK(back.is_var());
  CHECK(back.scope() == 9);
}

TEST_CASE("decoder rejects malformed bytes") {
  std::string bytes = canonical_encode(t("f(1)")).bytes();
  bytes.pop_back();
  std::string_view in = bytes;
  CHECK_THROWS_AS(decode_term(in), Error);
  std::string junk("\x09", 1);
  std::string_view j = junk;
  CHECK_THROWS_AS(decode_term(j), Error);
}

TEST_CASE("subject extraction") {
  Declarations d;
  parse_program(":- fact tweeted/3, f/1. :- dynamic timeline/3.", d);
  Axiom fact = parse_axiom("tweeted(user(\"b\"), 7, x)", d);
  CHECK(subject_of(fact) == canonical_encode(t("user(\"b\")")));
  Axiom rule = parse_axiom("tweeted(U, T, W) ~> f(U)", d);
  CHECK_FALSE(subject_of(rule).has_value());
  Axiom clause = parse_axiom("timeline(user(\"a\"), T, E) :- true", d);
  CHECK(subject_of(clause) == canonical_encode(t("user(\"a\")")));
}

TEST_CASE("rename apart separates variables") {
  Term a = t("f(X, Y, X)");
  Term r1 = rename(a, 7);
  Term r2 = rename(a, 8);
  CHECK(r1.arg(0).scope() == 7);
  CHECK(r1.arg(0) == r1.arg(2));
  CHECK(variables_of(r1).size() == 2);
  for (const Term& v : variables_of(r1)) {
    for (const Term& w : variables_of(r2)) CHECK(v != w);
  }
  CHECK(rename(t("f(1)"), 3) == t("f(1)"));
}

TEST_CASE("normalize_variables resets scopes deterministically") {
  Term a = Term::compound("f", {Term::var("X", 4), Term::var("X", 9), Term::var("Y", 4)});
  Term b = Term::compound("f", {Term::var("X", 11), Term::var("X", 2), Term::var("Y", 11)});
  CHECK(normalize_variables(a) == normalize_variables(b));
  Term n = normalize_variables(a);
  CHECK(n.arg(0) == Term::var("X"));
  CHECK(n.arg(1) == Term::var("X_1"));
  CHECK(n.arg(2) == Term::var("Y"));
}
