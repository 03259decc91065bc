#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fat/syntax.hpp"

using namespace fat;

TEST_CASE("type parsing and printing round-trip") {
  const char* samples[] = {
      "X",
      "#",
      "X -> Y",
      "X -> Y -> Z",
      "(X -> Y) -> Z",
      "forall X. X",
      "forall X Y. X -> Y",
      "forall X. (X -> X) -> X -> X",
      "(forall X. X) -> Y",
      "forall X. X -> forall Y. Y -> X",
      "# -> forall X. X -> #",
  };
  for (const char* s : samples) {
    TypePtr t = parse_type(s);
    CHECK(print_type(t) == s);
    CHECK(alpha_eq(parse_type(print_type(t)), t));
  }
}

TEST_CASE("arrow associates right") {
  CHECK(alpha_eq(parse_type("X -> Y -> Z"), tarrow(tvar("X"), tarrow(tvar("Y"), tvar("Z")))));
  CHECK(!alpha_eq(parse_type("X -> Y -> Z"), parse_type("(X -> Y) -> Z")));
}

TEST_CASE("forall binds a group of variables") {
  CHECK(alpha_eq(parse_type("forall X Y. X -> Y"), tforall("X", tforall("Y", tarrow(tvar("X"), tvar("Y"))))));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_type("X ->"), parse_error);
  CHECK_THROWS_AS(parse_type("forall . X"), parse_error);
  CHECK_THROWS_AS(parse_type("X Y"), parse_error);
  CHECK_THROWS_AS(parse_term("\\x. x [X]", TermStyle::Curry), parse_error);
  CHECK_THROWS_AS(parse_term("/\\X. x", TermStyle::Curry), parse_error);
}

TEST_CASE("term parsing and printing round-trip") {
  const char* curry[] = {
      "x",
      "*",
      "x y z",
      "x (y z)",
      "\\x. x",
      "\\x y. x y",
      "\\f x. f (f x)",
      "(\\x. x) (\\y. y)",
      "\\x. x *",
  };
  for (const char* s : curry) {
    TermPtr t = parse_term(s, TermStyle::Curry);
    CHECK(print_term(t) == s);
    CHECK(is_curry(t));
  }
  const char* church[] = {
      "/\\X. \\x. x",
      "x [X]",
      "x [forall X. X] y",
      "/\\X. \\f x. f (f x)",
  };
  for (const char* s : church) {
    TermPtr t = parse_term(s, TermStyle::Church);
    CHECK(print_term(t) == s);
    CHECK(alpha_eq(parse_term(print_term(t), TermStyle::Church), t));
  }
}

TEST_CASE("alpha equivalence on types") {
  CHECK(alpha_eq(parse_type("forall X. X -> X"), parse_type("forall Y. Y -> Y")));
  CHECK(!alpha_eq(parse_type("forall X. X -> Y"), parse_type("forall Y. Y -> Y")));
  CHECK(!alpha_eq(parse_type("forall X. X -> Y"), parse_type("forall X. X -> Z")));
  // free variables are matched by name
  CHECK(alpha_eq(parse_type("X -> Y"), parse_type("X -> Y")));
  CHECK(!alpha_eq(parse_type("X"), parse_type("Y")));
  // bound may not match free
  CHECK(!alpha_eq(parse_type("forall X. X"), parse_type("forall X. Y")));
}

TEST_CASE("alpha equivalence on terms") {
  CHECK(alpha_eq(parse_term("\\x. x", TermStyle::Curry), parse_term("\\y. y", TermStyle::Curry)));
  CHECK(!alpha_eq(parse_term("\\x. x", TermStyle::Curry), parse_term("\\y. z", TermStyle::Curry)));
  CHECK(alpha_eq(parse_term("/\\X. \\x. x [X]", TermStyle::Church),
                 parse_term("/\\Y. \\z. z [Y]", TermStyle::Church)));
  CHECK(!alpha_eq(parse_term("/\\X. \\x. x [X]", TermStyle::Church),
                  parse_term("/\\Y. \\z. z [Z]", TermStyle::Church)));
}

TEST_CASE("alpha_eq is an equivalence relation on a random corpus") {
  std::mt19937 rng(12345);
  auto rand_type = [&](auto&& self, int depth) -> TypePtr {
    int c = depth <= 0 ? 0 : static_cast<int>(rng() % 4);
    switch (c) {
      case 1:
        return tarrow(self(self, depth - 1), self(self, depth - 1));
      case 2:
        return tforall(std::string(1, static_cast<char>('A' + rng() % 5)), self(self, depth - 1));
      case 3:
        return tclub();
      default:
        return tvar(std::string(1, static_cast<char>('A' + rng() % 5)));
    }
  };
  std::vector<TypePtr> corpus;
  for (int i = 0; i < 60; ++i) corpus.push_back(rand_type(rand_type, 4));
  for (const auto& t : corpus) {
    CHECK(alpha_eq(t, t));
    CHECK(alpha_eq(t, barendregt_rename(t)));
  }
  for (size_t i = 0; i + 1 < corpus.size(); i += 2) {
    bool ab = alpha_eq(corpus[i], corpus[i + 1]);
    bool ba = alpha_eq(corpus[i + 1], corpus[i]);
    CHECK(ab == ba);
  }
}

TEST_CASE("substitution avoids capture") {
  // (forall Y. X -> Y)[X := Y] must not capture Y
  TypePtr t = substitute(parse_type("forall Y. X -> Y"), "X", tvar("Y"));
  CHECK(alpha_eq(t, parse_type("forall Z. Y -> Z")));
  CHECK(free_type_vars(t) == std::set<std::string>{"Y"});

  TermPtr u = subst_term(parse_term("\\y. x y", TermStyle::Curry), "x", mkvar("y"));
  CHECK(alpha_eq(u, parse_term("\\z. y z", TermStyle::Curry)));
}

TEST_CASE("free variable computation") {
  CHECK(free_type_vars(parse_type("forall X. X -> Y")) == std::set<std::string>{"Y"});
  CHECK(free_type_vars(tclub()).empty());
  CHECK(free_term_vars(parse_term("\\x. x y", TermStyle::Curry)) == std::set<std::string>{"y"});
}

TEST_CASE("barendregt renaming gives distinct binders and preserves alpha class") {
  TypePtr t = parse_type("(forall X. X -> X) -> forall X. X");
  TypePtr r = barendregt_rename(t);
  CHECK(alpha_eq(t, r));
  // collect binder names
  std::vector<std::string> binders;
  auto walk = [&](auto&& self, const TypePtr& a) -> void {
    if (a->k == Type::K::Forall) {
      binders.push_back(a->name);
      self(self, a->a);
    } else if (a->k == Type::K::Arrow) {
      self(self, a->a);
      self(self, a->b);
    }
  };
  walk(walk, r);
  REQUIRE(binders.size() == 2);
  CHECK(binders[0] != binders[1]);

  TermPtr tm = parse_term("(\\x. x) (\\x. x x)", TermStyle::Curry);
  TermPtr rm = barendregt_rename(tm);
  CHECK(alpha_eq(tm, rm));
  CHECK(rm->fun->name != rm->arg->name);
}

TEST_CASE("erasure") {
  CHECK(simple_eq(erase_types(parse_type("forall X. X -> X")), sarrow(sbase(), sbase())));
  CHECK(simple_eq(erase_types(parse_type("forall X. (X -> X) -> X -> X")),
                  sarrow(sarrow(sbase(), sbase()), sarrow(sbase(), sbase()))));
  CHECK(simple_eq(erase_types(tclub()), sbase()));
  CHECK(print_simple(erase_types(parse_type("(X -> Y) -> Z"))) == "(o -> o) -> o");

  TermPtr church = parse_term("/\\X. \\x. x [X] y", TermStyle::Church);
  CHECK(alpha_eq(erase_term(church), parse_term("\\x. x y", TermStyle::Curry)));
}

TEST_CASE("name supply avoids collisions") {
  NameSupply s;
  s.note("x");
  s.note("x'");
  std::string a = s.fresh("x");
  std::string b = s.fresh("x");
  CHECK(a != "x");
  CHECK(a != "x'");
  CHECK(a != b);
}
