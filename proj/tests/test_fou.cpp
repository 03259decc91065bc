#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fat/fou.hpp"

using namespace fat;

TEST_CASE("fo_unify basic") {
  // {a = b -> c}
  FoProblem p;
  p.equations.emplace_back(fovar("a"), foarrow(fovar("b"), fovar("c")));
  auto r = fo_unify(p);
  auto* s = std::get_if<FoSubstitution>(&r);
  REQUIRE(s);
  CHECK(fo_eq((*s)["a"], foarrow(fovar("b"), fovar("c"))));
}

TEST_CASE("fo_unify occurs check") {
  FoProblem p;
  p.equations.emplace_back(fovar("a"), foarrow(fovar("a"), fovar("b")));
  auto r = fo_unify(p);
  auto* f = std::get_if<FoFail>(&r);
  REQUIRE(f);
  CHECK(*f == FoFail::Cycle);
}

TEST_CASE("fo_unify clash") {
  FoProblem p;
  p.equations.emplace_back(foconst("o"), foarrow(foconst("o"), foconst("o")));
  auto r = fo_unify(p);
  auto* f = std::get_if<FoFail>(&r);
  REQUIRE(f);
  CHECK(*f == FoFail::Clash);

  FoProblem q;
  q.equations.emplace_back(foconst("o"), foconst("c"));
  r = fo_unify(q);
  f = std::get_if<FoFail>(&r);
  REQUIRE(f);
  CHECK(*f == FoFail::Clash);
}

TEST_CASE("fo_unify transitive chains") {
  FoProblem p;
  p.equations.emplace_back(fovar("a"), fovar("b"));
  p.equations.emplace_back(fovar("b"), foarrow(foconst("o"), fovar("c")));
  p.equations.emplace_back(fovar("c"), foconst("o"));
  auto r = fo_unify(p);
  auto* s = std::get_if<FoSubstitution>(&r);
  REQUIRE(s);
  CHECK(fo_eq(fo_apply(*s, fovar("a")), foarrow(foconst("o"), foconst("o"))));
}

namespace {

FoPtr rand_fo(std::mt19937& rng, int depth) {
  int c = depth <= 0 ? static_cast<int>(rng() % 2) : static_cast<int>(rng() % 3);
  switch (c) {
    case 0:
      return fovar("v" + std::to_string(rng() % 4));
    case 1:
      return foconst("o");
    default:
      return foarrow(rand_fo(rng, depth - 1), rand_fo(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("fo_unify returns an idempotent unifying substitution") {
  std::mt19937 rng(777);
  int successes = 0;
  for (int i = 0; i < 400; ++i) {
    FoProblem p;
    int n = 1 + rng() % 3;
    for (int j = 0; j < n; ++j) p.equations.emplace_back(rand_fo(rng, 3), rand_fo(rng, 3));
    auto r = fo_unify(p);
    auto* s = std::get_if<FoSubstitution>(&r);
    if (!s) continue;
    ++successes;
    for (const auto& [l, rgt] : p.equations) {
      CHECK(fo_eq(fo_apply(*s, l), fo_apply(*s, rgt)));
    }
    for (const auto& [v, t] : *s) {
      CHECK(fo_eq(fo_apply(*s, t), t));
    }
  }
  CHECK(successes > 50);
}

TEST_CASE("stlc_typecheck") {
  std::map<std::string, SimplePtr> empty;
  CHECK(stlc_typecheck(empty, parse_term("\\x. x", TermStyle::Curry), sarrow(sbase(), sbase())));
  CHECK(!stlc_typecheck(empty, parse_term("\\x. x x", TermStyle::Curry), sarrow(sbase(), sbase())));
  CHECK(!stlc_typecheck(empty, parse_term("\\x. x x", TermStyle::Curry),
                        sarrow(sarrow(sbase(), sbase()), sbase())));
  // Church 2 at (o->o)->o->o
  CHECK(stlc_typecheck(empty, parse_term("\\f x. f (f x)", TermStyle::Curry),
                       sarrow(sarrow(sbase(), sbase()), sarrow(sbase(), sbase()))));
  // wrong shape
  CHECK(!stlc_typecheck(empty, parse_term("\\f x. f (f x)", TermStyle::Curry),
                        sarrow(sbase(), sarrow(sbase(), sbase()))));
  // context lookup
  std::map<std::string, SimplePtr> ctx{{"f", sarrow(sbase(), sbase())}};
  CHECK(stlc_typecheck(ctx, parse_term("\\x. f x", TermStyle::Curry), sarrow(sbase(), sbase())));
  CHECK(!stlc_typecheck(ctx, parse_term("\\x. x f", TermStyle::Curry), sarrow(sbase(), sbase())));
  // unknown free variable
  CHECK(!stlc_typecheck(empty, mkvar("z"), sbase()));
  // star has the base type
  CHECK(stlc_typecheck(empty, mkstar(), sbase()));
  CHECK(!stlc_typecheck(empty, mkstar(), sarrow(sbase(), sbase())));
}

TEST_CASE("stlc_infer") {
  std::map<std::string, SimplePtr> empty;
  auto id = stlc_infer(empty, parse_term("\\x. x", TermStyle::Curry));
  REQUIRE(id.has_value());
  REQUIRE((*id)->k == FoTerm::K::Arrow);
  CHECK(fo_eq((*id)->l, (*id)->r));
  CHECK((*id)->l->k == FoTerm::K::Var);

  CHECK(!stlc_infer(empty, parse_term("\\x. x x", TermStyle::Curry)).has_value());

  auto ap = stlc_infer(empty, parse_term("\\f x. f x", TermStyle::Curry));
  REQUIRE(ap.has_value());
  // (a -> b) -> a -> b
  REQUIRE((*ap)->k == FoTerm::K::Arrow);
  REQUIRE((*ap)->l->k == FoTerm::K::Arrow);
  CHECK(fo_eq((*ap)->l, (*ap)->r));
  CHECK(!fo_eq((*ap)->l->l, (*ap)->l->r));

  CHECK(simple_eq(ground_simple(*ap), sarrow(sarrow(sbase(), sbase()), sarrow(sbase(), sbase()))));
}
