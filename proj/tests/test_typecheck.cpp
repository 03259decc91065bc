#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fat/reduction.hpp"
#include "fat/typecheck.hpp"
#include "oracle.hpp"

using namespace fat;

static TermPtr cparse(const char* s) { return parse_term(s, TermStyle::Curry); }

TEST_CASE("extend_equations appends a trailing argument everywhere") {
  unif::Decls decls;
  decls.seq_vars = {"b", "c"};
  decls.proj_vars["al"] = 1;
  decls.meta_vars["F"] = 1;
  decls.meta_vars["G"] = 1;
  std::vector<std::pair<unif::StarPtr, unif::StarPtr>> eqs;
  eqs.emplace_back(unif::emeta("F", {unif::sproj("al", {"b"})}),
                   unif::emeta("G", {unif::svar("b")}));
  extend_equations(eqs, decls, "c");
  CHECK(decls.proj_vars["al"] == 2);
  CHECK(decls.meta_vars["F"] == 2);
  CHECK(decls.meta_vars["G"] == 2);
  CHECK(unif::star_eq(eqs[0].first,
                      unif::emeta("F", {unif::sproj("al", {"b", "c"}), unif::svar("c")})));
  CHECK(unif::star_eq(eqs[0].second, unif::emeta("G", {unif::svar("b"), unif::svar("c")})));

  extend_equations(eqs, decls, "c");
  CHECK(decls.proj_vars["al"] == 3);
}

TEST_CASE("gen_equations shapes") {
  auto [eqs, alloc] = gen_equations(cparse("x"));
  CHECK(eqs.size() == 1);
  CHECK(alloc.vars.size() == 1);

  auto [eqs2, alloc2] = gen_equations(cparse("\\x. x"));
  CHECK(eqs2.size() == 2);  // occurrence equation + abstraction clause
  CHECK(alloc2.abss.size() == 1);

  auto [eqs3, alloc3] = gen_equations(cparse("x y"));
  CHECK(eqs3.size() == 4);  // two occurrence equations + two application clauses
  CHECK(alloc3.apps.size() == 1);
}

TEST_CASE("worked positive example: x y at forall Z. Z") {
  TypingContext ctx{{"x", parse_type("forall X. X -> X")}, {"y", parse_type("forall Y. Y")}};
  CheckResult r = check(ctx, cparse("x y"), parse_type("forall Z. Z"));
  REQUIRE(r.accepted());
  CHECK(check_derivation(*r.derivation));
  CHECK(alpha_eq((*r.derivation)->type, parse_type("forall Z. Z")));
}

TEST_CASE("worked negative example: monomorphic argument") {
  TypingContext ctx{{"x", parse_type("forall X. X -> X")}, {"y", parse_type("Y")}};
  CheckResult r = check(ctx, cparse("x y"), parse_type("forall Z. Z"));
  CHECK(!r.accepted());
  CHECK(r.reason == RejectReason::Exhausted);
}

TEST_CASE("self application is rejected") {
  // the full pipeline already fails at the erasure phase
  CheckResult r = typable({}, cparse("\\x. x x"));
  CHECK(!r.accepted());
  CHECK(r.reason == RejectReason::StlcFail);
  // the generated constraints alone exhibit the variable cycle
  unif::UnifProblem p =
      gen_problem({}, cparse("\\x. x x"), parse_type("forall X. (X -> X) -> X"));
  CHECK(unif::phase1_cycle_check(unif::normalize_problem(p)) == unif::FailReason::Cycle);
  CHECK(unif::fat_unify(p).reason == unif::FailReason::Cycle);
}

TEST_CASE("a type inhabited with impredicative instantiation is rejected") {
  TypingContext ctx;
  CheckResult r = check(ctx, cparse("\\x y. x y"),
                        parse_type("(forall X. X -> Y) -> (X -> X) -> Y"));
  CHECK(!r.accepted());
}

TEST_CASE("quantified goals that survive erasure reject in phase 2") {
  CheckResult r = check({}, cparse("\\x. x"), parse_type("forall X Y. X -> Y"));
  CHECK(!r.accepted());
  CHECK(r.reason == RejectReason::Exhausted);
}

TEST_CASE("erasure mismatch rejects at phase 0") {
  CheckResult r = check({}, cparse("\\x. x"), parse_type("forall X. X -> X -> X"));
  CHECK(!r.accepted());
  CHECK(r.reason == RejectReason::StlcFail);
}

TEST_CASE("identity and friends") {
  CHECK(check({}, cparse("\\x. x"), parse_type("forall X. X -> X")).accepted());
  CHECK(check({}, cparse("\\x. x"), parse_type("Y -> Y")).accepted());
  CHECK(check({}, cparse("\\x y. x"), parse_type("forall X Y. X -> Y -> X")).accepted());
  CHECK(check({}, cparse("\\f x. f (f x)"),
              parse_type("forall X. (X -> X) -> X -> X"))
            .accepted());
  CHECK(typable({}, cparse("\\x. x")).accepted());
  CHECK(typable({{"y", parse_type("forall Y. Y")}}, cparse("y")).accepted());
  CHECK(!typable({}, cparse("\\x. x x")).accepted());
}

TEST_CASE("the star constant inhabits the club type") {
  CHECK(check({}, mkstar(), tclub()).accepted());
  CHECK(check({}, cparse("\\x. *"), parse_type("forall X. X -> #")).accepted());
  CHECK(!check({}, mkstar(), parse_type("forall X. X")).accepted());
}

TEST_CASE("certificates validate and expose the synthetic structure") {
  TypingContext ctx{{"x", parse_type("forall X. X -> X")}, {"y", parse_type("forall Y. Y")}};
  CheckResult r = check(ctx, cparse("x y"), parse_type("forall Z. Z"));
  REQUIRE(r.accepted());
  const auto& d = **r.derivation;
  CHECK(d.rule == SyntheticDerivation::Rule::App);
  REQUIRE(d.kids.size() == 2);
  CHECK(d.kids[0]->rule == SyntheticDerivation::Rule::Var);
  CHECK(d.kids[1]->rule == SyntheticDerivation::Rule::Var);
  CHECK(d.kids[0]->type->k == Type::K::Arrow);
}

TEST_CASE("check_derivation rejects broken certificates") {
  TypingContext ctx{{"x", parse_type("forall X. X")}};
  // non-variable witness is impossible to express (witnesses are names), but a
  // club witness must be rejected
  auto bad = std::make_shared<SyntheticDerivation>();
  bad->rule = SyntheticDerivation::Rule::Var;
  bad->ctx = ctx;
  bad->term = mkvar("x");
  bad->type = tclub();
  bad->witnesses = {"#"};
  CHECK(!check_derivation(bad));

  // generalizing a variable free in the context
  auto leaky = std::make_shared<SyntheticDerivation>();
  leaky->rule = SyntheticDerivation::Rule::Var;
  leaky->ctx = TypingContext{{"x", parse_type("Y")}};
  leaky->term = mkvar("x");
  leaky->type = parse_type("forall Y. Y");
  leaky->gens = {"Y"};
  CHECK(!check_derivation(leaky));

  // a valid-looking node with the wrong conclusion type
  auto wrong = std::make_shared<SyntheticDerivation>();
  wrong->rule = SyntheticDerivation::Rule::Var;
  wrong->ctx = TypingContext{{"x", parse_type("Y")}};
  wrong->term = mkvar("x");
  wrong->type = parse_type("Z");
  CHECK(!check_derivation(wrong));
}

TEST_CASE("oracle sanity on the worked examples") {
  TypingContext poly{{"x", parse_type("forall X. X -> X")}, {"y", parse_type("forall Y. Y")}};
  CHECK(oracle_check(poly, cparse("x y"), parse_type("forall Z. Z")));
  TypingContext mono{{"x", parse_type("forall X. X -> X")}, {"y", parse_type("Y")}};
  CHECK(!oracle_check(mono, cparse("x y"), parse_type("forall Z. Z")));
  CHECK(oracle_check({}, cparse("\\x. x"), parse_type("forall X. X -> X")));
  CHECK(!oracle_check({}, cparse("\\x y. x y"),
                      parse_type("(forall X. X -> Y) -> (X -> X) -> Y")));
}

// ---------------------------------------------------------------------------
// Random corpus
// ---------------------------------------------------------------------------

namespace {

TermPtr rand_term(std::mt19937& rng, int budget, std::vector<std::string>& scope,
                  const std::vector<std::string>& frees) {
  if (budget <= 1) {
    size_t total = scope.size() + frees.size() + 1;
    size_t pick = rng() % total;
    if (pick < scope.size()) return mkvar(scope[pick]);
    if (pick < scope.size() + frees.size()) return mkvar(frees[pick - scope.size()]);
    return mkstar();
  }
  switch (rng() % 3) {
    case 0: {
      std::string v = "v" + std::to_string(scope.size());
      scope.push_back(v);
      TermPtr b = rand_term(rng, budget - 1, scope, frees);
      scope.pop_back();
      return mkabs(v, b);
    }
    case 1: {
      int left = 1 + static_cast<int>(rng() % static_cast<unsigned>(budget - 1));
      TermPtr f = rand_term(rng, left, scope, frees);
      TermPtr a = rand_term(rng, budget - left, scope, frees);
      return mkapp(f, a);
    }
    default:
      return rand_term(rng, 1, scope, frees);
  }
}

std::vector<TypePtr> corpus_types() {
  const char* samples[] = {
      "forall X. X",
      "forall X. X -> X",
      "Y",
      "Y -> Y",
      "forall X. X -> Y",
      "forall X Y. X -> Y -> X",
      "#",
      "# -> #",
      "forall X. (X -> X) -> X -> X",
  };
  std::vector<TypePtr> out;
  for (const char* s : samples) out.push_back(parse_type(s));
  return out;
}

}  // namespace

TEST_CASE("solver agrees with the brute-force oracle on a random corpus") {
  std::mt19937 rng(987654);
  auto types = corpus_types();
  std::vector<std::string> frees{"f", "g"};
  int accepted = 0, rejected = 0;
  for (int i = 0; i < 120; ++i) {
    TypingContext ctx;
    ctx["f"] = types[rng() % types.size()];
    ctx["g"] = types[rng() % types.size()];
    std::vector<std::string> scope;
    TermPtr t = rand_term(rng, 2 + static_cast<int>(rng() % 5), scope, frees);
    TypePtr goal = types[rng() % types.size()];
    bool solver = check(ctx, t, goal).accepted();
    bool oracle = oracle_check(ctx, t, goal);
    CAPTURE(print_term(t));
    CAPTURE(print_type(goal));
    CAPTURE(print_type(ctx["f"]));
    CAPTURE(print_type(ctx["g"]));
    CHECK(solver == oracle);
    (solver ? accepted : rejected) += 1;
  }
  CHECK(accepted > 10);
  CHECK(rejected > 10);
}

TEST_CASE("erasure soundness on accepted judgments") {
  std::mt19937 rng(13131);
  auto types = corpus_types();
  std::vector<std::string> frees{"f"};
  for (int i = 0; i < 80; ++i) {
    TypingContext ctx{{"f", types[rng() % types.size()]}};
    std::vector<std::string> scope;
    TermPtr t = rand_term(rng, 2 + static_cast<int>(rng() % 5), scope, frees);
    TypePtr goal = types[rng() % types.size()];
    CheckResult r = check(ctx, t, goal);
    if (!r.accepted()) continue;
    std::map<std::string, SimplePtr> ectx{{"f", erase_types(ctx["f"])}};
    CHECK(stlc_typecheck(ectx, t, erase_types(goal)));
  }
}

TEST_CASE("beta stability of accepted judgments") {
  std::mt19937 rng(24680);
  auto types = corpus_types();
  std::vector<std::string> frees{"f", "g"};
  int reduced = 0;
  for (int i = 0; i < 800 && reduced < 25; ++i) {
    TypingContext ctx;
    ctx["f"] = types[rng() % types.size()];
    ctx["g"] = types[rng() % types.size()];
    std::vector<std::string> scope;
    TermPtr t = rand_term(rng, 3 + static_cast<int>(rng() % 4), scope, frees);
    if (i % 2) {
      // wrap in a redex that discards or forwards the random body
      std::string v = "w0";
      t = rng() % 2 ? mkapp(mkabs(v, mkvar(v)), t) : mkapp(mkabs(v, t), mkvar("f"));
    }
    TypePtr goal = types[rng() % types.size()];
    if (!check(ctx, t, goal).accepted()) continue;
    TermPtr nf;
    try {
      nf = beta_normalize(t, 10000);
    } catch (const fuel_exhausted&) {
      continue;
    }
    if (alpha_eq(nf, t)) continue;
    ++reduced;
    CAPTURE(print_term(t));
    CAPTURE(print_term(nf));
    CAPTURE(print_type(goal));
    CHECK(check(ctx, nf, goal).accepted());
  }
  CHECK(reduced >= 10);
}
