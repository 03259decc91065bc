#include "fat/logic.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>
#include <set>

namespace fat {

FormulaPtr fbot() { return std::make_shared<Formula>(Formula{Formula::K::Bot}); }

FormulaPtr fatom(std::string pred, std::vector<std::string> args) {
  if (args.empty() || args.size() > 2)
    throw ill_formed_formula("atoms take one or two arguments");
  Formula f{Formula::K::Atom};
  f.pred = std::move(pred);
  f.args = std::move(args);
  return std::make_shared<Formula>(std::move(f));
}

FormulaPtr fimp(FormulaPtr a, FormulaPtr b) {
  Formula f{Formula::K::Imp};
  f.a = std::move(a);
  f.b = std::move(b);
  return std::make_shared<Formula>(std::move(f));
}

FormulaPtr fforall(std::string var, FormulaPtr body) {
  Formula f{Formula::K::Forall};
  f.var = std::move(var);
  f.a = std::move(body);
  return std::make_shared<Formula>(std::move(f));
}

bool formula_eq(const FormulaPtr& f, const FormulaPtr& g) {
  if (f->k != g->k) return false;
  switch (f->k) {
    case Formula::K::Bot:
      return true;
    case Formula::K::Atom:
      return f->pred == g->pred && f->args == g->args;
    case Formula::K::Imp:
      return formula_eq(f->a, g->a) && formula_eq(f->b, g->b);
    case Formula::K::Forall:
      return f->var == g->var && formula_eq(f->a, g->a);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Parsing and printing.
// ---------------------------------------------------------------------------

namespace {

struct FormulaParser {
  const std::string& s;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  bool eat(const char* tok) {
    skip();
    size_t n = std::strlen(tok);
    if (s.compare(i, n, tok) != 0) return false;
    // keywords must not run into a longer identifier
    if (std::isalpha(static_cast<unsigned char>(tok[0])) && i + n < s.size() &&
        (std::isalnum(static_cast<unsigned char>(s[i + n])) || s[i + n] == '_'))
      return false;
    i += n;
    return true;
  }

  std::string ident() {
    skip();
    size_t start = i;
    while (i < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
      ++i;
    if (i == start) throw parse_error("expected identifier", start);
    return s.substr(start, i - start);
  }

  FormulaPtr formula() {
    FormulaPtr lhs = primary();
    if (eat("=>")) return fimp(lhs, formula());
    return lhs;
  }

  FormulaPtr primary() {
    if (eat("(")) {
      FormulaPtr f = formula();
      if (!eat(")")) throw parse_error("expected ')'", i);
      return f;
    }
    if (eat("forall")) {
      std::string v = ident();
      if (!eat(".")) throw parse_error("expected '.' after forall binder", i);
      return fforall(v, formula());
    }
    if (eat("bot")) return fbot();
    std::string p = ident();
    if (!eat("(")) throw parse_error("expected '(' after predicate symbol", i);
    std::vector<std::string> args{ident()};
    if (eat(",")) args.push_back(ident());
    if (!eat(")")) throw parse_error("expected ')'", i);
    return fatom(p, std::move(args));
  }

  FormulaPtr run() {
    FormulaPtr f = formula();
    skip();
    if (i != s.size()) throw parse_error("trailing input", i);
    return f;
  }
};

void print_rec(const FormulaPtr& f, std::string& out, bool arrow_lhs) {
  switch (f->k) {
    case Formula::K::Bot:
      out += "bot";
      return;
    case Formula::K::Atom:
      out += f->pred;
      out += '(';
      out += f->args[0];
      if (f->args.size() == 2) {
        out += ", ";
        out += f->args[1];
      }
      out += ')';
      return;
    case Formula::K::Imp:
      if (arrow_lhs) out += '(';
      print_rec(f->a, out, true);
      out += " => ";
      print_rec(f->b, out, false);
      if (arrow_lhs) out += ')';
      return;
    case Formula::K::Forall:
      if (arrow_lhs) out += '(';
      out += "forall ";
      out += f->var;
      out += ". ";
      print_rec(f->a, out, false);
      if (arrow_lhs) out += ')';
      return;
  }
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  FormulaParser p{text};
  return p.run();
}

std::string print_formula(const FormulaPtr& f) {
  std::string out;
  print_rec(f, out, false);
  return out;
}

// ---------------------------------------------------------------------------
// Dyadic translation.
// ---------------------------------------------------------------------------

namespace {

void collect(const FormulaPtr& f, std::vector<std::string>& vars,
             std::vector<std::string>& preds) {
  auto note = [](std::vector<std::string>& xs, const std::string& x) {
    if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
  };
  switch (f->k) {
    case Formula::K::Bot:
      return;
    case Formula::K::Atom:
      note(preds, f->pred);
      for (const auto& a : f->args) note(vars, a);
      return;
    case Formula::K::Imp:
      collect(f->a, vars, preds);
      collect(f->b, vars, preds);
      return;
    case Formula::K::Forall:
      note(vars, f->var);
      collect(f->a, vars, preds);
      return;
  }
}

void free_vars(const FormulaPtr& f, std::set<std::string>& bound,
               std::set<std::string>& out) {
  switch (f->k) {
    case Formula::K::Bot:
      return;
    case Formula::K::Atom:
      for (const auto& a : f->args)
        if (!bound.count(a)) out.insert(a);
      return;
    case Formula::K::Imp:
      free_vars(f->a, bound, out);
      free_vars(f->b, bound, out);
      return;
    case Formula::K::Forall: {
      bool was = bound.count(f->var) > 0;
      bound.insert(f->var);
      free_vars(f->a, bound, out);
      if (!was) bound.erase(f->var);
      return;
    }
  }
}

std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  free_vars(f, bound, out);
  return out;
}

bool is_closed(const FormulaPtr& f) { return free_vars(f).empty(); }

// context shapes (i)-(iii)
void validate_assumption(const FormulaPtr& f) {
  if (f->k == Formula::K::Atom) return;  // (i)
  if (f->k != Formula::K::Forall)
    throw ill_formed_formula("assumption must be atomic or universally quantified");
  if (!is_closed(f)) throw ill_formed_formula("quantified assumption must be closed");

  FormulaPtr body = f;
  while (body->k == Formula::K::Forall) body = body->a;

  // (iii): forall a. ((forall b. (p(a,b) => bot)) => bot)
  if (body->k == Formula::K::Imp && body->b->k == Formula::K::Bot &&
      body->a->k == Formula::K::Forall) {
    const FormulaPtr& inner = body->a->a;
    if (inner->k == Formula::K::Imp && inner->a->k == Formula::K::Atom &&
        inner->b->k == Formula::K::Bot)
      return;
    throw ill_formed_formula("negative assumption must negate a quantified atom");
  }

  // (ii): f_1 => ... => f_n => g, all atomic, vars of g covered by the f_i
  std::set<std::string> hyp_vars;
  while (body->k == Formula::K::Imp) {
    if (body->a->k != Formula::K::Atom)
      throw ill_formed_formula("hypotheses of a Horn assumption must be atomic");
    for (const auto& a : body->a->args) hyp_vars.insert(a);
    body = body->b;
  }
  if (body->k != Formula::K::Atom)
    throw ill_formed_formula("head of a Horn assumption must be atomic");
  for (const auto& a : body->args)
    if (!hyp_vars.count(a))
      throw ill_formed_formula("head variable " + a + " not used in any hypothesis");
}

struct DyadicEnv {
  std::vector<std::string> vars;   // individual variables, first occurrence
  std::vector<std::string> preds;  // relation symbols, first occurrence
};

TypePtr ind(const std::string& v) { return tvar("X_" + v); }

// A^bullet = A => bullet
TypePtr dot(const TypePtr& a) { return tarrow(a, tvar("bullet")); }

// p(A, B) = ((A^bullet => p_1) => (B^bullet => p_2) => p_3) => star
TypePtr atom_type(const std::string& p, const TypePtr& a, const TypePtr& b) {
  TypePtr inner = tarrow(tarrow(dot(a), tvar(p + "_1")),
                         tarrow(tarrow(dot(b), tvar(p + "_2")), tvar(p + "_3")));
  return tarrow(inner, tvar("star"));
}

std::vector<TypePtr> universe(const DyadicEnv& env, const TypePtr& a) {
  std::vector<TypePtr> out;
  for (const auto& p : env.preds)
    for (int i = 1; i <= 2; ++i)
      out.push_back(tarrow(tarrow(dot(a), tvar(p + "_" + std::to_string(i))),
                           tvar("circ1")));
  out.push_back(tarrow(dot(a), tvar("circ2")));
  return out;
}

std::vector<TypePtr> universe_all(const DyadicEnv& env) {
  std::vector<TypePtr> out;
  for (const auto& v : env.vars) {
    std::vector<TypePtr> u = universe(env, ind(v));
    out.insert(out.end(), u.begin(), u.end());
  }
  return out;
}

TypePtr translate(const DyadicEnv& env, const FormulaPtr& f) {
  switch (f->k) {
    case Formula::K::Bot:
      return tvar("spade");
    case Formula::K::Atom:
      if (f->args.size() != 2)
        throw ill_formed_formula("dyadic translation requires binary atoms");
      return atom_type(f->pred, ind(f->args[0]), ind(f->args[1]));
    case Formula::K::Imp:
      return tarrow(translate(env, f->a), translate(env, f->b));
    case Formula::K::Forall: {
      TypePtr body = translate(env, f->a);
      std::vector<TypePtr> hyps = universe_all(env);
      for (auto it = hyps.rbegin(); it != hyps.rend(); ++it)
        body = tarrow(*it, body);
      return tforall("X_" + f->var, body);
    }
  }
  throw std::logic_error("unreachable");
}

DyadicEnv make_env(const std::vector<FormulaPtr>& context, const FormulaPtr& phi) {
  DyadicEnv env;
  for (const auto& f : context) collect(f, env.vars, env.preds);
  collect(phi, env.vars, env.preds);
  return env;
}

}  // namespace

TypePtr translate_dyadic(const FormulaPtr& phi,
                         const std::vector<FormulaPtr>& context) {
  for (const auto& f : context) validate_assumption(f);
  return translate(make_env(context, phi), phi);
}

TypePtr translate_sequent(const std::vector<FormulaPtr>& context,
                          const FormulaPtr& phi) {
  for (const auto& f : context) validate_assumption(f);
  DyadicEnv env = make_env(context, phi);
  TypePtr goal = translate(env, phi);
  std::vector<TypePtr> hyps;
  for (const auto& f : context) hyps.push_back(translate(env, f));
  std::vector<TypePtr> uni = universe_all(env);
  hyps.insert(hyps.end(), uni.begin(), uni.end());
  for (auto it = hyps.rbegin(); it != hyps.rend(); ++it) goal = tarrow(*it, goal);
  return goal;
}

// ---------------------------------------------------------------------------
// Monadic bijection.
// ---------------------------------------------------------------------------

namespace {

void monadic_pred(const FormulaPtr& f, std::string& pred) {
  switch (f->k) {
    case Formula::K::Bot:
      throw ill_formed_formula("bot has no monadic counterpart");
    case Formula::K::Atom:
      if (f->args.size() != 1)
        throw ill_formed_formula("monadic formulas use a unary predicate");
      if (pred.empty())
        pred = f->pred;
      else if (pred != f->pred)
        throw ill_formed_formula("monadic formulas use a single predicate");
      return;
    case Formula::K::Imp:
      monadic_pred(f->a, pred);
      monadic_pred(f->b, pred);
      return;
    case Formula::K::Forall:
      monadic_pred(f->a, pred);
      return;
  }
}

TypePtr monadic_rec(const FormulaPtr& f) {
  switch (f->k) {
    case Formula::K::Atom:
      return tvar(f->args[0]);
    case Formula::K::Imp:
      return tarrow(monadic_rec(f->a), monadic_rec(f->b));
    case Formula::K::Forall:
      return tforall(f->var, monadic_rec(f->a));
    default:
      throw std::logic_error("unreachable");
  }
}

}  // namespace

TypePtr monadic_to_type(const FormulaPtr& phi) {
  std::string pred;
  monadic_pred(phi, pred);
  return monadic_rec(phi);
}

FormulaPtr type_to_monadic(const TypePtr& a) {
  switch (a->k) {
    case Type::K::Var:
      return fatom("p", {a->name});
    case Type::K::Arrow:
      return fimp(type_to_monadic(a->a), type_to_monadic(a->b));
    case Type::K::Forall:
      return fforall(a->name, type_to_monadic(a->a));
    case Type::K::Club:
      throw ill_formed_formula("the opaque base type has no monadic counterpart");
  }
  throw std::logic_error("unreachable");
}

}  // namespace fat
