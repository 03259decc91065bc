#include "fat/fou.hpp"

namespace fat {

FoPtr fovar(std::string name) {
  auto t = std::make_shared<FoTerm>();
  t->k = FoTerm::K::Var;
  t->name = std::move(name);
  return t;
}

FoPtr foconst(std::string name) {
  auto t = std::make_shared<FoTerm>();
  t->k = FoTerm::K::Const;
  t->name = std::move(name);
  return t;
}

FoPtr foarrow(FoPtr l, FoPtr r) {
  auto t = std::make_shared<FoTerm>();
  t->k = FoTerm::K::Arrow;
  t->l = std::move(l);
  t->r = std::move(r);
  return t;
}

bool fo_eq(const FoPtr& a, const FoPtr& b) {
  if (a->k != b->k) return false;
  switch (a->k) {
    case FoTerm::K::Var:
    case FoTerm::K::Const:
      return a->name == b->name;
    case FoTerm::K::Arrow:
      return fo_eq(a->l, b->l) && fo_eq(a->r, b->r);
  }
  return false;
}

std::string print_fo(const FoPtr& t) {
  switch (t->k) {
    case FoTerm::K::Var:
    case FoTerm::K::Const:
      return t->name;
    case FoTerm::K::Arrow: {
      std::string l = print_fo(t->l);
      if (t->l->k == FoTerm::K::Arrow) l = "(" + l + ")";
      return l + " -> " + print_fo(t->r);
    }
  }
  return "";
}

namespace {

struct Solver {
  std::map<std::string, FoPtr> bind;

  FoPtr resolve(FoPtr t) {
    while (t->k == FoTerm::K::Var) {
      auto it = bind.find(t->name);
      if (it == bind.end()) break;
      t = it->second;
    }
    return t;
  }

  bool occurs(const std::string& v, FoPtr t) {
    t = resolve(t);
    switch (t->k) {
      case FoTerm::K::Var:
        return t->name == v;
      case FoTerm::K::Const:
        return false;
      case FoTerm::K::Arrow:
        return occurs(v, t->l) || occurs(v, t->r);
    }
    return false;
  }

  std::optional<FoFail> unify(FoPtr a, FoPtr b) {
    a = resolve(a);
    b = resolve(b);
    if (a->k == FoTerm::K::Var) {
      if (b->k == FoTerm::K::Var && a->name == b->name) return std::nullopt;
      if (occurs(a->name, b)) return FoFail::Cycle;
      bind[a->name] = b;
      return std::nullopt;
    }
    if (b->k == FoTerm::K::Var) return unify(b, a);
    if (a->k != b->k) return FoFail::Clash;
    if (a->k == FoTerm::K::Const) return a->name == b->name ? std::nullopt : std::optional(FoFail::Clash);
    if (auto f = unify(a->l, b->l)) return f;
    return unify(a->r, b->r);
  }

  FoPtr deep(FoPtr t) {
    t = resolve(t);
    if (t->k == FoTerm::K::Arrow) return foarrow(deep(t->l), deep(t->r));
    return t;
  }
};

}  // namespace

FoResult fo_unify(const FoProblem& p) {
  Solver s;
  for (const auto& [l, r] : p.equations) {
    if (auto f = s.unify(l, r)) return *f;
  }
  FoSubstitution out;
  for (const auto& [v, _] : s.bind) out[v] = s.deep(fovar(v));
  return out;
}

FoPtr fo_apply(const FoSubstitution& s, const FoPtr& t) {
  switch (t->k) {
    case FoTerm::K::Var: {
      auto it = s.find(t->name);
      return it == s.end() ? t : it->second;
    }
    case FoTerm::K::Const:
      return t;
    case FoTerm::K::Arrow:
      return foarrow(fo_apply(s, t->l), fo_apply(s, t->r));
  }
  return t;
}

namespace {

FoPtr simple_to_fo(const SimplePtr& a) {
  if (!a->arrow) return foconst("o");
  return foarrow(simple_to_fo(a->dom), simple_to_fo(a->cod));
}

struct StlcGen {
  FoProblem prob;
  int next = 0;

  FoPtr fresh() { return fovar("t" + std::to_string(next++)); }

  // Returns the type variable of t, or nullptr on an unbound variable.
  FoPtr walk(const TermPtr& t, std::map<std::string, FoPtr>& env) {
    switch (t->k) {
      case Term::K::Var: {
        auto it = env.find(t->name);
        if (it == env.end()) return nullptr;
        return it->second;
      }
      case Term::K::Star:
        return foconst("o");
      case Term::K::Abs: {
        FoPtr dom = fresh();
        auto it = env.find(t->name);
        std::optional<FoPtr> saved;
        if (it != env.end()) saved = it->second;
        env[t->name] = dom;
        FoPtr cod = walk(t->body, env);
        if (saved)
          env[t->name] = *saved;
        else
          env.erase(t->name);
        if (!cod) return nullptr;
        return foarrow(dom, cod);
      }
      case Term::K::App: {
        FoPtr f = walk(t->fun, env);
        FoPtr a = walk(t->arg, env);
        if (!f || !a) return nullptr;
        FoPtr res = fresh();
        prob.equations.emplace_back(f, foarrow(a, res));
        return res;
      }
      default:
        return nullptr;  // not Curry-style
    }
  }
};

}  // namespace

bool stlc_typecheck(const std::map<std::string, SimplePtr>& ctx, const TermPtr& t, const SimplePtr& a) {
  StlcGen gen;
  std::map<std::string, FoPtr> env;
  for (const auto& [x, ty] : ctx) env[x] = simple_to_fo(ty);
  FoPtr ty = gen.walk(t, env);
  if (!ty) return false;
  gen.prob.equations.emplace_back(ty, simple_to_fo(a));
  return std::holds_alternative<FoSubstitution>(fo_unify(gen.prob));
}

std::optional<FoPtr> stlc_infer(const std::map<std::string, SimplePtr>& ctx, const TermPtr& t) {
  StlcGen gen;
  std::map<std::string, FoPtr> env;
  for (const auto& [x, ty] : ctx) env[x] = simple_to_fo(ty);
  FoPtr ty = gen.walk(t, env);
  if (!ty) return std::nullopt;
  auto res = fo_unify(gen.prob);
  auto* sub = std::get_if<FoSubstitution>(&res);
  if (!sub) return std::nullopt;
  return fo_apply(*sub, ty);
}

SimplePtr ground_simple(const FoPtr& t) {
  switch (t->k) {
    case FoTerm::K::Var:
    case FoTerm::K::Const:
      return sbase();
    case FoTerm::K::Arrow:
      return sarrow(ground_simple(t->l), ground_simple(t->r));
  }
  return sbase();
}

}  // namespace fat
