#include "fat/reduction.hpp"

namespace fat {

namespace {

TermPtr whnf(TermPtr t, Fuel& fuel) {
  for (;;) {
    if (t->k == Term::K::App) {
      TermPtr f = whnf(t->fun, fuel);
      if (f->k == Term::K::Abs) {
        fuel.spend();
        t = subst_term(f->body, f->name, t->arg);
        continue;
      }
      if (f == t->fun) return t;
      return mkapp(f, t->arg);
    }
    if (t->k == Term::K::TyApp) {
      TermPtr f = whnf(t->fun, fuel);
      if (f->k == Term::K::TyAbs) {
        fuel.spend();
        t = subst_type_in_term(f->body, f->name, t->witness);
        continue;
      }
      if (f == t->fun) return t;
      return mktyapp(f, t->witness);
    }
    return t;
  }
}

TermPtr nf_lo(TermPtr t, Fuel& fuel) {
  t = whnf(t, fuel);
  switch (t->k) {
    case Term::K::Var:
    case Term::K::Star:
      return t;
    case Term::K::Abs:
      return mkabs(t->name, nf_lo(t->body, fuel));
    case Term::K::TyAbs:
      return mktyabs(t->name, nf_lo(t->body, fuel));
    case Term::K::App:
      return mkapp(nf_lo(t->fun, fuel), nf_lo(t->arg, fuel));
    case Term::K::TyApp:
      return mktyapp(nf_lo(t->fun, fuel), t->witness);
  }
  return t;
}

TermPtr nf_ri(TermPtr t, Fuel& fuel) {
  switch (t->k) {
    case Term::K::Var:
    case Term::K::Star:
      return t;
    case Term::K::Abs:
      return mkabs(t->name, nf_ri(t->body, fuel));
    case Term::K::TyAbs:
      return mktyabs(t->name, nf_ri(t->body, fuel));
    case Term::K::App: {
      TermPtr arg = nf_ri(t->arg, fuel);
      TermPtr fun = nf_ri(t->fun, fuel);
      if (fun->k == Term::K::Abs) {
        fuel.spend();
        return nf_ri(subst_term(fun->body, fun->name, arg), fuel);
      }
      return mkapp(fun, arg);
    }
    case Term::K::TyApp: {
      TermPtr fun = nf_ri(t->fun, fuel);
      if (fun->k == Term::K::TyAbs) {
        fuel.spend();
        return nf_ri(subst_type_in_term(fun->body, fun->name, t->witness), fuel);
      }
      return mktyapp(fun, t->witness);
    }
  }
  return t;
}

TermPtr eta_reduce(const TermPtr& t) {
  TermPtr r = t;
  switch (r->k) {
    case Term::K::Var:
    case Term::K::Star:
      return r;
    case Term::K::Abs:
      r = mkabs(r->name, eta_reduce(r->body));
      break;
    case Term::K::TyAbs:
      r = mktyabs(r->name, eta_reduce(r->body));
      break;
    case Term::K::App:
      return mkapp(eta_reduce(t->fun), eta_reduce(t->arg));
    case Term::K::TyApp:
      return mktyapp(eta_reduce(t->fun), t->witness);
  }
  for (;;) {
    if (r->k == Term::K::Abs && r->body->k == Term::K::App && r->body->arg->k == Term::K::Var &&
        r->body->arg->name == r->name && !free_term_vars(r->body->fun).count(r->name)) {
      r = r->body->fun;
      continue;
    }
    if (r->k == Term::K::TyAbs && r->body->k == Term::K::TyApp && r->body->witness->k == Type::K::Var &&
        r->body->witness->name == r->name && !free_type_vars_in_term(r->body->fun).count(r->name)) {
      r = r->body->fun;
      continue;
    }
    return r;
  }
}

}  // namespace

TermPtr beta_normalize(const TermPtr& t, Fuel& fuel, Strategy strategy) {
  return strategy == Strategy::LeftmostOutermost ? nf_lo(t, fuel) : nf_ri(t, fuel);
}

TermPtr beta_normalize(const TermPtr& t, int64_t fuel, Strategy strategy) {
  Fuel f{fuel};
  return beta_normalize(t, f, strategy);
}

TermPtr betaeta_normal_form(const TermPtr& t, int64_t fuel) {
  return eta_reduce(beta_normalize(t, fuel));
}

bool betaeta_equal(const TermPtr& a, const TermPtr& b, int64_t fuel) {
  return alpha_eq(betaeta_normal_form(a, fuel), betaeta_normal_form(b, fuel));
}

TermPtr church_numeral(uint64_t n) {
  TermPtr body = mkvar("x");
  for (uint64_t i = 0; i < n; ++i) body = mkapp(mkvar("f"), body);
  return mkabs("f", mkabs("x", body));
}

TermPtr church_true() { return mkabs("x", mkabs("y", mkvar("x"))); }
TermPtr church_false() { return mkabs("x", mkabs("y", mkvar("y"))); }

std::optional<uint64_t> read_numeral(const TermPtr& t) {
  TermPtr r = t;
  while (r->k == Term::K::TyAbs) r = r->body;
  if (r->k != Term::K::Abs) return std::nullopt;
  const std::string& f = r->name;
  // eta-short numeral 1
  if (r->body->k == Term::K::Var && r->body->name == f) return 1;
  if (r->body->k != Term::K::Abs) return std::nullopt;
  const std::string& x = r->body->name;
  if (x == f) return std::nullopt;
  TermPtr spine = r->body->body;
  uint64_t n = 0;
  while (spine->k == Term::K::App) {
    if (spine->fun->k != Term::K::Var || spine->fun->name != f) return std::nullopt;
    ++n;
    spine = spine->arg;
  }
  if (spine->k != Term::K::Var || spine->name != x) return std::nullopt;
  return n;
}

std::optional<bool> read_boolean(const TermPtr& t) {
  TermPtr r = t;
  while (r->k == Term::K::TyAbs) r = r->body;
  if (r->k != Term::K::Abs || r->body->k != Term::K::Abs) return std::nullopt;
  const std::string& x = r->name;
  const std::string& y = r->body->name;
  if (x == y) return std::nullopt;
  TermPtr body = r->body->body;
  if (body->k != Term::K::Var) return std::nullopt;
  if (body->name == x) return true;
  if (body->name == y) return false;
  return std::nullopt;
}

}  // namespace fat
