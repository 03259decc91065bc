#include "fat/encodings.hpp"

#include <stdexcept>

namespace fat {

namespace {

NameSupply supply_for(std::initializer_list<TypePtr> types, std::initializer_list<TermPtr> terms) {
  NameSupply s;
  s.note(kHole);
  for (const TypePtr& a : types)
    if (a) s.note_type(a);
  for (const TermPtr& t : terms)
    if (t) s.note_term(t);
  return s;
}

// Shared inductive construction of the overflow contexts. At each arrow or
// quantifier layer the sub-eliminator for the codomain is applied to branch
// functions that push the extra argument (or witness) inside.
TermPtr io_context(const TypePtr& C, bool sum, NameSupply& supply) {
  switch (C->k) {
    case Type::K::Var:
      return mktyapp(mkvar(kHole), C);
    case Type::K::Club:
      throw std::invalid_argument("overflow context: result type has a # base");
    case Type::K::Arrow: {
      std::string f = supply.fresh("f");
      std::string y = supply.fresh("y");
      std::string z = supply.fresh("z");
      TermPtr rec = io_context(C->b, sum, supply);
      if (sum) {
        std::string g = supply.fresh("g");
        TermPtr left = mkabs(z, mkapp(mkapp(mkvar(f), mkvar(z)), mkvar(y)));
        TermPtr right = mkabs(z, mkapp(mkapp(mkvar(g), mkvar(z)), mkvar(y)));
        return mkabs(f, mkabs(g, mkabs(y, mkapp(mkapp(rec, left), right))));
      }
      std::string w = supply.fresh("w");
      TermPtr both =
          mkabs(z, mkabs(w, mkapp(mkapp(mkapp(mkvar(f), mkvar(z)), mkvar(w)), mkvar(y))));
      return mkabs(f, mkabs(y, mkapp(rec, both)));
    }
    case Type::K::Forall: {
      std::string f = supply.fresh("f");
      std::string z = supply.fresh("z");
      std::string Y = supply.fresh(C->name);
      TypePtr body = substitute(C->a, C->name, tvar(Y));
      TermPtr rec = io_context(body, sum, supply);
      if (sum) {
        std::string g = supply.fresh("g");
        TermPtr left = mkabs(z, mktyapp(mkapp(mkvar(f), mkvar(z)), tvar(Y)));
        TermPtr right = mkabs(z, mktyapp(mkapp(mkvar(g), mkvar(z)), tvar(Y)));
        return mkabs(f, mkabs(g, mktyabs(Y, mkapp(mkapp(rec, left), right))));
      }
      std::string w = supply.fresh("w");
      TermPtr both =
          mkabs(z, mkabs(w, mktyapp(mkapp(mkapp(mkvar(f), mkvar(z)), mkvar(w)), tvar(Y))));
      return mkabs(f, mktyabs(Y, mkapp(rec, both)));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

TermPtr fill_hole(const TermPtr& context, const TermPtr& t) {
  return subst_term(context, kHole, t);
}

TypePtr encoded_sum(const TypePtr& A, const TypePtr& B) {
  NameSupply s = supply_for({A, B}, {});
  std::string X = s.fresh("X");
  return tforall(X, tarrow(tarrow(A, tvar(X)), tarrow(tarrow(B, tvar(X)), tvar(X))));
}

TypePtr encoded_prod(const TypePtr& A, const TypePtr& B) {
  NameSupply s = supply_for({A, B}, {});
  std::string X = s.fresh("X");
  return tforall(X, tarrow(tarrow(A, tarrow(B, tvar(X))), tvar(X)));
}

TermPtr inj(int i, const TermPtr& t, const TypePtr& A, const TypePtr& B) {
  if (i != 1 && i != 2) throw std::invalid_argument("inj: index must be 1 or 2");
  NameSupply s = supply_for({A, B}, {t});
  std::string X = s.fresh("X");
  std::string f = s.fresh("f");
  std::string g = s.fresh("g");
  return mktyabs(X, mkabs(f, mkabs(g, mkapp(mkvar(i == 1 ? f : g), t))));
}

TermPtr pair_term(const TermPtr& t, const TermPtr& u, const TypePtr& A, const TypePtr& B) {
  NameSupply s = supply_for({A, B}, {t, u});
  std::string X = s.fresh("X");
  std::string f = s.fresh("f");
  return mktyabs(X, mkabs(f, mkapp(mkapp(mkvar(f), t), u)));
}

TermPtr proj(int i, const TermPtr& t, const TypePtr& A, const TypePtr& B) {
  if (i != 1 && i != 2) throw std::invalid_argument("proj: index must be 1 or 2");
  NameSupply s = supply_for({A, B}, {t});
  std::string x = s.fresh("x");
  std::string y = s.fresh("y");
  TermPtr sel = mkabs(x, mkabs(y, mkvar(i == 1 ? x : y)));
  return mkapp(mktyapp(t, i == 1 ? A : B), sel);
}

TermPtr io_plus_context(const TypePtr& A, const TypePtr& B, const TypePtr& C) {
  NameSupply s = supply_for({A, B, C}, {});
  return io_context(C, true, s);
}

TermPtr io_times_context(const TypePtr& A, const TypePtr& B, const TypePtr& C) {
  NameSupply s = supply_for({A, B, C}, {});
  return io_context(C, false, s);
}

TermPtr case_predicative(const TermPtr& t, const std::string& x, const TermPtr& u,
                         const std::string& y, const TermPtr& v, const TypePtr& A,
                         const TypePtr& B, const TypePtr& C) {
  TermPtr k = fill_hole(io_plus_context(A, B, C), t);
  return mkapp(mkapp(k, mkabs(x, u)), mkabs(y, v));
}

TermPtr split_predicative(const TermPtr& t, const std::string& x, const std::string& y,
                          const TermPtr& u, const TypePtr& A, const TypePtr& B,
                          const TypePtr& C) {
  TermPtr k = fill_hole(io_times_context(A, B, C), t);
  return mkapp(k, mkabs(x, mkabs(y, u)));
}

bool witnesses_atomic(const TermPtr& t) {
  switch (t->k) {
    case Term::K::Var:
    case Term::K::Star:
      return true;
    case Term::K::Abs:
    case Term::K::TyAbs:
      return witnesses_atomic(t->body);
    case Term::K::App:
      return witnesses_atomic(t->fun) && witnesses_atomic(t->arg);
    case Term::K::TyApp:
      return t->witness->k == Type::K::Var && witnesses_atomic(t->fun);
  }
  return true;
}

}  // namespace fat
