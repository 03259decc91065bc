#include "fat/search.hpp"

#include <algorithm>
#include <vector>

namespace fat {

namespace {

bool atom_match(const TypePtr& a, const TypePtr& goal) {
  if (a->k != goal->k) return false;
  if (a->k == Type::K::Var) return a->name == goal->name;
  return a->k == Type::K::Club;
}

// Whether eliminating a hypothesis of this type could ever end in the goal
// atom: the final codomain must be the goal, or a quantified variable (which
// atomic instantiation can send to any variable in scope).
bool may_target(const TypePtr& ty, const TypePtr& goal) {
  const Type* t = ty.get();
  std::vector<const std::string*> bound;
  while (true) {
    if (t->k == Type::K::Forall) {
      bound.push_back(&t->name);
      t = t->a.get();
    } else if (t->k == Type::K::Arrow) {
      t = t->b.get();
    } else {
      break;
    }
  }
  if (t->k == Type::K::Club) return goal->k == Type::K::Club;
  for (const std::string* b : bound)
    if (*b == t->name) return goal->k == Type::K::Var;
  return goal->k == Type::K::Var && goal->name == t->name;
}

struct Searcher {
  std::vector<std::pair<std::string, TypePtr>> ctx;
  std::vector<std::string> tyvars;
  int vars = 0;

  std::string fresh_tyvar(const std::string& base) {
    std::string n = base;
    while (std::find(tyvars.begin(), tyvars.end(), n) != tyvars.end()) n += '\'';
    return n;
  }

  // Spine elimination of a hypothesis toward an atomic goal. Reaching the
  // goal is free; every instantiation or application step costs one.
  std::optional<TermPtr> elim(const TermPtr& head, const TypePtr& ty,
                              const TypePtr& goal, int depth) {
    if (atom_match(ty, goal)) return head;
    if (depth <= 0) return std::nullopt;
    if (ty->k == Type::K::Forall) {
      std::vector<std::string> witnesses = tyvars;
      witnesses.push_back(fresh_tyvar("W"));
      for (const auto& w : witnesses) {
        auto r = elim(mktyapp(head, tvar(w)),
                      substitute(ty->a, ty->name, tvar(w)), goal, depth - 1);
        if (r) return r;
      }
      return std::nullopt;
    }
    if (ty->k == Type::K::Arrow) {
      auto arg = prove(ty->a, depth - 1);
      if (!arg) return std::nullopt;
      return elim(mkapp(head, *arg), ty->b, goal, depth - 1);
    }
    return std::nullopt;
  }

  std::optional<TermPtr> prove(const TypePtr& goal, int depth) {
    switch (goal->k) {
      case Type::K::Forall: {
        if (depth <= 0) return std::nullopt;
        std::string x = fresh_tyvar(goal->name);
        tyvars.push_back(x);
        auto r = prove(substitute(goal->a, goal->name, tvar(x)), depth - 1);
        tyvars.pop_back();
        if (!r) return std::nullopt;
        return mktyabs(x, *r);
      }
      case Type::K::Arrow: {
        if (depth <= 0) return std::nullopt;
        std::string x = "x" + std::to_string(vars++);
        ctx.emplace_back(x, goal->a);
        auto r = prove(goal->b, depth - 1);
        ctx.pop_back();
        --vars;
        if (!r) return std::nullopt;
        return mkabs(x, *r);
      }
      case Type::K::Club:
        return mkstar();
      case Type::K::Var:
        for (size_t i = 0, n = ctx.size(); i < n; ++i) {
          std::string x = ctx[i].first;
          TypePtr ty = ctx[i].second;
          if (!may_target(ty, goal)) continue;
          auto r = elim(mkvar(x), ty, goal, depth);
          if (r) return r;
        }
        return std::nullopt;
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<TermPtr> bounded_search(const TypePtr& a, int depth) {
  Searcher s;
  for (const auto& v : free_type_vars(a)) s.tyvars.push_back(v);
  return s.prove(a, depth);
}

}  // namespace fat
