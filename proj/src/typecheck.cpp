#include "fat/typecheck.hpp"

#include <algorithm>
#include <stdexcept>

#include "fat/fou.hpp"

namespace fat {

using unif::ArityLink;
using unif::Decls;
using unif::LengthPin;
using unif::QType;
using unif::SeqExpr;
using unif::slit;
using unif::sproj;
using unif::StarExpr;
using unif::StarPtr;
using unif::svar;
using unif::UnifProblem;
using unif::UnifSubstitution;

namespace {

SeqExpr seq_of(const std::string& v) { return svar(v); }

StarPtr rewrite_extend(const StarPtr& e, const std::string& a,
                       std::set<std::string>& projs, std::set<std::string>& metas) {
  switch (e->k) {
    case StarExpr::K::Var:
      return e;
    case StarExpr::K::Pi: {
      SeqExpr s = e->seq;
      if (s.k == SeqExpr::K::Proj) {
        projs.insert(s.var);
        s.args.push_back(a);
      }
      return unif::epi(e->index, std::move(s));
    }
    case StarExpr::K::Meta: {
      metas.insert(e->name);
      std::vector<SeqExpr> args;
      for (const auto& s : e->args) {
        SeqExpr t = s;
        if (t.k == SeqExpr::K::Proj) {
          projs.insert(t.var);
          t.args.push_back(a);
        }
        args.push_back(std::move(t));
      }
      args.push_back(seq_of(a));
      return unif::emeta(e->name, std::move(args));
    }
    case StarExpr::K::Arrow:
      return unif::earrow(QType{e->l.binder, rewrite_extend(e->l.body, a, projs, metas)},
                          QType{e->r.binder, rewrite_extend(e->r.body, a, projs, metas)});
  }
  return e;
}

}  // namespace

void extend_equations(std::vector<std::pair<StarPtr, StarPtr>>& eqs, Decls& decls,
                      const std::string& a) {
  std::set<std::string> projs, metas;
  for (auto& [l, r] : eqs) {
    l = rewrite_extend(l, a, projs, metas);
    r = rewrite_extend(r, a, projs, metas);
  }
  for (const auto& p : projs) decls.proj_vars.at(p) += 1;
  for (const auto& m : metas) decls.meta_vars.at(m) += 1;
}

// ---------------------------------------------------------------------------
// Equation generation
// ---------------------------------------------------------------------------

namespace {

struct GenState {
  Decls decls;
  std::vector<unif::Constraint> constraints;
  VarAllocation alloc;
  int counter = 0;

  std::string fresh(const char* stem) { return std::string(stem) + "@" + std::to_string(counter++); }
};

struct Node {
  std::string b, G;
  std::vector<std::pair<StarPtr, StarPtr>> eqs;
  std::map<std::string, std::vector<std::string>> occs;  // term var -> occurrence paths
  std::vector<std::vector<std::string>*> trails;          // trails of all slots below
};

void extend_node(GenState& st, Node& n, const std::string& a) {
  extend_equations(n.eqs, st.decls, a);
  for (auto* tr : n.trails) tr->push_back(a);
}

Node gen(GenState& st, const TermPtr& t, const std::string& path) {
  Node out;
  switch (t->k) {
    case Term::K::Var:
    case Term::K::Star: {
      VarAllocation::VarSlot slot;
      slot.a = st.fresh("a");
      slot.b = st.fresh("b");
      slot.alpha = st.fresh("al");
      slot.F = st.fresh("F");
      slot.G = st.fresh("G");
      st.decls.seq_vars.insert(slot.a);
      st.decls.seq_vars.insert(slot.b);
      st.decls.proj_vars[slot.alpha] = 1;
      st.decls.meta_vars[slot.F] = 1;
      st.decls.meta_vars[slot.G] = 1;
      st.constraints.push_back(ArityLink{slot.alpha, slot.a});
      out.eqs.emplace_back(unif::emeta(slot.F, {sproj(slot.alpha, {slot.b})}),
                           unif::emeta(slot.G, {seq_of(slot.b)}));
      out.b = slot.b;
      out.G = slot.G;
      std::string key = t->k == Term::K::Star ? "*" : t->name;
      out.occs[key].push_back(path);
      auto& stored = st.alloc.vars[path] = slot;
      out.trails.push_back(&stored.trail);
      return out;
    }
    case Term::K::Abs: {
      Node body = gen(st, t->body, path + ".0");
      VarAllocation::AbsSlot slot;
      slot.b = st.fresh("b");
      slot.G = st.fresh("G");
      st.decls.seq_vars.insert(slot.b);
      st.decls.meta_vars[slot.G] = 1;
      extend_node(st, body, slot.b);

      auto occ_it = body.occs.find(t->name);
      std::vector<std::string> occ_paths;
      if (occ_it != body.occs.end()) {
        occ_paths = occ_it->second;
        body.occs.erase(occ_it);
      } else {
        // unused binder: a ghost slot keeps the abstraction clause well-formed
        VarAllocation::VarSlot ghost;
        ghost.a = st.fresh("a");
        ghost.b = st.fresh("b");  // unreferenced
        ghost.alpha = st.fresh("al");
        ghost.F = st.fresh("F");
        ghost.G = st.fresh("G");  // unreferenced
        st.decls.seq_vars.insert(ghost.a);
        st.decls.seq_vars.insert(ghost.b);
        st.decls.proj_vars[ghost.alpha] = 1;
        st.decls.meta_vars[ghost.F] = 2;
        st.decls.meta_vars[ghost.G] = 1;
        st.constraints.push_back(ArityLink{ghost.alpha, ghost.a});
        ghost.trail.push_back(slot.b);
        auto& stored = st.alloc.vars[path + ".ghost"] = ghost;
        out.trails.push_back(&stored.trail);
        occ_paths.push_back(path + ".ghost");
      }
      for (const auto& p : occ_paths) {
        const auto& vs = st.alloc.vars.at(p);
        std::vector<SeqExpr> fargs{seq_of(vs.a)};
        for (const auto& tr : vs.trail) fargs.push_back(seq_of(tr));
        std::vector<SeqExpr> gargs{seq_of(body.b)};
        gargs.push_back(seq_of(slot.b));
        out.eqs.emplace_back(
            unif::emeta(slot.G, {seq_of(slot.b)}),
            unif::earrow(QType{vs.a, unif::emeta(vs.F, std::move(fargs))},
                         QType{body.b, unif::emeta(body.G, std::move(gargs))}));
      }
      out.eqs.insert(out.eqs.begin(), body.eqs.begin(), body.eqs.end());
      out.b = slot.b;
      out.G = slot.G;
      out.occs = std::move(body.occs);
      out.trails.insert(out.trails.end(), body.trails.begin(), body.trails.end());
      auto& stored = st.alloc.abss[path] = slot;
      out.trails.push_back(&stored.trail);
      return out;
    }
    case Term::K::App: {
      Node fun = gen(st, t->fun, path + ".0");
      Node arg = gen(st, t->arg, path + ".1");
      VarAllocation::AppSlot slot;
      slot.a = st.fresh("a");
      slot.b = st.fresh("b");
      slot.alpha = st.fresh("al");
      slot.F = st.fresh("F");
      slot.G = st.fresh("G");
      st.decls.seq_vars.insert(slot.a);
      st.decls.seq_vars.insert(slot.b);
      st.decls.proj_vars[slot.alpha] = 1;
      st.decls.meta_vars[slot.F] = 2;
      st.decls.meta_vars[slot.G] = 1;
      extend_node(st, fun, slot.b);
      extend_node(st, arg, slot.b);
      st.constraints.push_back(ArityLink{slot.alpha, slot.a});
      st.constraints.push_back(LengthPin{fun.b, 0});

      out.eqs = std::move(fun.eqs);
      out.eqs.insert(out.eqs.end(), arg.eqs.begin(), arg.eqs.end());
      out.eqs.emplace_back(
          unif::emeta(fun.G, {seq_of(fun.b), seq_of(slot.b)}),
          unif::earrow(QType{arg.b, unif::emeta(arg.G, {seq_of(arg.b), seq_of(slot.b)})},
                       QType{slot.a, unif::emeta(slot.F, {seq_of(slot.a), seq_of(slot.b)})}));
      out.eqs.emplace_back(
          unif::emeta(slot.F, {sproj(slot.alpha, {slot.b}), seq_of(slot.b)}),
          unif::emeta(slot.G, {seq_of(slot.b)}));
      out.b = slot.b;
      out.G = slot.G;
      out.occs = std::move(fun.occs);
      for (auto& [k, v] : arg.occs) {
        auto& dst = out.occs[k];
        dst.insert(dst.end(), v.begin(), v.end());
      }
      out.trails = std::move(fun.trails);
      out.trails.insert(out.trails.end(), arg.trails.begin(), arg.trails.end());
      auto& stored = st.alloc.apps[path] = slot;
      out.trails.push_back(&stored.trail);
      return out;
    }
    default:
      throw std::invalid_argument("constraint generation requires a Curry-style term");
  }
}

std::vector<std::string> prefix_binders(const TypePtr& a) {
  std::vector<std::string> out;
  const Type* t = a.get();
  while (t->k == Type::K::Forall) {
    out.push_back(t->name);
    t = t->a.get();
  }
  return out;
}

TypePtr strip_prefix(TypePtr a, size_t n) {
  while (n-- > 0) a = a->a;
  return a;
}

// Lowers a prefix-free concrete type into the unification language. Inner
// quantifier blocks become fresh binder sequence variables whose positions are
// pinned to the concrete names; unquantified arrow sides get a length-0 pin.
StarPtr embed(GenState& st, std::vector<std::pair<StarPtr, StarPtr>>& eqs, const TypePtr& a) {
  switch (a->k) {
    case Type::K::Var:
      return unif::evar(a->name);
    case Type::K::Club:
      return unif::evar("#");
    case Type::K::Arrow: {
      auto side = [&](const TypePtr& c) {
        auto binders = prefix_binders(c);
        std::string e = st.fresh("e");
        st.decls.seq_vars.insert(e);
        st.constraints.push_back(LengthPin{e, static_cast<int>(binders.size())});
        for (size_t i = 0; i < binders.size(); ++i)
          eqs.emplace_back(unif::epi(static_cast<int>(i) + 1, seq_of(e)), unif::evar(binders[i]));
        return QType{e, embed(st, eqs, strip_prefix(c, binders.size()))};
      };
      QType l = side(a->a);
      QType r = side(a->b);
      return unif::earrow(std::move(l), std::move(r));
    }
    case Type::K::Forall:
      throw std::logic_error("embed received a quantified type");
  }
  return nullptr;
}

}  // namespace

std::pair<std::vector<std::pair<StarPtr, StarPtr>>, VarAllocation> gen_equations(const TermPtr& t) {
  GenState st;
  Node n = gen(st, t, "0");
  st.alloc.root_b = n.b;
  st.alloc.root_G = n.G;
  return {std::move(n.eqs), std::move(st.alloc)};
}

UnifProblem gen_problem(const TypingContext& ctx, const TermPtr& t, const TypePtr& a,
                        VarAllocation* alloc_out, TypingContext* renamed_ctx,
                        TypePtr* renamed_goal) {
  NameSupply supply;
  for (const auto& [_, c] : ctx)
    for (const auto& v : all_type_names(c)) supply.note(v);
  for (const auto& v : all_type_names(a)) supply.note(v);
  TypingContext rctx;
  for (const auto& [x, c] : ctx) rctx[x] = barendregt_rename(c, supply);
  TypePtr goal = barendregt_rename(a, supply);

  GenState st;
  Node n = gen(st, t, "0");
  st.alloc.root_b = n.b;
  st.alloc.root_G = n.G;

  // root boundary
  {
    auto binders = prefix_binders(goal);
    TypePtr body = strip_prefix(goal, binders.size());
    n.eqs.emplace_back(unif::emeta(n.G, {slit(binders)}), embed(st, n.eqs, body));
    st.constraints.push_back(LengthPin{n.b, static_cast<int>(binders.size())});
    for (size_t i = 0; i < binders.size(); ++i)
      n.eqs.emplace_back(unif::epi(static_cast<int>(i) + 1, seq_of(n.b)), unif::evar(binders[i]));
  }
  // context boundaries, one per free occurrence
  for (const auto& [x, paths] : n.occs) {
    TypePtr c;
    if (x == "*") {
      c = tclub();
    } else {
      auto it = rctx.find(x);
      if (it == rctx.end()) throw std::invalid_argument("unbound term variable " + x);
      c = it->second;
    }
    auto binders = prefix_binders(c);
    TypePtr body = strip_prefix(c, binders.size());
    for (const auto& p : paths) {
      const auto& slot = st.alloc.vars.at(p);
      std::vector<SeqExpr> fargs{slit(binders)};
      for (const auto& tr : slot.trail) fargs.push_back(seq_of(tr));
      n.eqs.emplace_back(unif::emeta(slot.F, std::move(fargs)), embed(st, n.eqs, body));
      st.constraints.push_back(LengthPin{slot.a, static_cast<int>(binders.size())});
      for (size_t i = 0; i < binders.size(); ++i)
        n.eqs.emplace_back(unif::epi(static_cast<int>(i) + 1, seq_of(slot.a)),
                           unif::evar(binders[i]));
    }
  }

  UnifProblem out;
  out.decls = std::move(st.decls);
  out.equations = std::move(n.eqs);
  out.constraints = std::move(st.constraints);
  if (alloc_out) *alloc_out = std::move(st.alloc);
  if (renamed_ctx) *renamed_ctx = std::move(rctx);
  if (renamed_goal) *renamed_goal = std::move(goal);
  unif::validate_problem(out);
  return out;
}

// ---------------------------------------------------------------------------
// Certificate validation
// ---------------------------------------------------------------------------

namespace {

std::set<std::string> ctx_free_vars(const TypingContext& ctx) {
  std::set<std::string> out;
  for (const auto& [_, a] : ctx) {
    auto fv = free_type_vars(a);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

TypePtr subst_simultaneous(TypePtr a, const std::vector<std::string>& from,
                           const std::vector<std::string>& to) {
  NameSupply supply;
  for (const auto& v : all_type_names(a)) supply.note(v);
  for (const auto& v : from) supply.note(v);
  for (const auto& v : to) supply.note(v);
  std::vector<std::string> temps;
  for (size_t i = 0; i < from.size(); ++i) {
    temps.push_back(supply.fresh("tmp"));
    a = substitute(a, from[i], tvar(temps.back()));
  }
  for (size_t i = 0; i < from.size(); ++i) a = substitute(a, temps[i], tvar(to[i]));
  return a;
}

// A with its first n quantifiers instantiated at the given witnesses.
std::optional<TypePtr> instantiate(const TypePtr& a, const std::vector<std::string>& witnesses) {
  std::vector<std::string> binders;
  const Type* t = a.get();
  for (size_t i = 0; i < witnesses.size(); ++i) {
    if (t->k != Type::K::Forall) return std::nullopt;
    binders.push_back(t->name);
    t = t->a.get();
  }
  std::set<std::string> distinct(binders.begin(), binders.end());
  if (distinct.size() != binders.size()) return std::nullopt;
  for (const auto& w : witnesses)
    if (w.empty() || w == "#") return std::nullopt;  // witnesses are type variables
  return subst_simultaneous(strip_prefix(a, witnesses.size()), binders, witnesses);
}

bool ctx_eq(const TypingContext& a, const TypingContext& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [x, t] : a) {
    auto it = b.find(x);
    if (it == b.end() || !alpha_eq(t, it->second)) return false;
  }
  return true;
}

TypePtr generalize(const std::vector<std::string>& gens, TypePtr body) {
  for (auto it = gens.rbegin(); it != gens.rend(); ++it) body = tforall(*it, body);
  return body;
}

bool check_node(const SyntheticDerivation& d) {
  std::set<std::string> fv = ctx_free_vars(d.ctx);
  std::set<std::string> distinct(d.gens.begin(), d.gens.end());
  if (distinct.size() != d.gens.size()) return false;
  for (const auto& g : d.gens)
    if (fv.count(g)) return false;

  switch (d.rule) {
    case SyntheticDerivation::Rule::Var: {
      if (!d.kids.empty()) return false;
      TypePtr declared;
      if (d.term->k == Term::K::Star) {
        declared = tclub();
      } else if (d.term->k == Term::K::Var) {
        auto it = d.ctx.find(d.term->name);
        if (it == d.ctx.end()) return false;
        declared = it->second;
      } else {
        return false;
      }
      auto inst = instantiate(declared, d.witnesses);
      if (!inst) return false;
      return alpha_eq(d.type, generalize(d.gens, *inst));
    }
    case SyntheticDerivation::Rule::Abs: {
      if (d.term->k != Term::K::Abs || d.kids.size() != 1 || !d.witnesses.empty()) return false;
      // peel the generalization prefix off the conclusion
      TypePtr body = d.type;
      for (const auto& g : d.gens) {
        if (body->k != Type::K::Forall || body->name != g) return false;
        body = body->a;
      }
      if (body->k != Type::K::Arrow) return false;
      const auto& kid = *d.kids[0];
      if (!alpha_eq(kid.term, d.term->body)) return false;
      TypingContext expected = d.ctx;
      expected[d.term->name] = body->a;
      if (!ctx_eq(kid.ctx, expected)) return false;
      if (!alpha_eq(kid.type, body->b)) return false;
      return check_node(kid);
    }
    case SyntheticDerivation::Rule::App: {
      if (d.term->k != Term::K::App || d.kids.size() != 2) return false;
      const auto& fun = *d.kids[0];
      const auto& arg = *d.kids[1];
      if (!alpha_eq(fun.term, d.term->fun) || !alpha_eq(arg.term, d.term->arg)) return false;
      if (!ctx_eq(fun.ctx, d.ctx) || !ctx_eq(arg.ctx, d.ctx)) return false;
      if (fun.type->k != Type::K::Arrow) return false;
      if (!alpha_eq(fun.type->a, arg.type)) return false;
      auto inst = instantiate(fun.type->b, d.witnesses);
      if (!inst) return false;
      if (!alpha_eq(d.type, generalize(d.gens, *inst))) return false;
      return check_node(fun) && check_node(arg);
    }
  }
  return false;
}

}  // namespace

bool check_derivation(const DerivPtr& d) {
  if (!d) return false;
  return check_node(*d);
}

// ---------------------------------------------------------------------------
// Derivation reconstruction from a unifier
// ---------------------------------------------------------------------------

namespace {

TypePtr club_restore(const TypePtr& a) {
  switch (a->k) {
    case Type::K::Var:
      return a->name == "#" ? tclub() : a;
    case Type::K::Club:
      return a;
    case Type::K::Arrow:
      return tarrow(club_restore(a->a), club_restore(a->b));
    case Type::K::Forall:
      return tforall(a->name, club_restore(a->a));
  }
  return a;
}

// Renames free occurrences per sigma, leaving bound occurrences alone. The
// replacement names are globally fresh, so no capture can occur.
TypePtr rename_free(const TypePtr& a, const std::map<std::string, std::string>& sigma,
                    std::set<std::string>& bound) {
  switch (a->k) {
    case Type::K::Var: {
      if (!bound.count(a->name)) {
        auto it = sigma.find(a->name);
        if (it != sigma.end()) return tvar(it->second);
      }
      return a;
    }
    case Type::K::Club:
      return a;
    case Type::K::Arrow:
      return tarrow(rename_free(a->a, sigma, bound), rename_free(a->b, sigma, bound));
    case Type::K::Forall: {
      bool was = bound.count(a->name) > 0;
      bound.insert(a->name);
      TypePtr body = rename_free(a->a, sigma, bound);
      if (!was) bound.erase(a->name);
      return tforall(a->name, body);
    }
  }
  return a;
}

struct Rebuilder {
  const UnifSubstitution& S;
  const VarAllocation& alloc;
  NameSupply supply;

  std::vector<std::string> seq_values(const std::string& name) const { return S.seq.at(name); }

  TypePtr node_body(const std::string& G, const std::string& b,
                    const std::vector<std::string>& trail) const {
    std::vector<std::vector<std::string>> args{seq_values(b)};
    for (const auto& tr : trail) args.push_back(seq_values(tr));
    return club_restore(unif::apply_scheme(S.meta.at(G), args));
  }

  std::vector<std::string> witness_values(const std::string& alpha, const std::string& b,
                                          const std::vector<std::string>& trail) const {
    std::vector<std::string> argnames{b};
    for (const auto& tr : trail) argnames.push_back(tr);
    const unif::ProjAssign& pa = S.proj.at(alpha);
    std::vector<std::string> out;
    for (const auto& comp : pa.comps) {
      if (comp.is_var) {
        out.push_back(comp.var);
      } else {
        out.push_back(seq_values(argnames[static_cast<size_t>(comp.arg) - 1])
                          .at(static_cast<size_t>(comp.pos) - 1));
      }
    }
    return out;
  }

  DerivPtr build(const TermPtr& t, const std::string& path, const TypingContext& cur,
                 std::map<std::string, std::string> sigma) {
    std::string b, G, alpha;
    const std::vector<std::string>* trail = nullptr;
    switch (t->k) {
      case Term::K::Var:
      case Term::K::Star: {
        const auto& slot = alloc.vars.at(path);
        b = slot.b;
        G = slot.G;
        alpha = slot.alpha;
        trail = &slot.trail;
        break;
      }
      case Term::K::Abs: {
        const auto& slot = alloc.abss.at(path);
        b = slot.b;
        G = slot.G;
        trail = &slot.trail;
        break;
      }
      case Term::K::App: {
        const auto& slot = alloc.apps.at(path);
        b = slot.b;
        G = slot.G;
        alpha = slot.alpha;
        trail = &slot.trail;
        break;
      }
      default:
        throw std::invalid_argument("reconstruction requires a Curry-style term");
    }

    std::vector<std::string> raw_gens = seq_values(b);
    std::vector<std::string> gens;
    for (const auto& x : raw_gens) {
      std::string y = supply.fresh(x);
      sigma[x] = y;
      gens.push_back(y);
    }
    std::set<std::string> bound;
    TypePtr body = rename_free(node_body(G, b, *trail), sigma, bound);
    TypePtr type = generalize(gens, body);

    auto node = std::make_shared<SyntheticDerivation>();
    node->ctx = cur;
    node->term = t;
    node->type = type;
    node->gens = gens;

    switch (t->k) {
      case Term::K::Var:
      case Term::K::Star: {
        node->rule = SyntheticDerivation::Rule::Var;
        for (const auto& w : witness_values(alpha, b, *trail)) {
          auto it = sigma.find(w);
          node->witnesses.push_back(it == sigma.end() ? w : it->second);
        }
        break;
      }
      case Term::K::Abs: {
        node->rule = SyntheticDerivation::Rule::Abs;
        if (body->k != Type::K::Arrow)
          throw std::logic_error("abstraction node did not reconstruct to an arrow");
        TypingContext inner = cur;
        inner[t->name] = body->a;
        node->kids.push_back(build(t->body, path + ".0", inner, sigma));
        break;
      }
      case Term::K::App: {
        node->rule = SyntheticDerivation::Rule::App;
        for (const auto& w : witness_values(alpha, b, *trail)) {
          auto it = sigma.find(w);
          node->witnesses.push_back(it == sigma.end() ? w : it->second);
        }
        node->kids.push_back(build(t->fun, path + ".0", cur, sigma));
        node->kids.push_back(build(t->arg, path + ".1", cur, sigma));
        break;
      }
      default:
        break;
    }
    return node;
  }
};

}  // namespace

std::string reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::StlcFail:
      return "StlcFail";
    case RejectReason::Cycle:
      return "Cycle";
    case RejectReason::ArrowClash:
      return "ArrowClash";
    case RejectReason::Exhausted:
      return "Exhausted";
  }
  return "Exhausted";
}

CheckResult check(const TypingContext& ctx, const TermPtr& t, const TypePtr& a) {
  if (!is_curry(t)) throw std::invalid_argument("check requires a Curry-style term");

  // phase 0: the erased judgment must hold in the simply typed calculus
  std::map<std::string, SimplePtr> ectx;
  for (const auto& [x, c] : ctx) ectx[x] = erase_types(c);
  if (!stlc_typecheck(ectx, t, erase_types(a))) {
    return CheckResult{std::nullopt, RejectReason::StlcFail};
  }

  VarAllocation alloc;
  TypingContext rctx;
  TypePtr goal;
  UnifProblem prob = gen_problem(ctx, t, a, &alloc, &rctx, &goal);
  unif::SolveOutcome out = unif::fat_unify(prob);
  if (!out.ok()) {
    switch (out.reason) {
      case unif::FailReason::Cycle:
        return CheckResult{std::nullopt, RejectReason::Cycle};
      case unif::FailReason::ArrowClash:
        return CheckResult{std::nullopt, RejectReason::ArrowClash};
      case unif::FailReason::Exhausted:
        return CheckResult{std::nullopt, RejectReason::Exhausted};
    }
  }

  Rebuilder rb{*out.unifier, alloc, NameSupply{}};
  for (const auto& [_, c] : rctx)
    for (const auto& v : all_type_names(c)) rb.supply.note(v);
  for (const auto& v : all_type_names(goal)) rb.supply.note(v);
  for (const auto& [_, vals] : out.unifier->seq)
    for (const auto& v : vals) rb.supply.note(v);
  for (const auto& [_, pa] : out.unifier->proj)
    for (const auto& comp : pa.comps)
      if (comp.is_var) rb.supply.note(comp.var);
  auto note_scheme = [&](auto&& self, const unif::SchemePtr& s) -> void {
    if (s->k == unif::SchemeExpr::K::Var || s->k == unif::SchemeExpr::K::Forall)
      rb.supply.note(s->name);
    if (s->a) self(self, s->a);
    if (s->b) self(self, s->b);
  };
  for (const auto& [_, m] : out.unifier->meta) note_scheme(note_scheme, m.body);

  DerivPtr d = rb.build(t, "0", rctx, {});
  if (!check_derivation(d)) throw std::logic_error("reconstructed certificate failed validation");
  return CheckResult{d, RejectReason::Exhausted};
}

CheckResult typable(const TypingContext& ctx, const TermPtr& t) {
  NameSupply supply;
  for (const auto& v : all_names(t)) supply.note(v);
  for (const auto& [x, _] : ctx) supply.note(x);
  std::string x = supply.fresh("x");
  std::string y = supply.fresh("y");
  TermPtr probe = mkapp(mkabs(x, mkabs(y, mkvar(y))), t);
  TypePtr goal = tforall("X", tarrow(tvar("X"), tvar("X")));
  return check(ctx, probe, goal);
}

}  // namespace fat
