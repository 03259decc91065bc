#include "fat/unif.hpp"

#include <algorithm>
#include <sstream>

namespace fat::unif {

SeqExpr slit(std::vector<std::string> names) {
  SeqExpr s;
  s.k = SeqExpr::K::Lit;
  s.lit = std::move(names);
  return s;
}

SeqExpr svar(std::string name) {
  SeqExpr s;
  s.k = SeqExpr::K::Var;
  s.var = std::move(name);
  return s;
}

SeqExpr sproj(std::string projvar, std::vector<std::string> args) {
  SeqExpr s;
  s.k = SeqExpr::K::Proj;
  s.var = std::move(projvar);
  s.args = std::move(args);
  return s;
}

bool seq_eq(const SeqExpr& a, const SeqExpr& b) {
  if (a.k != b.k) return false;
  switch (a.k) {
    case SeqExpr::K::Lit:
      return a.lit == b.lit;
    case SeqExpr::K::Var:
      return a.var == b.var;
    case SeqExpr::K::Proj:
      return a.var == b.var && a.args == b.args;
  }
  return false;
}

StarPtr evar(std::string name) {
  auto e = std::make_shared<StarExpr>();
  e->k = StarExpr::K::Var;
  e->name = std::move(name);
  return e;
}

StarPtr epi(int index, SeqExpr seq) {
  auto e = std::make_shared<StarExpr>();
  e->k = StarExpr::K::Pi;
  e->index = index;
  e->seq = std::move(seq);
  return e;
}

StarPtr emeta(std::string name, std::vector<SeqExpr> args) {
  auto e = std::make_shared<StarExpr>();
  e->k = StarExpr::K::Meta;
  e->name = std::move(name);
  e->args = std::move(args);
  return e;
}

StarPtr earrow(QType l, QType r) {
  auto e = std::make_shared<StarExpr>();
  e->k = StarExpr::K::Arrow;
  e->l = std::move(l);
  e->r = std::move(r);
  return e;
}

bool star_eq(const StarPtr& a, const StarPtr& b) {
  if (a->k != b->k) return false;
  switch (a->k) {
    case StarExpr::K::Var:
      return a->name == b->name;
    case StarExpr::K::Pi:
      return a->index == b->index && seq_eq(a->seq, b->seq);
    case StarExpr::K::Meta:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!seq_eq(a->args[i], b->args[i])) return false;
      return true;
    case StarExpr::K::Arrow:
      return a->l.binder == b->l.binder && a->r.binder == b->r.binder &&
             star_eq(a->l.body, b->l.body) && star_eq(a->r.body, b->r.body);
  }
  return false;
}

std::string print_seq(const SeqExpr& s) {
  switch (s.k) {
    case SeqExpr::K::Lit: {
      std::string out = "<";
      for (size_t i = 0; i < s.lit.size(); ++i) out += (i ? " " : "") + s.lit[i];
      return out + ">";
    }
    case SeqExpr::K::Var:
      return s.var;
    case SeqExpr::K::Proj: {
      std::string out = "(" + s.var;
      for (const auto& a : s.args) out += " " + a;
      return out + ")";
    }
  }
  return "";
}

std::string print_star(const StarPtr& e) {
  switch (e->k) {
    case StarExpr::K::Var:
      return e->name;
    case StarExpr::K::Pi:
      return "pi^" + std::to_string(e->index) + "(" + print_seq(e->seq) + ")";
    case StarExpr::K::Meta: {
      std::string out = e->name;
      for (const auto& a : e->args) out += " " + print_seq(a);
      return e->args.empty() ? out : "(" + out + ")";
    }
    case StarExpr::K::Arrow:
      return "(forall " + e->l.binder + ". " + print_star(e->l.body) + ") => (forall " +
             e->r.binder + ". " + print_star(e->r.body) + ")";
  }
  return "";
}

SchemePtr scvar(std::string name) {
  auto s = std::make_shared<SchemeExpr>();
  s->k = SchemeExpr::K::Var;
  s->name = std::move(name);
  return s;
}

SchemePtr scproj(int arg, int pos) {
  auto s = std::make_shared<SchemeExpr>();
  s->k = SchemeExpr::K::Proj;
  s->arg = arg;
  s->pos = pos;
  return s;
}

SchemePtr scarrow(SchemePtr a, SchemePtr b) {
  auto s = std::make_shared<SchemeExpr>();
  s->k = SchemeExpr::K::Arrow;
  s->a = std::move(a);
  s->b = std::move(b);
  return s;
}

SchemePtr scforall(std::string name, SchemePtr body) {
  auto s = std::make_shared<SchemeExpr>();
  s->k = SchemeExpr::K::Forall;
  s->name = std::move(name);
  s->a = std::move(body);
  return s;
}

bool operator<(const SeqExpr& a, const SeqExpr& b) {
  if (a.k != b.k) return a.k < b.k;
  if (a.lit != b.lit) return a.lit < b.lit;
  if (a.var != b.var) return a.var < b.var;
  return a.args < b.args;
}

// ---------------------------------------------------------------------------
// Validation and traversal helpers
// ---------------------------------------------------------------------------

namespace {

struct bad_problem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void validate_seq(const UnifProblem& p, const SeqExpr& s) {
  switch (s.k) {
    case SeqExpr::K::Lit:
      return;
    case SeqExpr::K::Var:
      if (!p.decls.seq_vars.count(s.var)) throw bad_problem("undeclared sequence variable " + s.var);
      return;
    case SeqExpr::K::Proj: {
      auto it = p.decls.proj_vars.find(s.var);
      if (it == p.decls.proj_vars.end()) throw bad_problem("undeclared projection variable " + s.var);
      if (static_cast<int>(s.args.size()) != it->second)
        throw bad_problem("arity mismatch for projection variable " + s.var);
      for (const auto& a : s.args)
        if (!p.decls.seq_vars.count(a)) throw bad_problem("undeclared sequence variable " + a);
      return;
    }
  }
}

void validate_star(const UnifProblem& p, const StarPtr& e) {
  switch (e->k) {
    case StarExpr::K::Var:
      return;
    case StarExpr::K::Pi:
      if (e->index < 1) throw bad_problem("pi index must be >= 1");
      validate_seq(p, e->seq);
      return;
    case StarExpr::K::Meta: {
      auto it = p.decls.meta_vars.find(e->name);
      if (it == p.decls.meta_vars.end()) throw bad_problem("undeclared metavariable " + e->name);
      if (static_cast<int>(e->args.size()) != it->second)
        throw bad_problem("arity mismatch for metavariable " + e->name);
      for (const auto& a : e->args) validate_seq(p, a);
      return;
    }
    case StarExpr::K::Arrow:
      if (!p.decls.seq_vars.count(e->l.binder) || !p.decls.seq_vars.count(e->r.binder))
        throw bad_problem("undeclared binder sequence variable");
      validate_star(p, e->l.body);
      validate_star(p, e->r.body);
      return;
  }
}

}  // namespace

void validate_problem(const UnifProblem& p) {
  for (const auto& [l, r] : p.equations) {
    validate_star(p, l);
    validate_star(p, r);
  }
  for (const auto& c : p.constraints) {
    if (const auto* link = std::get_if<ArityLink>(&c)) {
      if (!p.decls.proj_vars.count(link->proj)) throw bad_problem("undeclared projection variable " + link->proj);
      if (!p.decls.seq_vars.count(link->seq)) throw bad_problem("undeclared sequence variable " + link->seq);
    } else {
      const auto& pin = std::get<LengthPin>(c);
      if (!p.decls.seq_vars.count(pin.seq)) throw bad_problem("undeclared sequence variable " + pin.seq);
      if (pin.len < 0) throw bad_problem("negative length pin");
    }
  }
}

// ---------------------------------------------------------------------------
// Substitution application
// ---------------------------------------------------------------------------

namespace {

struct apply_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace

std::vector<std::string> apply_seq(const UnifSubstitution& s, const SeqExpr& e) {
  switch (e.k) {
    case SeqExpr::K::Lit:
      return e.lit;
    case SeqExpr::K::Var: {
      auto it = s.seq.find(e.var);
      if (it == s.seq.end()) throw apply_error("no value for sequence variable " + e.var);
      return it->second;
    }
    case SeqExpr::K::Proj: {
      auto it = s.proj.find(e.var);
      if (it == s.proj.end()) throw apply_error("no value for projection variable " + e.var);
      std::vector<std::string> out;
      for (const auto& comp : it->second.comps) {
        if (comp.is_var) {
          out.push_back(comp.var);
        } else {
          if (comp.arg < 1 || comp.arg > static_cast<int>(e.args.size()))
            throw apply_error("projection component argument out of range");
          const auto& val = s.seq.at(e.args[comp.arg - 1]);
          if (comp.pos < 1 || comp.pos > static_cast<int>(val.size()))
            throw apply_error("projection component position out of range");
          out.push_back(val[comp.pos - 1]);
        }
      }
      return out;
    }
  }
  return {};
}

TypePtr apply_scheme(const MetaScheme& m, const std::vector<std::vector<std::string>>& args) {
  if (static_cast<int>(args.size()) != m.arity) throw apply_error("scheme arity mismatch");
  auto walk = [&](auto&& self, const SchemePtr& b) -> TypePtr {
    switch (b->k) {
      case SchemeExpr::K::Var:
        return tvar(b->name);
      case SchemeExpr::K::Proj: {
        if (b->arg < 1 || b->arg > static_cast<int>(args.size()))
          throw apply_error("scheme projection argument out of range");
        const auto& val = args[b->arg - 1];
        if (b->pos < 1 || b->pos > static_cast<int>(val.size()))
          throw apply_error("scheme projection position out of range");
        return tvar(val[b->pos - 1]);
      }
      case SchemeExpr::K::Arrow:
        return tarrow(self(self, b->a), self(self, b->b));
      case SchemeExpr::K::Forall:
        return tforall(b->name, self(self, b->a));
    }
    return nullptr;
  };
  return walk(walk, m.body);
}

TypePtr apply_star(const UnifSubstitution& s, const StarPtr& e) {
  switch (e->k) {
    case StarExpr::K::Var:
      return tvar(e->name);
    case StarExpr::K::Pi: {
      auto val = apply_seq(s, e->seq);
      if (e->index < 1 || e->index > static_cast<int>(val.size()))
        throw apply_error("pi index out of range");
      return tvar(val[e->index - 1]);
    }
    case StarExpr::K::Meta: {
      auto it = s.meta.find(e->name);
      if (it == s.meta.end()) throw apply_error("no value for metavariable " + e->name);
      std::vector<std::vector<std::string>> args;
      for (const auto& a : e->args) args.push_back(apply_seq(s, a));
      return apply_scheme(it->second, args);
    }
    case StarExpr::K::Arrow:
      return tarrow(apply_qtype(s, e->l), apply_qtype(s, e->r));
  }
  return nullptr;
}

TypePtr apply_qtype(const UnifSubstitution& s, const QType& q) {
  auto it = s.seq.find(q.binder);
  if (it == s.seq.end()) throw apply_error("no value for sequence variable " + q.binder);
  TypePtr body = apply_star(s, q.body);
  for (auto v = it->second.rbegin(); v != it->second.rend(); ++v) body = tforall(*v, body);
  return body;
}

// ---------------------------------------------------------------------------
// Problem scanning: occurrences, degrees, pi indices
// ---------------------------------------------------------------------------

namespace {

struct Scan {
  std::map<std::string, std::set<std::vector<std::string>>> proj_occ;
  std::map<std::string, std::set<std::vector<SeqExpr>>> meta_occ;
  std::map<std::string, int> max_pi_seq;   // seq var -> max pi index applied
  std::map<std::string, int> max_pi_proj;  // proj var -> deg
  std::set<std::string> type_vars;
  int max_lit = 0;
};

void scan_seq(Scan& sc, const SeqExpr& s) {
  switch (s.k) {
    case SeqExpr::K::Lit:
      sc.max_lit = std::max(sc.max_lit, static_cast<int>(s.lit.size()));
      for (const auto& x : s.lit) sc.type_vars.insert(x);
      return;
    case SeqExpr::K::Var:
      return;
    case SeqExpr::K::Proj:
      sc.proj_occ[s.var].insert(s.args);
      return;
  }
}

void scan_star(Scan& sc, const StarPtr& e) {
  switch (e->k) {
    case StarExpr::K::Var:
      sc.type_vars.insert(e->name);
      return;
    case StarExpr::K::Pi:
      scan_seq(sc, e->seq);
      if (e->seq.k == SeqExpr::K::Var) {
        int& m = sc.max_pi_seq[e->seq.var];
        m = std::max(m, e->index);
      } else if (e->seq.k == SeqExpr::K::Proj) {
        int& m = sc.max_pi_proj[e->seq.var];
        m = std::max(m, e->index);
      }
      return;
    case StarExpr::K::Meta: {
      std::vector<SeqExpr> args = e->args;
      sc.meta_occ[e->name].insert(args);
      for (const auto& a : e->args) scan_seq(sc, a);
      return;
    }
    case StarExpr::K::Arrow:
      scan_star(sc, e->l.body);
      scan_star(sc, e->r.body);
      return;
  }
}

Scan scan_problem(const UnifProblem& p) {
  Scan sc;
  for (const auto& [l, r] : p.equations) {
    scan_star(sc, l);
    scan_star(sc, r);
  }
  return sc;
}

// ---------------------------------------------------------------------------
// Renaming sequence variables across a whole problem
// ---------------------------------------------------------------------------

SeqExpr rename_seq(const SeqExpr& s, const std::string& from, const std::string& to) {
  SeqExpr out = s;
  if (out.k == SeqExpr::K::Var && out.var == from) out.var = to;
  if (out.k == SeqExpr::K::Proj)
    for (auto& a : out.args)
      if (a == from) a = to;
  return out;
}

StarPtr rename_star(const StarPtr& e, const std::string& from, const std::string& to) {
  switch (e->k) {
    case StarExpr::K::Var:
      return e;
    case StarExpr::K::Pi:
      return epi(e->index, rename_seq(e->seq, from, to));
    case StarExpr::K::Meta: {
      std::vector<SeqExpr> args;
      for (const auto& a : e->args) args.push_back(rename_seq(a, from, to));
      return emeta(e->name, std::move(args));
    }
    case StarExpr::K::Arrow: {
      QType l{e->l.binder == from ? to : e->l.binder, rename_star(e->l.body, from, to)};
      QType r{e->r.binder == from ? to : e->r.binder, rename_star(e->r.body, from, to)};
      return earrow(std::move(l), std::move(r));
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Engine: normalization + arrow elimination with history
// ---------------------------------------------------------------------------

struct Split {
  std::string f1, f2, c, d;
  int arity;  // of the split metavariable
};

struct Engine {
  UnifProblem p;
  std::map<std::string, std::string> seq_alias;  // original name -> current name
  std::map<std::string, Split> splits;           // meta name -> its expansion
  int fresh_counter = 0;

  explicit Engine(const UnifProblem& input) : p(input) {
    for (const auto& a : p.decls.seq_vars) seq_alias[a] = a;
  }

  std::string fresh_seq() { return "%s" + std::to_string(fresh_counter++); }
  std::string fresh_meta(const std::string& base, int tag) {
    return base + "%" + std::to_string(tag) + "." + std::to_string(fresh_counter++);
  }

  void rename(const std::string& from, const std::string& to) {
    if (from == to) return;
    for (auto& [l, r] : p.equations) {
      l = rename_star(l, from, to);
      r = rename_star(r, from, to);
    }
    for (auto& c : p.constraints) {
      if (auto* link = std::get_if<ArityLink>(&c)) {
        if (link->seq == from) link->seq = to;
      } else {
        auto& pin = std::get<LengthPin>(c);
        if (pin.seq == from) pin.seq = to;
      }
    }
    p.decls.seq_vars.erase(from);
    p.decls.seq_vars.insert(to);
    for (auto& [orig, cur] : seq_alias)
      if (cur == from) cur = to;
    for (auto& [f, sp] : splits) {
      if (sp.c == from) sp.c = to;
      if (sp.d == from) sp.d = to;
    }
  }

  // Splits every ArrowE = ArrowE equation.
  void normalize() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < p.equations.size(); ++i) {
        const auto& [l, r] = p.equations[i];
        if (l->k == StarExpr::K::Arrow && r->k == StarExpr::K::Arrow) {
          StarPtr lhs = l, rhs = r;
          p.equations.erase(p.equations.begin() + static_cast<long>(i));
          p.equations.emplace_back(lhs->l.body, rhs->l.body);
          p.equations.emplace_back(lhs->r.body, rhs->r.body);
          rename(rhs->l.binder, lhs->l.binder);
          rename(rhs->r.binder, lhs->r.binder);
          changed = true;
          break;
        }
      }
    }
  }

  // Replaces every occurrence of metavariable f per its split.
  StarPtr expand_meta(const StarPtr& e, const std::string& f, const Split& sp) {
    switch (e->k) {
      case StarExpr::K::Var:
      case StarExpr::K::Pi:
        return e;
      case StarExpr::K::Meta: {
        if (e->name != f) return e;
        std::vector<SeqExpr> a1 = e->args, a2 = e->args;
        a1.push_back(svar(sp.c));
        a2.push_back(svar(sp.d));
        return earrow(QType{sp.c, emeta(sp.f1, std::move(a1))}, QType{sp.d, emeta(sp.f2, std::move(a2))});
      }
      case StarExpr::K::Arrow:
        return earrow(QType{e->l.binder, expand_meta(e->l.body, f, sp)},
                      QType{e->r.binder, expand_meta(e->r.body, f, sp)});
    }
    return e;
  }

  // Returns false on ArrowClash. Pre: acyclic.
  bool eliminate() {
    for (int round = 0; round < 100000; ++round) {
      normalize();
      // clash: an arrow equated with a variable or a projection
      std::string victim;
      for (const auto& [l, r] : p.equations) {
        bool la = l->k == StarExpr::K::Arrow, ra = r->k == StarExpr::K::Arrow;
        if (la || ra) {
          const StarPtr& other = la ? r : l;
          if (other->k == StarExpr::K::Var || other->k == StarExpr::K::Pi) return false;
          if (victim.empty()) victim = other->name;  // a metavariable
        }
      }
      if (victim.empty()) return true;  // simple

      auto spit = p.decls.meta_vars.find(victim);
      Split sp;
      sp.arity = spit->second;
      sp.f1 = fresh_meta(victim, 1);
      sp.f2 = fresh_meta(victim, 2);
      sp.c = fresh_seq();
      sp.d = fresh_seq();
      p.decls.meta_vars[sp.f1] = sp.arity + 1;
      p.decls.meta_vars[sp.f2] = sp.arity + 1;
      p.decls.seq_vars.insert(sp.c);
      p.decls.seq_vars.insert(sp.d);

      // expand the metavariable everywhere; its arrow equations become
      // arrow-arrow equations that the next normalization splits, which also
      // identifies the fresh binders with the equations' own binders
      for (auto& [l, r] : p.equations) {
        l = expand_meta(l, victim, sp);
        r = expand_meta(r, victim, sp);
      }
      splits[victim] = sp;
      p.decls.meta_vars.erase(victim);
    }
    throw std::logic_error("arrow elimination did not terminate");
  }
};

}  // namespace

UnifProblem normalize_problem(const UnifProblem& p) {
  Engine e(p);
  e.normalize();
  return e.p;
}

FoProblem build_fo_skeleton(const UnifProblem& p) {
  auto tr = [](auto&& self, const StarPtr& e) -> FoPtr {
    switch (e->k) {
      case StarExpr::K::Var:
      case StarExpr::K::Pi:
        return foconst("c");
      case StarExpr::K::Meta:
        return fovar("m:" + e->name);
      case StarExpr::K::Arrow:
        return foarrow(self(self, e->l.body), self(self, e->r.body));
    }
    return foconst("c");
  };
  FoProblem out;
  for (const auto& [l, r] : p.equations) out.equations.emplace_back(tr(tr, l), tr(tr, r));
  return out;
}

std::optional<FailReason> phase1_cycle_check(const UnifProblem& p) {
  auto r = fo_unify(build_fo_skeleton(p));
  if (auto* f = std::get_if<FoFail>(&r); f && *f == FoFail::Cycle) return FailReason::Cycle;
  return std::nullopt;  // clashes are handled by arrow elimination
}

ArrowElimResult eliminate_arrows(const UnifProblem& p) {
  Engine e(p);
  ArrowElimResult out;
  out.clash = !e.eliminate();
  if (!out.clash) out.problem = e.p;
  return out;
}

// ---------------------------------------------------------------------------
// solve_simple
// ---------------------------------------------------------------------------

namespace {

bool is_residual(const StarPtr& e) {
  return e->k == StarExpr::K::Var ||
         (e->k == StarExpr::K::Pi && e->seq.k == SeqExpr::K::Var);
}

// A failed subtree is explained by a set of equations that cannot be
// satisfied given the assignments to their variables; when that set does not
// mention the variable branched on, siblings fail the same way and the
// failure propagates past the branch.
struct Conflict {
  bool top = false;     // unlocalized failure (length bound reasoning)
  std::set<int> eqs;    // equation indices
  void add(const Conflict& o) {
    top = top || o.top;
    if (top)
      eqs.clear();
    else
      eqs.insert(o.eqs.begin(), o.eqs.end());
  }
};

struct SearchCtx {
  const UnifProblem* p;
  Scan scan;
  int bound;                               // K + N
  std::vector<std::string> pool;           // type variables of the problem
  std::string fresh_var;                   // one extra fresh name
  std::map<std::string, int> pinned;       // effective length pin per seq/proj var
  std::map<std::string, std::string> rep;  // union-find over ArityLink groups
  std::set<std::string> rigid;             // variables occurring in the problem
  std::set<std::tuple<std::string, int, std::string>> allowed;  // explicit pins
  // Sequence variables whose length is pinned and whose every position is
  // fixed by an equation are constants; projections into them resolve eagerly.
  std::map<std::string, std::vector<std::string>> known;
  // Per equation, the assignable variables (metavariables and projection
  // variables) occurring in it; simplification never brings in others.
  std::vector<std::set<std::string>> infl;

  bool touches(const Conflict& c, const std::string& v) const {
    if (c.top) return true;
    for (int i : c.eqs)
      if (infl[static_cast<size_t>(i)].count(v)) return true;
    return false;
  }

  // Sequence values are chosen fresh: a variable of the problem may sit in a
  // sequence position only where an equation of the problem pins it there,
  // and a variable introduced by the search never may (it would alias a bound
  // variable while also occurring free in some scheme).
  bool pin_ok(const std::string& a, int l, const std::string& x) const {
    if (!rigid.count(x)) return false;
    if (x == "#") return false;
    return allowed.count({a, l, x}) > 0;
  }

  std::string find(const std::string& v) {
    std::string r = v;
    while (rep.count(r) && rep[r] != r) r = rep[r];
    return r;
  }

  std::optional<int> pin_of(const std::string& v) {
    auto it = pinned.find(find(v));
    if (it == pinned.end()) return std::nullopt;
    return it->second;
  }
};

struct SState {
  std::vector<std::pair<StarPtr, StarPtr>> eqs;
  std::map<std::pair<std::string, int>, ProjComponent> pcomp;  // (alpha, j)
  std::map<std::string, ProjComponent> mflat;                  // F -> flat component
  std::map<std::string, int> max_pi_seq;
  std::map<std::string, int> max_pi_proj;
  // Highest sequence position referenced by a literal, pin, or chosen
  // component. Positions beyond it are interchangeable, so candidate
  // enumeration only ever opens one new position at a time.
  int maxpos = 0;
};

// Applies assignments and reduces literal projections. Returns nullptr on a
// locally failing expression (projection out of range).
StarPtr simplify(SearchCtx& ctx, SState& st, StarPtr e) {
  for (;;) {
    switch (e->k) {
      case StarExpr::K::Var:
        return e;
      case StarExpr::K::Pi: {
        if (e->seq.k == SeqExpr::K::Lit) {
          if (e->index > static_cast<int>(e->seq.lit.size())) return nullptr;
          e = evar(e->seq.lit[e->index - 1]);
          continue;
        }
        if (e->seq.k == SeqExpr::K::Var) {
          if (auto pin = ctx.pin_of(e->seq.var); pin && e->index > *pin) return nullptr;
          if (auto it = ctx.known.find(e->seq.var); it != ctx.known.end()) {
            e = evar(it->second[e->index - 1]);
            continue;
          }
          int& m = st.max_pi_seq[e->seq.var];
          m = std::max(m, e->index);
          return e;
        }
        // projection application
        if (auto pin = ctx.pin_of(e->seq.var); pin && e->index > *pin) return nullptr;
        auto it = st.pcomp.find({e->seq.var, e->index});
        if (it == st.pcomp.end()) {
          int& m = st.max_pi_proj[e->seq.var];
          m = std::max(m, e->index);
          return e;
        }
        const ProjComponent& comp = it->second;
        if (comp.is_var) {
          e = evar(comp.var);
        } else {
          e = epi(comp.pos, svar(e->seq.args[comp.arg - 1]));
        }
        continue;
      }
      case StarExpr::K::Meta: {
        auto it = st.mflat.find(e->name);
        if (it == st.mflat.end()) return e;
        const ProjComponent& comp = it->second;
        if (comp.is_var) {
          e = evar(comp.var);
        } else {
          e = epi(comp.pos, e->args[comp.arg - 1]);
        }
        continue;
      }
      case StarExpr::K::Arrow:
        throw std::logic_error("arrow inside simple problem");
    }
  }
}

// Residual atoms must not clash outright.
bool residual_compatible(const SearchCtx& ctx, const StarPtr& a, const StarPtr& b) {
  if (a->k == StarExpr::K::Var && b->k == StarExpr::K::Var) return a->name == b->name;
  if (a->k == StarExpr::K::Pi && b->k == StarExpr::K::Pi) {
    if (a->seq.var == b->seq.var) return a->index == b->index;
    // positions of distinct binders coincide only via a common rigid pin
    for (const auto& [sv, l, x] : ctx.allowed)
      if (sv == a->seq.var && l == a->index && ctx.allowed.count({b->seq.var, b->index, x}))
        return true;
    return false;
  }
  // a pin X = pi^l(a)
  const StarPtr& v = a->k == StarExpr::K::Var ? a : b;
  const StarPtr& pi = a->k == StarExpr::K::Var ? b : a;
  return ctx.pin_ok(pi->seq.var, pi->index, v->name);
}

// Returns the index of a failing equation, or -1 when all pass.
int resimplify_all(SearchCtx& ctx, SState& st) {
  for (size_t i = 0; i < st.eqs.size(); ++i) {
    auto& [l, r] = st.eqs[i];
    l = simplify(ctx, st, l);
    if (!l) return static_cast<int>(i);
    r = simplify(ctx, st, r);
    if (!r) return static_cast<int>(i);
    if (is_residual(l) && is_residual(r) && !residual_compatible(ctx, l, r))
      return static_cast<int>(i);
  }
  return -1;
}

struct Candidate {
  bool for_meta;
  std::string var;  // proj or meta variable
  int j;            // component index for projections
  ProjComponent comp;
};

int effective_len(SearchCtx& ctx, const SeqExpr& s) {
  switch (s.k) {
    case SeqExpr::K::Lit:
      return static_cast<int>(s.lit.size());
    case SeqExpr::K::Var:
    case SeqExpr::K::Proj: {
      if (auto pin = ctx.pin_of(s.var)) return *pin;
      return ctx.bound;
    }
  }
  return ctx.bound;
}

// Enumerate rule applications for the triggering side of an equation.
std::vector<Candidate> candidates_for(SearchCtx& ctx, SState& st, const StarPtr& lhs, const StarPtr& rhs) {
  const StarPtr* trigger = nullptr;
  bool proj_trigger = false;
  for (const StarPtr* side : {&lhs, &rhs}) {
    if ((*side)->k == StarExpr::K::Pi && (*side)->seq.k == SeqExpr::K::Proj) {
      trigger = side;
      proj_trigger = true;
      break;
    }
  }
  if (!trigger) {
    for (const StarPtr* side : {&lhs, &rhs}) {
      if ((*side)->k == StarExpr::K::Meta) {
        trigger = side;
        break;
      }
    }
  }
  std::vector<Candidate> out;
  if (!trigger) return out;
  const StarPtr& t = *trigger;
  const StarPtr& other = trigger == &lhs ? rhs : lhs;

  auto locally_ok = [&](const Candidate& c) {
    SState probe = st;
    if (c.for_meta)
      probe.mflat[c.var] = c.comp;
    else
      probe.pcomp[{c.var, c.j}] = c.comp;
    StarPtr a = simplify(ctx, probe, lhs);
    if (!a) return false;
    StarPtr b = simplify(ctx, probe, rhs);
    if (!b) return false;
    if (is_residual(a) && is_residual(b) && !residual_compatible(ctx, a, b)) return false;
    return true;
  };

  auto push = [&](Candidate c) {
    if (locally_ok(c)) out.push_back(std::move(c));
  };

  if (proj_trigger) {
    const std::string& alpha = t->seq.var;
    int j = t->index;
    int n = static_cast<int>(t->seq.args.size());
    // rule (a): S(alpha)_j := \x. pi^q(x_i)
    for (int i = 1; i <= n; ++i) {
      int lim = std::min({ctx.bound, st.maxpos + 1, effective_len(ctx, svar(t->seq.args[i - 1]))});
      for (int q = 1; q <= lim; ++q) {
        ProjComponent comp;
        comp.is_var = false;
        comp.arg = i;
        comp.pos = q;
        push(Candidate{false, alpha, j, comp});
      }
    }
    // rule (b): S(alpha)_j := \x. X (the club marker is not a witness)
    for (const auto& x : ctx.pool) {
      if (x == "#") continue;
      ProjComponent comp;
      comp.is_var = true;
      comp.var = x;
      push(Candidate{false, alpha, j, comp});
    }
    {
      ProjComponent comp;
      comp.is_var = true;
      comp.var = ctx.fresh_var;
      push(Candidate{false, alpha, j, comp});
    }
  } else {
    const std::string& f = t->name;
    int n = static_cast<int>(t->args.size());
    // rule (c): S(F) := \rho. pi^q(rho_i)
    for (int i = 1; i <= n; ++i) {
      int lim = std::min({ctx.bound, st.maxpos + 1, effective_len(ctx, t->args[i - 1])});
      for (int q = 1; q <= lim; ++q) {
        ProjComponent comp;
        comp.is_var = false;
        comp.arg = i;
        comp.pos = q;
        push(Candidate{true, f, 0, comp});
      }
    }
    // rule (d): S(F) := \rho. X
    for (const auto& x : ctx.pool) {
      ProjComponent comp;
      comp.is_var = true;
      comp.var = x;
      push(Candidate{true, f, 0, comp});
    }
    {
      ProjComponent comp;
      comp.is_var = true;
      comp.var = ctx.fresh_var;
      push(Candidate{true, f, 0, comp});
    }
  }
  (void)other;
  return out;
}

struct Finalizer {
  SearchCtx& ctx;
  const SState& st;

  struct Analysis {
    std::map<std::string, std::map<int, std::string>> pins;  // seq var -> pos -> name
    std::map<std::string, int> klen;                         // representative -> length
  };

  // Residual-class and length consistency; shared by the search (as a pruning
  // test) and the final substitution assembly. On failure fills *why with the
  // equations responsible when they can be localized.
  std::optional<Analysis> analyze(Conflict* why = nullptr) {
    auto blame_top = [&] {
      if (why) why->top = true;
      return std::nullopt;
    };
    // step 2: union-find over residual atoms
    std::map<std::string, std::string> uf;
    auto key = [](const StarPtr& e) {
      return e->k == StarExpr::K::Var ? "v:" + e->name
                                      : "p:" + e->seq.var + ":" + std::to_string(e->index);
    };
    auto find = [&](std::string a) {
      while (uf.count(a) && uf[a] != a) a = uf[a];
      return a;
    };
    auto unite = [&](const std::string& a, const std::string& b) {
      std::string ra = find(a), rb = find(b);
      uf.try_emplace(ra, ra);
      uf.try_emplace(rb, rb);
      if (ra != rb) uf[ra] = rb;
    };
    for (const auto& [l, r] : st.eqs) {
      if (!is_residual(l) || !is_residual(r)) continue;  // deferred flex-flex
      unite(key(l), key(r));
    }

    std::map<std::string, std::vector<std::string>> classes;
    for (const auto& [k, _] : uf) classes[find(k)].push_back(k);
    // which equations fed each class
    std::map<std::string, std::set<int>> ceqs;
    for (size_t i = 0; i < st.eqs.size(); ++i) {
      const auto& [l, r] = st.eqs[i];
      if (!is_residual(l) || !is_residual(r)) continue;
      ceqs[find(key(l))].insert(static_cast<int>(i));
    }
    auto blame_class = [&](const std::string& rep) {
      if (why) why->eqs.insert(ceqs[rep].begin(), ceqs[rep].end());
      return std::nullopt;
    };

    // per class: at most one concrete variable and one pi-atom
    std::map<std::string, std::map<int, std::string>> pins;  // seq var -> pos -> name
    std::map<std::string, std::map<int, std::string>> pinrep;
    for (auto& [rep, members] : classes) {
      std::set<std::string> vars;
      std::set<std::pair<std::string, int>> atoms;
      for (const auto& m : members) {
        if (m.rfind("v:", 0) == 0) {
          vars.insert(m.substr(2));
        } else {
          size_t colon = m.rfind(':');
          atoms.insert({m.substr(2, colon - 2), std::stoi(m.substr(colon + 1))});
        }
      }
      if (vars.size() > 1) return blame_class(rep);
      // sequence positions hold pairwise distinct fresh variables, so two
      // positions coincide only when both are pinned to one rigid variable
      if (vars.empty() && atoms.size() > 1) return blame_class(rep);
      if (!vars.empty()) {
        const std::string& x = *vars.begin();
        for (const auto& [a, l] : atoms) {
          if (!ctx.pin_ok(a, l, x)) return blame_class(rep);
          pins[a][l] = x;
          pinrep[a][l] = rep;
        }
      }
    }
    // within-sequence distinctness of pinned values
    for (const auto& [a, m] : pins) {
      std::map<std::string, int> seen;  // value -> position
      for (const auto& [l, x] : m) {
        auto [it, fresh] = seen.try_emplace(x, l);
        if (!fresh) {
          blame_class(pinrep[a][it->second]);
          return blame_class(pinrep[a][l]);
        }
      }
    }

    // step 3: lower bounds
    std::map<std::string, int> lb;  // over seq and proj vars
    for (const auto& [a, m] : st.max_pi_seq) lb[a] = std::max(lb[a], m);
    for (const auto& [a, m] : st.max_pi_proj) lb[a] = std::max(lb[a], m);
    for (const auto& [a, m] : pins)
      if (!m.empty()) lb[a] = std::max(lb[a], m.rbegin()->first);
    for (const auto& [k, comp] : st.pcomp) {
      const auto& [alpha, j] = k;
      lb[alpha] = std::max(lb[alpha], j);
      if (!comp.is_var) {
        for (const auto& occ : ctx.scan.proj_occ[alpha]) {
          const std::string& arg = occ[comp.arg - 1];
          lb[arg] = std::max(lb[arg], comp.pos);
        }
      }
    }
    for (const auto& [f, comp] : st.mflat) {
      if (comp.is_var) continue;
      for (const auto& occ : ctx.scan.meta_occ[f]) {
        const SeqExpr& arg = occ[comp.arg - 1];
        if (arg.k == SeqExpr::K::Lit) {
          if (comp.pos > static_cast<int>(arg.lit.size())) return blame_top();
        } else {
          lb[arg.var] = std::max(lb[arg.var], comp.pos);
        }
      }
    }

    // group lengths via ArityLink; pins must agree and dominate the bounds
    std::map<std::string, int> glb;  // representative -> max lower bound
    for (const auto& [v, b] : lb) {
      std::string r = ctx.find(v);
      glb[r] = std::max(glb[r], b);
    }
    std::map<std::string, int> klen;  // representative -> chosen length
    for (const auto& a : ctx.p->decls.seq_vars) klen.try_emplace(ctx.find(a), 0);
    for (const auto& [a, _] : ctx.p->decls.proj_vars) klen.try_emplace(ctx.find(a), 0);
    for (auto& [r, k] : klen) {
      auto pit = ctx.pinned.find(r);
      if (pit != ctx.pinned.end()) {
        if (glb.count(r) && glb[r] > pit->second) return blame_top();
        k = pit->second;
      } else {
        k = glb.count(r) ? glb[r] : 0;
      }
    }
    return Analysis{std::move(pins), std::move(klen)};
  }

  std::optional<UnifSubstitution> run(Conflict* why = nullptr) {
    auto an = analyze(why);
    if (!an) return std::nullopt;
    auto& pins = an->pins;
    auto& klen = an->klen;

    // assemble the substitution
    UnifSubstitution sub;
    NameSupply supply;
    for (const auto& x : ctx.pool) supply.note(x);
    supply.note(ctx.fresh_var);
    std::string filler = supply.fresh("W");
    for (const auto& a : ctx.p->decls.seq_vars) {
      if (auto it = ctx.known.find(a); it != ctx.known.end()) {
        sub.seq[a] = it->second;
        continue;
      }
      int k = klen[ctx.find(a)];
      std::vector<std::string> val(static_cast<size_t>(k));
      auto pit = pins.find(a);
      for (int i = 1; i <= k; ++i) {
        if (pit != pins.end() && pit->second.count(i))
          val[i - 1] = pit->second.at(i);
        else
          val[i - 1] = supply.fresh("V");
      }
      sub.seq[a] = std::move(val);
    }
    for (const auto& [alpha, arity] : ctx.p->decls.proj_vars) {
      ProjAssign pa;
      pa.k = klen[ctx.find(alpha)];
      for (int j = 1; j <= pa.k; ++j) {
        auto it = st.pcomp.find({alpha, j});
        if (it != st.pcomp.end()) {
          pa.comps.push_back(it->second);
        } else {
          ProjComponent comp;
          comp.is_var = true;
          comp.var = filler;
          pa.comps.push_back(comp);
        }
      }
      sub.proj[alpha] = std::move(pa);
      (void)arity;
    }
    for (const auto& [f, arity] : ctx.p->decls.meta_vars) {
      MetaScheme m;
      m.arity = arity;
      auto it = st.mflat.find(f);
      if (it == st.mflat.end()) {
        m.body = scvar(filler);
      } else if (it->second.is_var) {
        m.body = scvar(it->second.var);
      } else {
        m.body = scproj(it->second.arg, it->second.pos);
      }
      sub.meta[f] = std::move(m);
    }
    return sub;
  }
};

// After simplification a remaining meta or projection application is
// unassigned, so a flex-flex equation is satisfied by the finalizer's shared
// filler variable and never needs branching.
bool is_flex(const StarPtr& e) {
  return e->k == StarExpr::K::Meta ||
         (e->k == StarExpr::K::Pi && e->seq.k == SeqExpr::K::Proj);
}

struct DfsResult {
  std::optional<UnifSubstitution> sol;
  Conflict why;  // meaningful only when !sol
};

DfsResult dfs(SearchCtx& ctx, SState& st, int depth) {
  if (depth > 100000) throw std::logic_error("solve_simple exceeded depth bound");
  // pick the triggering equation with the fewest candidates
  int best = -1;
  std::vector<Candidate> best_cands;
  for (size_t i = 0; i < st.eqs.size(); ++i) {
    const auto& [l, r] = st.eqs[i];
    if (is_residual(l) && is_residual(r)) continue;
    if (is_flex(l) && is_flex(r)) continue;
    auto cands = candidates_for(ctx, st, l, r);
    if (best < 0 || cands.size() < best_cands.size()) {
      best = static_cast<int>(i);
      best_cands = std::move(cands);
      if (best_cands.empty())
        return {std::nullopt, Conflict{false, {best}}};  // dead branch
    }
  }
  if (best < 0) {
    DfsResult out;
    out.sol = Finalizer{ctx, st}.run(&out.why);
    return out;
  }
  // all candidates assign the variable triggering the chosen equation
  const std::string& v = best_cands.front().var;
  Conflict acc{false, {best}};
  for (const auto& c : best_cands) {
    SState next = st;
    if (c.for_meta)
      next.mflat[c.var] = c.comp;
    else
      next.pcomp[{c.var, c.j}] = c.comp;
    if (!c.comp.is_var) next.maxpos = std::max(next.maxpos, c.comp.pos);
    if (int bad = resimplify_all(ctx, next); bad >= 0) {
      acc.eqs.insert(bad);
      continue;
    }
    Conflict cw;
    if (!Finalizer{ctx, next}.analyze(&cw)) {  // global pin or length conflict
      if (!ctx.touches(cw, v)) return {std::nullopt, cw};
      acc.add(cw);
      continue;
    }
    DfsResult r = dfs(ctx, next, depth + 1);
    if (r.sol) return r;
    if (!ctx.touches(r.why, v)) return {std::nullopt, r.why};
    acc.add(r.why);
  }
  return {std::nullopt, acc};
}

}  // namespace

SolveOutcome solve_simple(const UnifProblem& p) {
  validate_problem(p);
  SearchCtx ctx;
  ctx.p = &p;
  ctx.scan = scan_problem(p);

  // K = max over literal lengths, pi indices, length pins; N = #equations
  int K = ctx.scan.max_lit;
  for (const auto& [_, m] : ctx.scan.max_pi_seq) K = std::max(K, m);
  for (const auto& [_, m] : ctx.scan.max_pi_proj) K = std::max(K, m);
  for (const auto& c : p.constraints)
    if (const auto* pin = std::get_if<LengthPin>(&c)) K = std::max(K, pin->len);
  ctx.bound = K + static_cast<int>(p.equations.size());

  ctx.pool.assign(ctx.scan.type_vars.begin(), ctx.scan.type_vars.end());
  ctx.rigid = ctx.scan.type_vars;
  for (const auto& [l, r] : p.equations) {
    const StarPtr& v = l->k == StarExpr::K::Var ? l : r;
    const StarPtr& pi = l->k == StarExpr::K::Var ? r : l;
    if (v->k == StarExpr::K::Var && pi->k == StarExpr::K::Pi && pi->seq.k == SeqExpr::K::Var)
      ctx.allowed.insert({pi->seq.var, pi->index, v->name});
  }
  {
    NameSupply supply;
    for (const auto& x : ctx.pool) supply.note(x);
    ctx.fresh_var = supply.fresh("V");
  }

  // ArityLink groups and pinned lengths
  for (const auto& a : p.decls.seq_vars) ctx.rep[a] = a;
  for (const auto& [a, _] : p.decls.proj_vars) ctx.rep[a] = a;
  for (const auto& c : p.constraints) {
    if (const auto* link = std::get_if<ArityLink>(&c)) {
      std::string ra = ctx.find(link->proj), rb = ctx.find(link->seq);
      if (ra != rb) ctx.rep[ra] = rb;
    }
  }
  for (const auto& c : p.constraints) {
    if (const auto* pin = std::get_if<LengthPin>(&c)) {
      std::string r = ctx.find(pin->seq);
      auto [it, fresh] = ctx.pinned.try_emplace(r, pin->len);
      if (!fresh && it->second != pin->len) return SolveOutcome{std::nullopt, FailReason::Exhausted};
    }
  }

  // a sequence variable with a pinned length and one pinning equation per
  // position is a constant
  for (const auto& a : p.decls.seq_vars) {
    auto pin = ctx.pin_of(a);
    if (!pin) continue;
    std::vector<std::string> val(static_cast<size_t>(*pin));
    bool full = true;
    for (int l = 1; l <= *pin && full; ++l) {
      std::string found;
      for (const auto& [sv, pos, x] : ctx.allowed) {
        if (sv != a || pos != l) continue;
        if (found.empty()) {
          found = x;
        } else if (found != x) {
          full = false;  // clashing pins, leave them to the residual classes
          break;
        }
      }
      if (found.empty())
        full = false;
      else
        val[l - 1] = found;
    }
    if (full) ctx.known[a] = std::move(val);
  }

  // assignable variables per equation, for conflict localization
  for (const auto& [l, r] : p.equations) {
    std::set<std::string> vars;
    auto note_seq = [&](const SeqExpr& s) {
      if (s.k == SeqExpr::K::Proj) vars.insert(s.var);
    };
    auto note = [&](const StarPtr& e) {
      if (e->k == StarExpr::K::Meta) {
        vars.insert(e->name);
        for (const auto& a : e->args) note_seq(a);
      } else if (e->k == StarExpr::K::Pi) {
        note_seq(e->seq);
      }
    };
    note(l);
    note(r);
    ctx.infl.push_back(std::move(vars));
  }

  SState st;
  st.eqs = p.equations;
  st.maxpos = K;
  for (const auto& [a, m] : ctx.scan.max_pi_seq) st.max_pi_seq[a] = m;
  for (const auto& [a, m] : ctx.scan.max_pi_proj) st.max_pi_proj[a] = m;
  if (resimplify_all(ctx, st) >= 0) return SolveOutcome{std::nullopt, FailReason::Exhausted};
  if (auto r = dfs(ctx, st, 0); r.sol) return SolveOutcome{std::move(r.sol), FailReason::Exhausted};
  return SolveOutcome{std::nullopt, FailReason::Exhausted};
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

bool verify_unifier(const UnifProblem& p, const UnifSubstitution& s) {
  try {
    Scan sc = scan_problem(p);
    // well-formedness of the substitution
    for (const auto& a : p.decls.seq_vars) {
      auto it = s.seq.find(a);
      if (it == s.seq.end()) return false;
      std::set<std::string> seen;
      for (const auto& x : it->second) {
        if (x == "#") return false;
        if (!seen.insert(x).second) return false;  // pairwise distinct
      }
    }
    // sequence values are chosen fresh: a type variable of the problem may
    // only occupy a position where some equation pins it there, including pins
    // uncovered by normalization and arrow elimination
    {
      Engine e(p);
      e.normalize();
      if (!e.eliminate()) {
        // clashing problems keep whatever pins surfaced before the clash
      }
      std::set<std::tuple<std::string, int, std::string>> allowed;
      for (const auto& [l, r] : e.p.equations) {
        const StarPtr& v = l->k == StarExpr::K::Var ? l : r;
        const StarPtr& pi = l->k == StarExpr::K::Var ? r : l;
        if (v->k == StarExpr::K::Var && pi->k == StarExpr::K::Pi && pi->seq.k == SeqExpr::K::Var)
          allowed.insert({pi->seq.var, pi->index, v->name});
      }
      for (const auto& a : p.decls.seq_vars) {
        const auto& vals = s.seq.at(a);
        const std::string& cur = e.seq_alias.at(a);
        for (size_t l = 0; l < vals.size(); ++l) {
          if (!sc.type_vars.count(vals[l])) continue;
          if (!allowed.count({cur, static_cast<int>(l) + 1, vals[l]})) return false;
        }
      }
      // a fresh name used as a sequence value stands for a freshly chosen
      // bound variable, so it cannot also value a distinct binder or occur
      // free in a projection component or scheme body
      std::map<std::string, std::string> owner;  // fresh value -> binder rep
      for (const auto& a : p.decls.seq_vars) {
        const std::string& cur = e.seq_alias.at(a);
        for (const auto& x : s.seq.at(a)) {
          if (sc.type_vars.count(x)) continue;
          auto [oit, onew] = owner.try_emplace(x, cur);
          if (!onew && oit->second != cur) return false;
        }
      }
      for (const auto& [alpha, pa] : s.proj) {
        (void)alpha;
        for (const auto& comp : pa.comps)
          if (comp.is_var && owner.count(comp.var)) return false;
      }
      auto scan_free = [&](auto&& self, const SchemePtr& b, std::set<std::string>& bound) -> bool {
        switch (b->k) {
          case SchemeExpr::K::Var:
            return !owner.count(b->name) || bound.count(b->name) > 0;
          case SchemeExpr::K::Proj:
            return true;
          case SchemeExpr::K::Arrow:
            return self(self, b->a, bound) && self(self, b->b, bound);
          case SchemeExpr::K::Forall: {
            bool was = bound.count(b->name) > 0;
            bound.insert(b->name);
            bool ok = self(self, b->a, bound);
            if (!was) bound.erase(b->name);
            return ok;
          }
        }
        return false;
      };
      for (const auto& [f, m] : s.meta) {
        (void)f;
        std::set<std::string> bound;
        if (!scan_free(scan_free, m.body, bound)) return false;
      }
    }
    for (const auto& [alpha, arity] : p.decls.proj_vars) {
      auto it = s.proj.find(alpha);
      if (it == s.proj.end()) return false;
      const ProjAssign& pa = it->second;
      if (static_cast<int>(pa.comps.size()) != pa.k) return false;
      auto dit = sc.max_pi_proj.find(alpha);
      if (dit != sc.max_pi_proj.end() && pa.k < dit->second) return false;  // k >= deg
      for (const auto& comp : pa.comps) {
        if (comp.is_var) continue;
        if (comp.arg < 1 || comp.arg > arity) return false;
        for (const auto& occ : sc.proj_occ[alpha]) {
          if (comp.pos > static_cast<int>(s.seq.at(occ[comp.arg - 1]).size())) return false;
        }
      }
    }
    for (const auto& [f, arity] : p.decls.meta_vars) {
      auto it = s.meta.find(f);
      if (it == s.meta.end()) return false;
      if (it->second.arity != arity) return false;
      // every projection in the scheme body must respect occurrence lengths
      auto check_body = [&](auto&& self, const SchemePtr& b) -> bool {
        switch (b->k) {
          case SchemeExpr::K::Var:
            return true;
          case SchemeExpr::K::Proj: {
            if (b->arg < 1 || b->arg > arity) return false;
            for (const auto& occ : sc.meta_occ[f]) {
              const SeqExpr& arg = occ[b->arg - 1];
              int len = arg.k == SeqExpr::K::Lit ? static_cast<int>(arg.lit.size())
                                                 : static_cast<int>(apply_seq(s, arg).size());
              if (b->pos > len) return false;
            }
            return true;
          }
          case SchemeExpr::K::Arrow:
            return self(self, b->a) && self(self, b->b);
          case SchemeExpr::K::Forall:
            return self(self, b->a);
        }
        return false;
      };
      if (!check_body(check_body, it->second.body)) return false;
    }
    // constraints
    for (const auto& c : p.constraints) {
      if (const auto* link = std::get_if<ArityLink>(&c)) {
        if (s.proj.at(link->proj).k != s.seq_len(link->seq)) return false;
      } else {
        const auto& pin = std::get<LengthPin>(c);
        if (s.seq_len(pin.seq) != pin.len) return false;
      }
    }
    // equations, up to alpha-equivalence
    for (const auto& [l, r] : p.equations) {
      if (!alpha_eq(apply_star(s, l), apply_star(s, r))) return false;
    }
    return true;
  } catch (const apply_error&) {
    return false;
  } catch (const std::out_of_range&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

namespace {

// Rebuilds the scheme of a split metavariable from the solved parts.
SchemePtr compose_scheme(const std::map<std::string, Split>& splits, const UnifSubstitution& solved,
                         const std::string& f, int arity) {
  auto it = splits.find(f);
  if (it == splits.end()) {
    return solved.meta.at(f).body;
  }
  const Split& sp = it->second;
  SchemePtr left = compose_scheme(splits, solved, sp.f1, arity + 1);
  SchemePtr right = compose_scheme(splits, solved, sp.f2, arity + 1);
  const auto& cnames = solved.seq.at(sp.c);
  const auto& dnames = solved.seq.at(sp.d);
  // replace projections of the extra argument with the chosen binder names
  auto instantiate = [&](auto&& self, const SchemePtr& b, const std::vector<std::string>& names) -> SchemePtr {
    switch (b->k) {
      case SchemeExpr::K::Var:
        return b;
      case SchemeExpr::K::Proj:
        if (b->arg == arity + 1) {
          if (b->pos < 1 || b->pos > static_cast<int>(names.size()))
            throw std::logic_error("binder projection out of range during composition");
          return scvar(names[b->pos - 1]);
        }
        return b;
      case SchemeExpr::K::Arrow:
        return scarrow(self(self, b->a, names), self(self, b->b, names));
      case SchemeExpr::K::Forall:
        return scforall(b->name, self(self, b->a, names));
    }
    return b;
  };
  SchemePtr lbody = instantiate(instantiate, left, cnames);
  SchemePtr rbody = instantiate(instantiate, right, dnames);
  for (auto v = cnames.rbegin(); v != cnames.rend(); ++v) lbody = scforall(*v, lbody);
  for (auto v = dnames.rbegin(); v != dnames.rend(); ++v) rbody = scforall(*v, rbody);
  return scarrow(lbody, rbody);
}

}  // namespace

SolveOutcome fat_unify(const UnifProblem& p) {
  validate_problem(p);
  Engine e(p);
  e.normalize();
  if (auto f = phase1_cycle_check(e.p)) return SolveOutcome{std::nullopt, *f};
  if (!e.eliminate()) return SolveOutcome{std::nullopt, FailReason::ArrowClash};
  SolveOutcome inner = solve_simple(e.p);
  if (!inner.ok()) return inner;

  // map the solution back onto the input problem's variables
  UnifSubstitution out;
  const UnifSubstitution& solved = *inner.unifier;
  for (const auto& a : p.decls.seq_vars) out.seq[a] = solved.seq.at(e.seq_alias.at(a));
  for (const auto& [alpha, _] : p.decls.proj_vars) out.proj[alpha] = solved.proj.at(alpha);
  for (const auto& [f, arity] : p.decls.meta_vars) {
    MetaScheme m;
    m.arity = arity;
    m.body = compose_scheme(e.splits, solved, f, arity);
    out.meta[f] = std::move(m);
  }
  if (!verify_unifier(p, out)) throw std::logic_error("fat_unify produced a non-unifier");
  return SolveOutcome{std::move(out), FailReason::Exhausted};
}

}  // namespace fat::unif
