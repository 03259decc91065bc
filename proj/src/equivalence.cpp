#include "fat/equivalence.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "fat/encodings.hpp"
#include "fat/typecheck.hpp"

namespace fat {

TypePtr bool_type() {
  static const TypePtr t = parse_type("forall X. X -> X -> X");
  return t;
}

TypePtr nat_type() {
  static const TypePtr t = parse_type("forall X. (X -> X) -> X -> X");
  return t;
}

TypePtr top_type() {
  static const TypePtr t = parse_type("forall X. X -> X");
  return t;
}

namespace {

TypePtr nat_power_type(int k) {
  TypePtr t = nat_type();
  for (int i = 0; i < k; ++i) t = tarrow(nat_type(), t);
  return t;
}

uint64_t eval_unchecked(const TermPtr& t, const std::vector<uint64_t>& args, int64_t fuel) {
  TermPtr app = t;
  for (uint64_t n : args) app = mkapp(app, church_numeral(n));
  auto r = read_numeral(betaeta_normal_form(app, fuel));
  if (!r) throw not_a_numeral();
  return *r;
}

// ---------------------------------------------------------------------------
// Exact rational interpolation.
// ---------------------------------------------------------------------------

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

struct Rat {
  __int128 n = 0, d = 1;

  static Rat make(__int128 num, __int128 den) {
    if (den == 0) throw std::logic_error("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 g = gcd128(num, den);
    if (g == 0) g = 1;
    return Rat{num / g, den / g};
  }

  Rat operator+(const Rat& o) const { return make(n * o.d + o.n * d, d * o.d); }
  Rat operator-(const Rat& o) const { return make(n * o.d - o.n * d, d * o.d); }
  Rat operator*(const Rat& o) const { return make(n * o.n, d * o.d); }
  Rat operator/(const Rat& o) const { return make(n * o.d, d * o.n); }
  bool zero() const { return n == 0; }
};

// Coefficients of the unique polynomial of degree < ys.size() through the
// points (1, ys[0]), (2, ys[1]), ...
std::vector<Rat> interp_univariate(const std::vector<Rat>& ys) {
  int n = static_cast<int>(ys.size());
  std::vector<Rat> acc(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<Rat> basis{Rat{1, 1}};
    Rat denom{1, 1};
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      // basis *= (x - (j+1))
      std::vector<Rat> next(basis.size() + 1);
      for (size_t e = 0; e < basis.size(); ++e) {
        next[e + 1] = next[e + 1] + basis[e];
        next[e] = next[e] - basis[e] * Rat{j + 1, 1};
      }
      basis = std::move(next);
      denom = denom * Rat{i - j, 1};
    }
    Rat scale = ys[static_cast<size_t>(i)] / denom;
    for (size_t e = 0; e < basis.size(); ++e)
      acc[e] = acc[e] + basis[e] * scale;
  }
  return acc;
}

using MPoly = std::map<std::vector<int>, Rat>;

// Tensor-product interpolation over the grid {1..g}^m.
MPoly interp_multi(int m, int g, std::vector<int>& prefix,
                   const std::function<Rat(const std::vector<int>&)>& F) {
  if (m == 0) {
    MPoly out;
    Rat v = F(prefix);
    if (!v.zero()) out[{}] = v;
    return out;
  }
  std::vector<MPoly> slices;
  std::set<std::vector<int>> keys;
  for (int v = 1; v <= g; ++v) {
    prefix.push_back(v);
    slices.push_back(interp_multi(m - 1, g, prefix, F));
    prefix.pop_back();
    for (const auto& [k, _] : slices.back()) keys.insert(k);
  }
  MPoly out;
  for (const auto& k : keys) {
    std::vector<Rat> ys;
    for (const MPoly& s : slices) {
      auto it = s.find(k);
      ys.push_back(it == s.end() ? Rat{} : it->second);
    }
    std::vector<Rat> coeffs = interp_univariate(ys);
    for (size_t e = 0; e < coeffs.size(); ++e) {
      if (coeffs[e].zero()) continue;
      std::vector<int> key{static_cast<int>(e)};
      key.insert(key.end(), k.begin(), k.end());
      out[key] = out[key] + coeffs[e];
    }
  }
  return out;
}

int bound_occurrences(const TermPtr& t, std::set<std::string>& bound) {
  switch (t->k) {
    case Term::K::Var:
      return bound.count(t->name) ? 1 : 0;
    case Term::K::Star:
      return 0;
    case Term::K::Abs: {
      bool was = bound.count(t->name) > 0;
      bound.insert(t->name);
      int n = bound_occurrences(t->body, bound);
      if (!was) bound.erase(t->name);
      return n;
    }
    case Term::K::TyAbs:
      return bound_occurrences(t->body, bound);
    case Term::K::App:
      return bound_occurrences(t->fun, bound) + bound_occurrences(t->arg, bound);
    case Term::K::TyApp:
      return bound_occurrences(t->fun, bound);
  }
  return 0;
}

std::vector<std::vector<int>> all_zero_patterns(int arity) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << arity); ++mask) {
    std::vector<int> zeros;
    for (int i = 0; i < arity; ++i)
      if (mask & (1 << i)) zeros.push_back(i + 1);
    out.push_back(std::move(zeros));
  }
  return out;
}

// One interpolation pass at degree bound D; nullopt when the fit is not a
// natural-coefficient polynomial (the bound was too low).
std::optional<ExtPoly> try_fit(const TermPtr& t, int arity, int D, int64_t fuel) {
  ExtPoly p;
  p.arity = arity;
  for (const auto& zeros : all_zero_patterns(arity)) {
    std::vector<int> free_idx;  // 1-based positions ranging over positives
    for (int i = 1; i <= arity; ++i)
      if (std::find(zeros.begin(), zeros.end(), i) == zeros.end()) free_idx.push_back(i);
    auto F = [&](const std::vector<int>& vals) -> Rat {
      std::vector<uint64_t> args(static_cast<size_t>(arity), 0);
      for (size_t i = 0; i < free_idx.size(); ++i)
        args[static_cast<size_t>(free_idx[i] - 1)] = static_cast<uint64_t>(vals[i]);
      return Rat{static_cast<long long>(eval_unchecked(t, args, fuel)), 1};
    };
    std::vector<int> prefix;
    MPoly fit = interp_multi(static_cast<int>(free_idx.size()), D + 1, prefix, F);
    auto& mono = p.regions[zeros];
    for (const auto& [exps, c] : fit) {
      if (c.d != 1 || c.n < 0) return std::nullopt;
      if (c.n == 0) continue;
      std::vector<int> full(static_cast<size_t>(arity), 0);
      for (size_t i = 0; i < free_idx.size(); ++i)
        full[static_cast<size_t>(free_idx[i] - 1)] = exps[i];
      mono[full] = static_cast<uint64_t>(c.n);
    }
  }
  return p;
}

bool verify_fit(const TermPtr& t, const ExtPoly& p, int D, int64_t fuel) {
  for (const auto& [zeros, _] : p.regions) {
    std::vector<int> free_idx;
    for (int i = 1; i <= p.arity; ++i)
      if (std::find(zeros.begin(), zeros.end(), i) == zeros.end()) free_idx.push_back(i);
    int samples = free_idx.empty() ? 1 : 10;
    for (int j = 0; j < samples; ++j) {
      std::vector<uint64_t> args(static_cast<size_t>(p.arity), 0);
      for (size_t i = 0; i < free_idx.size(); ++i)
        args[static_cast<size_t>(free_idx[i] - 1)] =
            static_cast<uint64_t>(D + 2 + (7 * j + 3 * static_cast<int>(i)) % (D + 10));
      if (extpoly_eval(p, args) != eval_unchecked(t, args, fuel)) return false;
    }
  }
  return true;
}

uint64_t ipow(uint64_t base, int e) {
  uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

uint64_t eval_numeric(const TermPtr& t, const std::vector<uint64_t>& args, int64_t fuel) {
  CheckResult r = check({}, erase_term(t), nat_power_type(static_cast<int>(args.size())));
  if (!r.accepted())
    throw std::invalid_argument("term is not typable at Nat^" + std::to_string(args.size()) +
                                " -> Nat (" + reject_reason_name(r.reason) + ")");
  return eval_unchecked(t, args, fuel);
}

uint64_t extpoly_eval(const ExtPoly& p, const std::vector<uint64_t>& args) {
  if (static_cast<int>(args.size()) != p.arity)
    throw std::invalid_argument("arity mismatch in extpoly_eval");
  std::vector<int> zeros;
  for (int i = 1; i <= p.arity; ++i)
    if (args[static_cast<size_t>(i - 1)] == 0) zeros.push_back(i);
  auto it = p.regions.find(zeros);
  if (it == p.regions.end()) throw std::logic_error("missing region in ExtPoly");
  uint64_t total = 0;
  for (const auto& [exps, c] : it->second) {
    uint64_t m = c;
    for (int i = 0; i < p.arity; ++i) m *= ipow(args[static_cast<size_t>(i)], exps[static_cast<size_t>(i)]);
    total += m;
  }
  return total;
}

ExtPoly extract_extpoly(const TermPtr& t, int arity, int64_t fuel) {
  if (arity < 0 || arity > 6) throw std::invalid_argument("unsupported arity");
  CheckResult r = check({}, erase_term(t), nat_power_type(arity));
  if (!r.accepted())
    throw std::invalid_argument("term is not typable at Nat^" + std::to_string(arity) +
                                " -> Nat (" + reject_reason_name(r.reason) + ")");
  std::set<std::string> bv;
  int D = std::max(1, bound_occurrences(betaeta_normal_form(t, fuel), bv));
  for (int attempt = 0; attempt <= 3; ++attempt, D *= 2) {
    auto fit = try_fit(t, arity, D, fuel);
    if (fit && verify_fit(t, *fit, D, fuel)) return *fit;
  }
  throw degree_bound_exceeded();
}

bool extpoly_equal(const ExtPoly& p, const ExtPoly& q) {
  if (p.arity != q.arity) throw std::invalid_argument("arity mismatch in extpoly_equal");
  auto canon = [](const ExtPoly& e) {
    std::map<std::vector<int>, std::map<std::vector<int>, uint64_t>> out;
    for (const auto& [z, ms] : e.regions)
      for (const auto& [exp, c] : ms)
        if (c != 0) out[z][exp] = c;
    return out;
  };
  return canon(p) == canon(q);
}

std::optional<std::vector<uint64_t>> extpoly_diff(const ExtPoly& p, const ExtPoly& q) {
  if (p.arity != q.arity) throw std::invalid_argument("arity mismatch in extpoly_diff");
  if (extpoly_equal(p, q)) return std::nullopt;
  for (const auto& zeros : all_zero_patterns(p.arity)) {
    std::vector<int> free_idx;
    for (int i = 1; i <= p.arity; ++i)
      if (std::find(zeros.begin(), zeros.end(), i) == zeros.end()) free_idx.push_back(i);
    // per-variable degree bound for the grid on which distinct polynomials
    // must differ
    int dmax = 0;
    for (const ExtPoly* e : {&p, &q}) {
      auto it = e->regions.find(zeros);
      if (it == e->regions.end()) continue;
      for (const auto& [exps, _] : it->second)
        for (int x : exps) dmax = std::max(dmax, x);
    }
    int side = dmax + 1;
    std::vector<int> idx(free_idx.size(), 1);
    for (;;) {
      std::vector<uint64_t> args(static_cast<size_t>(p.arity), 0);
      for (size_t i = 0; i < free_idx.size(); ++i)
        args[static_cast<size_t>(free_idx[i] - 1)] = static_cast<uint64_t>(idx[i]);
      if (extpoly_eval(p, args) != extpoly_eval(q, args)) return args;
      size_t pos = 0;
      while (pos < idx.size() && idx[pos] == side) idx[pos++] = 1;
      if (pos == idx.size()) break;
      ++idx[pos];
    }
  }
  return std::nullopt;
}

EqNatResult eq_nat_numerical(const TermPtr& t, const TermPtr& u, int arity, int64_t fuel) {
  ExtPoly pt = extract_extpoly(t, arity, fuel);
  ExtPoly pu = extract_extpoly(u, arity, fuel);
  if (extpoly_equal(pt, pu)) return EqNatResult{true, {}};
  auto w = extpoly_diff(pt, pu);
  if (!w) throw std::logic_error("unequal polynomials without a differing tuple");
  return EqNatResult{false, *w};
}

// ---------------------------------------------------------------------------
// Separating constructions.
// ---------------------------------------------------------------------------

namespace {

TypePtr club_to_var(const TypePtr& a, const std::string& y) {
  switch (a->k) {
    case Type::K::Var:
      return a;
    case Type::K::Club:
      return tvar(y);
    case Type::K::Arrow:
      return tarrow(club_to_var(a->a, y), club_to_var(a->b, y));
    case Type::K::Forall:
      return tforall(a->name, club_to_var(a->a, y));
  }
  return a;
}

TermPtr star_to_var(const TermPtr& t, const std::string& y) {
  switch (t->k) {
    case Term::K::Var:
      return t;
    case Term::K::Star:
      return mkvar(y);
    case Term::K::Abs:
      return mkabs(t->name, star_to_var(t->body, y));
    case Term::K::TyAbs:
      return mktyabs(t->name, star_to_var(t->body, y));
    case Term::K::App:
      return mkapp(star_to_var(t->fun, y), star_to_var(t->arg, y));
    case Term::K::TyApp:
      return mktyapp(star_to_var(t->fun, y), t->witness);
  }
  return t;
}

}  // namespace

TypePtr star_domain(const TypePtr& A) {
  NameSupply s;
  s.note_type(A);
  std::string y = s.fresh("Y");
  return tarrow(tvar(y), club_to_var(A, y));
}

std::pair<TermPtr, TermPtr> separating_pair(const TypePtr& A) {
  TypePtr as = star_domain(A);
  TermPtr u = mkabs("x", church_false());
  TermPtr io = io_plus_context(as, top_type(), bool_type());
  TermPtr v = mkabs("x", mkapp(mkapp(fill_hole(io, mkvar("x")), mkabs("x", church_true())),
                               mkabs("x", church_false())));
  return {u, v};
}

std::pair<TermPtr, TermPtr> separating_pair_nat(const TypePtr& A) { return separating_pair(A); }

TermPtr separating_context(const TypePtr& A, const TermPtr& witness) {
  if (!is_curry(witness)) throw witness_rejected("witness must be a Curry-style term");
  if (!free_term_vars(witness).empty()) throw witness_rejected("witness must be closed");
  CheckResult r = check({}, witness, A);
  if (!r.accepted()) throw witness_rejected(reject_reason_name(r.reason));
  NameSupply s;
  s.note_term(witness);
  std::string y = s.fresh("y");
  TermPtr tstar = mkabs(y, star_to_var(witness, y));
  TermPtr k = mkapp(mkvar(kHole), inj(1, tstar, star_domain(A), top_type()));
  auto [u, v] = separating_pair(A);
  if (!betaeta_equal(erase_term(fill_hole(k, u)), church_false()))
    throw std::logic_error("separating context does not send u to false");
  if (!betaeta_equal(erase_term(fill_hole(k, v)), church_true()))
    throw std::logic_error("separating context does not send v to true");
  return k;
}

}  // namespace fat
