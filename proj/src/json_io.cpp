#include "fat/json_io.hpp"

namespace fat {

using unif::Constraint;
using unif::QType;
using unif::SeqExpr;
using unif::StarPtr;

json context_to_json(const TypingContext& ctx) {
  json j = json::object();
  for (const auto& [x, a] : ctx) j[x] = print_type(a);
  return j;
}

TypingContext context_from_json(const json& j) {
  TypingContext ctx;
  for (const auto& [x, a] : j.items()) ctx[x] = parse_type(a.get<std::string>());
  return ctx;
}

// ---------------------------------------------------------------------------
// Unification problems.
// ---------------------------------------------------------------------------

namespace {

json seq_to_json(const SeqExpr& s) {
  switch (s.k) {
    case SeqExpr::K::Lit:
      return json::array({"lit", s.lit});
    case SeqExpr::K::Var:
      return json::array({"svar", s.var});
    case SeqExpr::K::Proj:
      return json::array({"proj", s.var, s.args});
  }
  throw std::logic_error("unreachable");
}

SeqExpr seq_from_json(const json& j) {
  const std::string tag = j.at(0).get<std::string>();
  if (tag == "lit") return unif::slit(j.at(1).get<std::vector<std::string>>());
  if (tag == "svar") return unif::svar(j.at(1).get<std::string>());
  if (tag == "proj")
    return unif::sproj(j.at(1).get<std::string>(), j.at(2).get<std::vector<std::string>>());
  throw std::invalid_argument("unknown sequence tag: " + tag);
}

json star_to_json(const StarPtr& e);

json qtype_to_json(const QType& q) {
  return json::array({q.binder, star_to_json(q.body)});
}

json star_to_json(const StarPtr& e) {
  switch (e->k) {
    case unif::StarExpr::K::Var:
      return json::array({"var", e->name});
    case unif::StarExpr::K::Pi:
      return json::array({"pi", e->index, seq_to_json(e->seq)});
    case unif::StarExpr::K::Meta: {
      json args = json::array();
      for (const auto& s : e->args) args.push_back(seq_to_json(s));
      return json::array({"meta", e->name, args});
    }
    case unif::StarExpr::K::Arrow:
      return json::array({"arrow", qtype_to_json(e->l), qtype_to_json(e->r)});
  }
  throw std::logic_error("unreachable");
}

StarPtr star_from_json(const json& j);

QType qtype_from_json(const json& j) {
  return QType{j.at(0).get<std::string>(), star_from_json(j.at(1))};
}

StarPtr star_from_json(const json& j) {
  const std::string tag = j.at(0).get<std::string>();
  if (tag == "var") return unif::evar(j.at(1).get<std::string>());
  if (tag == "pi") return unif::epi(j.at(1).get<int>(), seq_from_json(j.at(2)));
  if (tag == "meta") {
    std::vector<SeqExpr> args;
    for (const auto& a : j.at(2)) args.push_back(seq_from_json(a));
    return unif::emeta(j.at(1).get<std::string>(), std::move(args));
  }
  if (tag == "arrow") return unif::earrow(qtype_from_json(j.at(1)), qtype_from_json(j.at(2)));
  throw std::invalid_argument("unknown star tag: " + tag);
}

}  // namespace

json problem_to_json(const unif::UnifProblem& p) {
  json j;
  j["seq_vars"] = p.decls.seq_vars;
  j["proj_vars"] = json::array();
  for (const auto& [n, k] : p.decls.proj_vars)
    j["proj_vars"].push_back({{"name", n}, {"arity", k}});
  j["meta_vars"] = json::array();
  for (const auto& [n, k] : p.decls.meta_vars)
    j["meta_vars"].push_back({{"name", n}, {"arity", k}});
  j["equations"] = json::array();
  for (const auto& [l, r] : p.equations)
    j["equations"].push_back(json::array({star_to_json(l), star_to_json(r)}));
  j["constraints"] = json::array();
  for (const auto& c : p.constraints) {
    if (const auto* a = std::get_if<unif::ArityLink>(&c))
      j["constraints"].push_back(json::array({"arity", a->proj, a->seq}));
    else if (const auto* l = std::get_if<unif::LengthPin>(&c))
      j["constraints"].push_back(json::array({"len", l->seq, l->len}));
  }
  return j;
}

unif::UnifProblem problem_from_json(const json& j) {
  unif::UnifProblem p;
  for (const auto& n : j.at("seq_vars")) p.decls.seq_vars.insert(n.get<std::string>());
  for (const auto& v : j.value("proj_vars", json::array()))
    p.decls.proj_vars[v.at("name").get<std::string>()] = v.at("arity").get<int>();
  for (const auto& v : j.value("meta_vars", json::array()))
    p.decls.meta_vars[v.at("name").get<std::string>()] = v.at("arity").get<int>();
  for (const auto& eq : j.at("equations"))
    p.equations.emplace_back(star_from_json(eq.at(0)), star_from_json(eq.at(1)));
  for (const auto& c : j.value("constraints", json::array())) {
    const std::string tag = c.at(0).get<std::string>();
    if (tag == "arity")
      p.constraints.push_back(
          unif::ArityLink{c.at(1).get<std::string>(), c.at(2).get<std::string>()});
    else if (tag == "len")
      p.constraints.push_back(unif::LengthPin{c.at(1).get<std::string>(), c.at(2).get<int>()});
    else
      throw std::invalid_argument("unknown constraint tag: " + tag);
  }
  unif::validate_problem(p);
  return p;
}

// ---------------------------------------------------------------------------
// Unifiers and derivations.
// ---------------------------------------------------------------------------

namespace {

json scheme_to_json(const unif::SchemePtr& s) {
  switch (s->k) {
    case unif::SchemeExpr::K::Var:
      return json::array({"var", s->name});
    case unif::SchemeExpr::K::Proj:
      return json::array({"proj", s->arg, s->pos});
    case unif::SchemeExpr::K::Arrow:
      return json::array({"arrow", scheme_to_json(s->a), scheme_to_json(s->b)});
    case unif::SchemeExpr::K::Forall:
      return json::array({"forall", s->name, scheme_to_json(s->a)});
  }
  throw std::logic_error("unreachable");
}

}  // namespace

json unifier_to_json(const unif::UnifSubstitution& s) {
  json j;
  j["seq"] = json::object();
  for (const auto& [a, vals] : s.seq) j["seq"][a] = vals;
  j["proj"] = json::object();
  for (const auto& [al, pa] : s.proj) {
    json comps = json::array();
    for (const auto& c : pa.comps) {
      if (c.is_var)
        comps.push_back(c.var);
      else
        comps.push_back({{"arg", c.arg}, {"pos", c.pos}});
    }
    j["proj"][al] = comps;
  }
  j["meta"] = json::object();
  for (const auto& [f, m] : s.meta)
    j["meta"][f] = {{"arity", m.arity}, {"body", scheme_to_json(m.body)}};
  return j;
}

json derivation_to_json(const DerivPtr& d) {
  json j;
  switch (d->rule) {
    case SyntheticDerivation::Rule::Var:
      j["rule"] = "var";
      break;
    case SyntheticDerivation::Rule::Abs:
      j["rule"] = "abs";
      break;
    case SyntheticDerivation::Rule::App:
      j["rule"] = "app";
      break;
  }
  j["ctx"] = context_to_json(d->ctx);
  j["term"] = print_term(d->term);
  j["type"] = print_type(d->type);
  j["gens"] = d->gens;
  j["witnesses"] = d->witnesses;
  j["kids"] = json::array();
  for (const auto& k : d->kids) j["kids"].push_back(derivation_to_json(k));
  return j;
}

// ---------------------------------------------------------------------------
// Extended polynomials.
// ---------------------------------------------------------------------------

json extpoly_to_json(const ExtPoly& p) {
  json j;
  j["arity"] = p.arity;
  j["regions"] = json::array();
  for (const auto& [zeros, monos] : p.regions) {
    json region;
    region["zeros"] = zeros;
    region["monomials"] = json::array();
    for (const auto& [exps, coeff] : monos)
      region["monomials"].push_back({{"exps", exps}, {"coeff", coeff}});
    j["regions"].push_back(region);
  }
  return j;
}

ExtPoly extpoly_from_json(const json& j) {
  ExtPoly p;
  p.arity = j.at("arity").get<int>();
  for (const auto& region : j.at("regions")) {
    auto zeros = region.at("zeros").get<std::vector<int>>();
    auto& monos = p.regions[zeros];
    for (const auto& m : region.value("monomials", json::array()))
      monos[m.at("exps").get<std::vector<int>>()] = m.at("coeff").get<uint64_t>();
  }
  return p;
}

}  // namespace fat
