#pragma once

#include <json.hpp>

#include "fat/equivalence.hpp"
#include "fat/typecheck.hpp"
#include "fat/unif.hpp"

namespace fat {

using json = nlohmann::json;

// Typing contexts: a JSON object mapping variable names to type strings.
json context_to_json(const TypingContext& ctx);
TypingContext context_from_json(const json& j);

// Unification problems:
//   { "seq_vars": [name],
//     "proj_vars": [{"name": n, "arity": k}],
//     "meta_vars": [{"name": n, "arity": k}],
//     "equations": [[star, star]],
//     "constraints": [["arity", proj, seq] | ["len", seq, k]] }
// with star expressions as nested tagged arrays:
//   ["var", X] | ["pi", l, seq] | ["meta", F, [seq...]]
//   | ["arrow", [binder, star], [binder, star]]
// and sequence expressions:
//   ["lit", [X...]] | ["svar", a] | ["proj", al, [a...]]
json problem_to_json(const unif::UnifProblem& p);
unif::UnifProblem problem_from_json(const json& j);

// Unifiers: { "seq": {a: [X...]},
//             "proj": {al: [component...]},   component = X | {"arg": i, "pos": l}
//             "meta": {F: {"arity": k, "body": scheme}} }
// with scheme bodies as tagged arrays:
//   ["var", X] | ["proj", arg, pos] | ["arrow", s, s] | ["forall", X, s]
json unifier_to_json(const unif::UnifSubstitution& s);

// Derivation certificates, one node per synthetic rule application.
json derivation_to_json(const DerivPtr& d);

// Extended polynomials:
//   { "arity": k, "regions": [{"zeros": [i], "monomials": [{"exps": [e], "coeff": c}]}] }
json extpoly_to_json(const ExtPoly& p);
ExtPoly extpoly_from_json(const json& j);

}  // namespace fat
