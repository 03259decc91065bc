#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fat/fou.hpp"
#include "fat/syntax.hpp"

namespace fat::unif {

// ---------------------------------------------------------------------------
// The three-sorted unification language.
//   sequence expressions:  <X1 ... Xn>  |  a  |  al a1 ... an   (projection app)
//   star expressions:      X  |  pi^l(s)  |  F s1 ... sn  |  Phi => Psi
//   quantified types:      Phi ::= forall a. phi
// ---------------------------------------------------------------------------

struct SeqExpr {
  enum class K { Lit, Var, Proj };
  K k = K::Var;
  std::vector<std::string> lit;   // Lit: concrete type-variable names
  std::string var;                // Var: sequence variable; Proj: projection variable
  std::vector<std::string> args;  // Proj: sequence-variable arguments
};

SeqExpr slit(std::vector<std::string> names);
SeqExpr svar(std::string name);
SeqExpr sproj(std::string projvar, std::vector<std::string> args);
bool seq_eq(const SeqExpr& a, const SeqExpr& b);

struct StarExpr;
using StarPtr = std::shared_ptr<const StarExpr>;

struct QType {
  std::string binder;  // always a sequence variable
  StarPtr body;
};

struct StarExpr {
  enum class K { Var, Pi, Meta, Arrow };
  K k;
  std::string name;           // Var: type variable; Meta: metavariable
  int index = 0;              // Pi
  SeqExpr seq;                // Pi
  std::vector<SeqExpr> args;  // Meta
  QType l, r;                 // Arrow
};

StarPtr evar(std::string name);
StarPtr epi(int index, SeqExpr seq);
StarPtr emeta(std::string name, std::vector<SeqExpr> args);
StarPtr earrow(QType l, QType r);
bool star_eq(const StarPtr& a, const StarPtr& b);
std::string print_star(const StarPtr& e);
std::string print_seq(const SeqExpr& s);

struct ArityLink {
  std::string proj, seq;
};
struct LengthPin {
  std::string seq;
  int len;
};
using Constraint = std::variant<ArityLink, LengthPin>;

struct Decls {
  std::set<std::string> seq_vars;
  std::map<std::string, int> proj_vars;  // name -> arity
  std::map<std::string, int> meta_vars;  // name -> arity
};

struct UnifProblem {
  Decls decls;
  std::vector<std::pair<StarPtr, StarPtr>> equations;
  std::vector<Constraint> constraints;
};

// Checks arity agreement and that every variable in U/E is declared.
void validate_problem(const UnifProblem& p);

// ---------------------------------------------------------------------------
// Substitutions.
// ---------------------------------------------------------------------------

struct ProjComponent {  // \x1...xn. X   or   \x1...xn. pi^pos(x_arg)
  bool is_var = true;
  std::string var;  // when is_var
  int arg = 0;      // 1-based argument index, when !is_var
  int pos = 0;      // projection position, when !is_var
};

struct ProjAssign {
  int k = 0;
  std::vector<ProjComponent> comps;  // length k
};

// Scheme bodies: X | pi^pos(rho_arg) | A => B | forall X. A
struct SchemeExpr;
using SchemePtr = std::shared_ptr<const SchemeExpr>;
struct SchemeExpr {
  enum class K { Var, Proj, Arrow, Forall };
  K k;
  std::string name;  // Var / Forall binder
  int arg = 0, pos = 0;
  SchemePtr a, b;
};

SchemePtr scvar(std::string name);
SchemePtr scproj(int arg, int pos);
SchemePtr scarrow(SchemePtr a, SchemePtr b);
SchemePtr scforall(std::string name, SchemePtr body);

struct MetaScheme {
  int arity = 0;
  SchemePtr body;
};

struct UnifSubstitution {
  std::map<std::string, std::vector<std::string>> seq;  // a -> chosen variable sequence
  std::map<std::string, ProjAssign> proj;
  std::map<std::string, MetaScheme> meta;

  int seq_len(const std::string& a) const { return static_cast<int>(seq.at(a).size()); }
};

// Applying a substitution, per the S(.) clauses.
std::vector<std::string> apply_seq(const UnifSubstitution& s, const SeqExpr& e);
TypePtr apply_star(const UnifSubstitution& s, const StarPtr& e);
TypePtr apply_qtype(const UnifSubstitution& s, const QType& q);
TypePtr apply_scheme(const MetaScheme& m, const std::vector<std::vector<std::string>>& args);

enum class FailReason { Cycle, ArrowClash, Exhausted };

struct SolveOutcome {
  std::optional<UnifSubstitution> unifier;
  FailReason reason = FailReason::Exhausted;
  bool ok() const { return unifier.has_value(); }
};

// ---------------------------------------------------------------------------
// The decision pipeline.
// ---------------------------------------------------------------------------

// Splits every ArrowE = ArrowE equation, renaming right binders to the left.
UnifProblem normalize_problem(const UnifProblem& p);

// First-order skeleton: one FoVar per metavariable, one shared FoConst for all
// sequence, projection, and type-variable material; quantifiers dropped.
FoProblem build_fo_skeleton(const UnifProblem& p);

// Returns nullopt when the skeleton unifies, Cycle when the occurs check fires.
std::optional<FailReason> phase1_cycle_check(const UnifProblem& p);

struct ArrowElimResult {
  bool clash = false;
  UnifProblem problem;  // simple when !clash
};

// Expands metavariables forced into arrow shape; requires p normalized and
// acyclic. Sets clash for X = Phi=>Psi or pi^l = Phi=>Psi equations.
ArrowElimResult eliminate_arrows(const UnifProblem& p);

// Exhaustive bounded search on a simple problem.
SolveOutcome solve_simple(const UnifProblem& p);

bool verify_unifier(const UnifProblem& p, const UnifSubstitution& s);

// normalize -> phase 1 -> arrow elimination -> solve, with the result mapped
// back to the input problem's variables and verified.
SolveOutcome fat_unify(const UnifProblem& p);

}  // namespace fat::unif
