#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fat/syntax.hpp"
#include "fat/unif.hpp"

namespace fat {

// ---------------------------------------------------------------------------
// Constraint generation: each variable occurrence, application, and
// abstraction of the subject term owns a cluster of unification variables.
// ---------------------------------------------------------------------------

struct VarAllocation {
  struct VarSlot {  // a variable occurrence (or the ghost slot of an unused binder)
    std::string a, b, alpha, F, G;
    std::vector<std::string> trail;  // sequence variables appended by enclosing nodes
  };
  struct AppSlot {
    std::string a, b, alpha, F, G;
    std::vector<std::string> trail;
  };
  struct AbsSlot {
    std::string b, G;
    std::vector<std::string> trail;
  };
  std::map<std::string, VarSlot> vars;  // keyed by occurrence path ("0.1...")
  std::map<std::string, AppSlot> apps;  // keyed by subterm path
  std::map<std::string, AbsSlot> abss;
  std::string root_b, root_G;  // the subject term's own b/G pair
};

// Appends the sequence variable a as a trailing argument of every projection
// and metavariable application in the equations, bumping declared arities.
void extend_equations(std::vector<std::pair<unif::StarPtr, unif::StarPtr>>& eqs,
                      unif::Decls& decls, const std::string& a);

// The equation system of a bare term, without context/goal boundaries.
std::pair<std::vector<std::pair<unif::StarPtr, unif::StarPtr>>, VarAllocation> gen_equations(
    const TermPtr& t);

// The full unification problem for the judgment ctx |- t : a. Both ctx and a
// are renamed to the Barendregt convention internally; the renamed forms are
// returned through the optional out-parameters.
unif::UnifProblem gen_problem(const TypingContext& ctx, const TermPtr& t, const TypePtr& a,
                              VarAllocation* alloc_out = nullptr,
                              TypingContext* renamed_ctx = nullptr, TypePtr* renamed_goal = nullptr);

// ---------------------------------------------------------------------------
// Synthetic derivations: independently checkable certificates.
// ---------------------------------------------------------------------------

struct SyntheticDerivation;
using DerivPtr = std::shared_ptr<const SyntheticDerivation>;

struct SyntheticDerivation {
  enum class Rule { Var, Abs, App };
  Rule rule;
  TypingContext ctx;
  TermPtr term;
  TypePtr type;                        // ctx |- term : type
  std::vector<std::string> gens;       // generalized variables, disjoint from FV(ctx)
  std::vector<std::string> witnesses;  // atomic instantiation witnesses (Var/App)
  std::vector<DerivPtr> kids;
};

// Validates every node against the three synthetic rules, independent of the
// solver: instantiations use atomic witnesses only, generalized variables
// avoid the free variables of the context.
bool check_derivation(const DerivPtr& d);

enum class RejectReason { StlcFail, Cycle, ArrowClash, Exhausted };

std::string reject_reason_name(RejectReason r);

struct CheckResult {
  std::optional<DerivPtr> derivation;  // present iff accepted
  RejectReason reason = RejectReason::Exhausted;
  bool accepted() const { return derivation.has_value(); }
};

// Decides ctx |- t : a. Phase 0 checks the erased judgment in the simply typed
// calculus; phases 1-2 run the unification pipeline; every accept carries a
// derivation that check_derivation validates.
CheckResult check(const TypingContext& ctx, const TermPtr& t, const TypePtr& a);

// Decides typability of t under ctx via the judgment (\x y. y) t : forall X. X -> X.
CheckResult typable(const TypingContext& ctx, const TermPtr& t);

}  // namespace fat
