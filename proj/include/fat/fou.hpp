#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fat/syntax.hpp"

namespace fat {

// First-order terms over arrows: used as the phase-1 skeleton language and as
// simple types with schematic variables.
struct FoTerm;
using FoPtr = std::shared_ptr<const FoTerm>;

struct FoTerm {
  enum class K { Var, Const, Arrow };
  K k;
  std::string name;
  FoPtr l, r;
};

FoPtr fovar(std::string name);
FoPtr foconst(std::string name);
FoPtr foarrow(FoPtr l, FoPtr r);

bool fo_eq(const FoPtr& a, const FoPtr& b);
std::string print_fo(const FoPtr& t);

struct FoProblem {
  std::vector<std::pair<FoPtr, FoPtr>> equations;
};

using FoSubstitution = std::map<std::string, FoPtr>;

enum class FoFail { Cycle, Clash };
using FoResult = std::variant<FoSubstitution, FoFail>;

FoResult fo_unify(const FoProblem& p);
FoPtr fo_apply(const FoSubstitution& s, const FoPtr& t);

// Simply typed lambda calculus over the single base type o.
bool stlc_typecheck(const std::map<std::string, SimplePtr>& ctx, const TermPtr& t, const SimplePtr& a);
// Principal type with schematic variables, or nullopt if untypable.
std::optional<FoPtr> stlc_infer(const std::map<std::string, SimplePtr>& ctx, const TermPtr& t);
// Collapses schematic variables to the base type.
SimplePtr ground_simple(const FoPtr& t);

}  // namespace fat
