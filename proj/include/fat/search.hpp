#pragma once

#include <optional>

#include "fat/syntax.hpp"

namespace fat {

// Exhaustive eta-long beta-normal inhabitation search, with quantifier
// witnesses restricted to type variables. Depth counts rule applications on
// the current branch; instantiation witnesses range over the variables in
// scope plus one canonical fresh variable. Returns the first inhabitant found
// in a fixed deterministic order, with explicit type abstractions and
// applications; none when the type has no proof within the bound.
std::optional<TermPtr> bounded_search(const TypePtr& a, int depth);

}  // namespace fat
