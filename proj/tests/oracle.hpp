#pragma once

#include "fat/syntax.hpp"

// Brute-force reference decision for small judgments, built directly on the
// synthetic rules. Exhaustive within explicit bounds: instantiation witnesses
// are drawn from the judgment's variables plus two fresh names, generalization
// prefixes follow the goal type, and domain guesses for lambdas in function
// position come from a small enumerated type universe. Independent of the
// solver by construction.
bool oracle_check(const fat::TypingContext& ctx, const fat::TermPtr& t, const fat::TypePtr& a);
