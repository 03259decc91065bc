#pragma once

#include "fat/syntax.hpp"

namespace fat {

// Term contexts are terms with the distinguished free variable `_` marking
// the hole; fill_hole substitutes capture-avoidingly, so context binders
// never capture variables of the plugged term.
inline const std::string kHole = "_";

TermPtr fill_hole(const TermPtr& context, const TermPtr& t);

// Encoded connectives, with the quantified variable fresh for A and B:
//   sum:   forall X. (A -> X) -> (B -> X) -> X
//   prod:  forall X. (A -> B -> X) -> X
TypePtr encoded_sum(const TypePtr& A, const TypePtr& B);
TypePtr encoded_prod(const TypePtr& A, const TypePtr& B);

// Church-style constructors and the impredicative projections.
//   inj(1,t)     = /\X. \f g. f t          : encoded_sum(A,B)
//   pair(t,u)    = /\X. \f. f t u          : encoded_prod(A,B)
//   proj(1,t)    = t [A] (\x y. x)         : A       (witness A, not atomic)
TermPtr inj(int i, const TermPtr& t, const TypePtr& A, const TypePtr& B);
TermPtr pair_term(const TermPtr& t, const TermPtr& u, const TypePtr& A, const TypePtr& B);
TermPtr proj(int i, const TermPtr& t, const TypePtr& A, const TypePtr& B);

// Instantiation-overflow eliminator contexts, by induction on C. The hole has
// type encoded_sum(A,B) (resp. encoded_prod(A,B)); the context has type
// (A -> C) -> (B -> C) -> C (resp. (A -> B -> C) -> C); every type
// application in the output instantiates with a type variable. Base types in
// C must be variables; a # base is rejected.
TermPtr io_plus_context(const TypePtr& A, const TypePtr& B, const TypePtr& C);
TermPtr io_times_context(const TypePtr& A, const TypePtr& B, const TypePtr& C);

// Predicative destructors: the overflow context applied to the branches.
//   case:  io_plus_context[t] (\x. u) (\y. v)
//   split: io_times_context[t] (\x. \y. u)
TermPtr case_predicative(const TermPtr& t, const std::string& x, const TermPtr& u,
                         const std::string& y, const TermPtr& v, const TypePtr& A,
                         const TypePtr& B, const TypePtr& C);
TermPtr split_predicative(const TermPtr& t, const std::string& x, const std::string& y,
                          const TermPtr& u, const TypePtr& A, const TypePtr& B,
                          const TypePtr& C);

// True when every TyApp node in t carries a type-variable witness.
bool witnesses_atomic(const TermPtr& t);

}  // namespace fat
