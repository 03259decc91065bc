#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fat/syntax.hpp"

namespace fat {

// First-order formulas in the =>,forall fragment over relation symbols of
// arity at most 2, plus bottom. Grammar:
//   f ::= "bot" | IDENT "(" IDENT ("," IDENT)? ")" | f "=>" f
//       | "forall" IDENT "." f | "(" f ")"
// "=>" associates to the right; "forall" extends as far right as possible.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class K { Bot, Atom, Imp, Forall };
  K k;
  std::string pred;               // Atom
  std::vector<std::string> args;  // Atom: 1 or 2 variable names
  std::string var;                // Forall
  FormulaPtr a, b;                // Imp: a => b; Forall: a
};

FormulaPtr fbot();
FormulaPtr fatom(std::string pred, std::vector<std::string> args);
FormulaPtr fimp(FormulaPtr a, FormulaPtr b);
FormulaPtr fforall(std::string var, FormulaPtr body);

FormulaPtr parse_formula(const std::string& text);
std::string print_formula(const FormulaPtr& f);
bool formula_eq(const FormulaPtr& f, const FormulaPtr& g);

struct ill_formed_formula : std::runtime_error {
  explicit ill_formed_formula(const std::string& why)
      : std::runtime_error("ill-formed formula: " + why) {}
};

// Translation of the dyadic =>,forall fragment into types, using the
// distinguished variables p_1, p_2, p_3 per relation symbol p and the five
// extra variables spade, bullet, circ1, circ2, star:
//   bot            |-> spade
//   p(a, b)        |-> ((X_a => bullet) => p_1) => ((X_b => bullet) => p_2)
//                      => p_3, the whole thing => star
//   f => g         |-> f' => g'
//   forall a. f    |-> forall X_a. (U(X_1, ..., X_n) => f')
// where U(A) collects (A => bullet) => p_i => circ1 for i = 1, 2 and every
// relation symbol p, plus (A => bullet) => circ2, and X_1, ..., X_n range
// over all individual variables of the sequent in first-occurrence order.
//
// The context entries must have one of the three admissible shapes:
//   (i)   an atomic formula;
//   (ii)  a closed formula forall a... (f_1 => ... => f_n => g) with the f_i
//         and g atomic and every variable of g occurring in some f_i;
//   (iii) a closed formula forall a. ((forall b. (p(a,b) => bot)) => bot).
// Atoms must be binary in dyadic mode. Violations raise ill_formed_formula.
TypePtr translate_dyadic(const FormulaPtr& phi, const std::vector<FormulaPtr>& context);

// The full sequent context |- phi as one searchable type: the translated
// context entries, then the U-hypotheses for the sequent's variables, then
// the translated conclusion, chained by arrows.
TypePtr translate_sequent(const std::vector<FormulaPtr>& context, const FormulaPtr& phi);

// The bijection with the monadic fragment over a single unary predicate:
// p(a) <-> type variable a, => <-> =>, forall a <-> forall a. The predicate
// symbol is arbitrary but must be used consistently; bot has no counterpart.
TypePtr monadic_to_type(const FormulaPtr& phi);
FormulaPtr type_to_monadic(const TypePtr& a);

}  // namespace fat
