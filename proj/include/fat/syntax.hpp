#pragma once

#include <memory>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fat {

// ---------------------------------------------------------------------------
// Types:  T ::= X | # | T -> T | forall X. T
// ---------------------------------------------------------------------------

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class K { Var, Arrow, Forall, Club };
  K k;
  std::string name;  // Var name / Forall binder
  TypePtr a, b;      // Arrow: dom/cod; Forall: body in a
};

TypePtr tvar(std::string name);
TypePtr tarrow(TypePtr dom, TypePtr cod);
TypePtr tforall(std::string var, TypePtr body);
TypePtr tclub();

// ---------------------------------------------------------------------------
// Terms. Curry-style terms contain no TyAbs/TyApp node.
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class K { Var, Abs, App, TyAbs, TyApp, Star };
  K k;
  std::string name;  // Var name / Abs binder / TyAbs binder
  TermPtr fun, arg;  // App
  TermPtr body;      // Abs, TyAbs
  TypePtr witness;   // TyApp (fun holds the head)
};

TermPtr mkvar(std::string name);
TermPtr mkabs(std::string var, TermPtr body);
TermPtr mkapp(TermPtr fun, TermPtr arg);
TermPtr mktyabs(std::string tyvar, TermPtr body);
TermPtr mktyapp(TermPtr fun, TypePtr witness);
TermPtr mkstar();

// Simple types: the image of the erasure map.
struct SimpleType;
using SimplePtr = std::shared_ptr<const SimpleType>;

struct SimpleType {
  bool arrow;
  SimplePtr dom, cod;
};

SimplePtr sbase();
SimplePtr sarrow(SimplePtr dom, SimplePtr cod);
bool simple_eq(const SimplePtr& a, const SimplePtr& b);
std::string print_simple(const SimplePtr& t);

// Contexts map term variables to types.
using TypingContext = std::map<std::string, TypePtr>;

// ---------------------------------------------------------------------------
// Parsing / printing
// ---------------------------------------------------------------------------

struct parse_error : std::runtime_error {
  size_t pos;
  parse_error(const std::string& msg, size_t pos);
};

enum class TermStyle { Curry, Church };

TypePtr parse_type(const std::string& text);
TermPtr parse_term(const std::string& text, TermStyle style);

std::string print_type(const TypePtr& t);
std::string print_term(const TermPtr& t);

// ---------------------------------------------------------------------------
// Structural operations
// ---------------------------------------------------------------------------

std::set<std::string> free_type_vars(const TypePtr& t);
std::set<std::string> free_term_vars(const TermPtr& t);
std::set<std::string> free_type_vars_in_term(const TermPtr& t);
std::set<std::string> all_type_names(const TypePtr& t);
std::set<std::string> all_names(const TermPtr& t);  // term + type names

bool alpha_eq(const TypePtr& a, const TypePtr& b);
bool alpha_eq(const TermPtr& a, const TermPtr& b);

bool is_curry(const TermPtr& t);

// Capture-avoiding substitutions.
TypePtr substitute(const TypePtr& a, const std::string& x, const TypePtr& c);
TermPtr subst_term(const TermPtr& t, const std::string& x, const TermPtr& u);
TermPtr subst_type_in_term(const TermPtr& t, const std::string& x, const TypePtr& c);

// Type erasure |.| : collapses quantifiers, sends variables and # to the base.
SimplePtr erase_types(const TypePtr& a);
// Drops TyAbs/TyApp nodes, yielding the underlying Curry-style term.
TermPtr erase_term(const TermPtr& t);

// ---------------------------------------------------------------------------
// Fresh names / Barendregt convention
// ---------------------------------------------------------------------------

class NameSupply {
 public:
  void note(const std::string& name) { used_.insert(name); }
  void note_type(const TypePtr& t);
  void note_term(const TermPtr& t);
  // Returns a name not seen before, derived from `base`, and marks it used.
  std::string fresh(const std::string& base);

 private:
  std::set<std::string> used_;
};

// Renames all binders to pairwise-distinct names drawn from the supply.
TypePtr barendregt_rename(const TypePtr& a, NameSupply& supply);
TermPtr barendregt_rename(const TermPtr& t, NameSupply& supply);

// Convenience overloads with a self-contained supply.
TypePtr barendregt_rename(const TypePtr& a);
TermPtr barendregt_rename(const TermPtr& t);

}  // namespace fat
