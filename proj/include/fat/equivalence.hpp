#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "fat/reduction.hpp"
#include "fat/syntax.hpp"

namespace fat {

TypePtr bool_type();  // forall X. X -> X -> X
TypePtr nat_type();   // forall X. (X -> X) -> X -> X
TypePtr top_type();   // forall X. X -> X

struct not_a_numeral : std::runtime_error {
  not_a_numeral() : std::runtime_error("result is not a Church numeral") {}
};

struct degree_bound_exceeded : std::runtime_error {
  degree_bound_exceeded()
      : std::runtime_error("no verified polynomial fit within the degree bound") {}
};

struct witness_rejected : std::runtime_error {
  explicit witness_rejected(const std::string& why)
      : std::runtime_error("witness rejected: " + why) {}
};

// Applies t (closed, checked at Nat^k -> Nat) to Church numerals and reads
// the normal form back.
uint64_t eval_numeric(const TermPtr& t, const std::vector<uint64_t>& args,
                      int64_t fuel = kDefaultFuel);

// A numerical function split by zero pattern: for every subset of arguments
// held at zero, a polynomial over the remaining arguments (which range over
// positive values) with natural coefficients in canonical monomial form.
struct ExtPoly {
  int arity = 0;
  // zero pattern (sorted 1-based indices) -> monomials: full-arity exponent
  // vector (zeroed positions carry exponent 0) -> coefficient
  std::map<std::vector<int>, std::map<std::vector<int>, uint64_t>> regions;
};

uint64_t extpoly_eval(const ExtPoly& p, const std::vector<uint64_t>& args);

// Regionwise verified interpolation. The degree bound starts at the number of
// bound-variable occurrences in the beta-eta-normal form and doubles on
// verification failure, at most three times.
ExtPoly extract_extpoly(const TermPtr& t, int arity, int64_t fuel = kDefaultFuel);

bool extpoly_equal(const ExtPoly& p, const ExtPoly& q);

// A concrete argument tuple where the two functions differ; nullopt when equal.
std::optional<std::vector<uint64_t>> extpoly_diff(const ExtPoly& p, const ExtPoly& q);

struct EqNatResult {
  bool equal = false;
  std::vector<uint64_t> witness;  // a separating tuple when !equal
};

// Decides whether two closed terms of type Nat^k -> Nat are contextually
// equivalent, by comparing their extracted polynomials.
EqNatResult eq_nat_numerical(const TermPtr& t, const TermPtr& u, int arity,
                             int64_t fuel = kDefaultFuel);

// The domain used by the separating constructions: A* = Y -> A[Y/#] with Y
// fresh for A.
TypePtr star_domain(const TypePtr& A);

// The pair (u_A, v_A), both of type (A* + top) -> Bool in the encoded sum:
//   u_A = \x. false
//   v_A = \x. IO_Bool[x] (\x. true) (\x. false)
// They are observationally equal exactly when A has no closed inhabitant in
// the # extension, which is undecidable; separating_context builds the
// separating context from an explicit inhabitant.
std::pair<TermPtr, TermPtr> separating_pair(const TypePtr& A);
std::pair<TermPtr, TermPtr> separating_pair_nat(const TypePtr& A);

// K = _ (inj1 (\y. witness[y/*])) with the hole at the function position.
// The witness must be a closed Curry-style inhabitant of A (checked, with #
// as an opaque base and * its only constant); K[u_A] normalizes to false and
// K[v_A] to true (asserted).
TermPtr separating_context(const TypePtr& A, const TermPtr& witness);

}  // namespace fat
