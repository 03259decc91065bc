#pragma once

#include <cstdint>
#include <optional>

#include "fat/syntax.hpp"

namespace fat {

struct fuel_exhausted : std::runtime_error {
  fuel_exhausted() : std::runtime_error("reduction fuel exhausted") {}
};

struct Fuel {
  int64_t remaining;
  void spend() {
    if (remaining-- <= 0) throw fuel_exhausted();
  }
};

constexpr int64_t kDefaultFuel = 1000000;

enum class Strategy { LeftmostOutermost, RightmostInnermost };

// Beta-normal form (covers type-level beta for Church terms). Throws
// fuel_exhausted when the step budget runs out.
TermPtr beta_normalize(const TermPtr& t, Fuel& fuel, Strategy strategy = Strategy::LeftmostOutermost);
TermPtr beta_normalize(const TermPtr& t, int64_t fuel = kDefaultFuel,
                       Strategy strategy = Strategy::LeftmostOutermost);

// Beta-normal form followed by exhaustive eta-reduction.
TermPtr betaeta_normal_form(const TermPtr& t, int64_t fuel = kDefaultFuel);

bool betaeta_equal(const TermPtr& a, const TermPtr& b, int64_t fuel = kDefaultFuel);

// Church numerals over Nat = forall X. (X -> X) -> X -> X (Curry-style bodies).
TermPtr church_numeral(uint64_t n);
TermPtr church_true();
TermPtr church_false();

// Reads back a beta-eta-normal Church numeral; nullopt if the term is not one.
std::optional<uint64_t> read_numeral(const TermPtr& t);
// Reads back a Church boolean.
std::optional<bool> read_boolean(const TermPtr& t);

}  // namespace fat
