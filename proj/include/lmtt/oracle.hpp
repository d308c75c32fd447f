#pragma once

// A small-step reducer that contracts redexes one at a time, leftmost
// outermost, never under box. Used to cross-check normalization.

#include <cstddef>
#include <optional>

#include "lmtt/syntax.hpp"

namespace lmtt {

inline constexpr std::size_t kDefaultFuel = 100000;

/// One reduction step of a layer-1 term, or none if e has no redex.
std::optional<Exp> step(const GlobalCtx& psi, const LocalCtx& gamma,
                        const Exp& e);

/// Steps until no redex is left; none if `fuel` steps did not suffice.
std::optional<Exp> beta_normalize(const GlobalCtx& psi, const LocalCtx& gamma,
                                  const Exp& e, std::size_t fuel = kDefaultFuel);

/// η-expands every non-λ term sitting at a function type.
Exp eta_long(const GlobalCtx& psi, const LocalCtx& gamma, const Exp& e,
             const Typ& t);

}  // namespace lmtt
