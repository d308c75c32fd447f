#pragma once

// Pretty-printing in the concrete syntax. Output re-parses to an α-equal
// term: binder names are made fresh where needed and global variables always
// carry their explicit local substitution.

#include <string>
#include <vector>

#include "lmtt/syntax.hpp"

namespace lmtt {

std::string print(const Typ& t);
std::string print(const LocalCtx& ctx);
/// Free variables are named by the hints of psi and gamma.
std::string print(const Exp& e, const GlobalCtx& psi = {},
                  const LocalCtx& gamma = {});

/// Printable, pairwise distinct names for the entries of ctx. Idempotent.
std::vector<std::string> display_names(const LocalCtx& ctx);

}  // namespace lmtt
