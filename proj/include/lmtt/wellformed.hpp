#pragma once

// Validity of types and contexts at each layer.
//
// Layer 0 admits only core types (no contextual box). Layer 1 admits box
// types whose context and body are core, so boxes never nest.

#include "lmtt/syntax.hpp"

namespace lmtt {

bool wf_typ(Layer layer, const Typ& t);
bool wf_ctx(Layer layer, const LocalCtx& g);
/// Every entry u : (Δ ⊢ T) has core Δ and core T.
bool wf_gctx(const GlobalCtx& p);

}  // namespace lmtt
