#pragma once

// Layered type synthesis, local substitution checking, branch typing and the
// covering check for pattern matching on code.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lmtt/syntax.hpp"

namespace lmtt {

enum class ErrorKind {
  UnboundVar,
  LayerViolation,
  NotCore,
  Mismatch,
  NonCovering,
  DuplicateBranch,
  UnexpectedBranch,
  BadScrutinee,
  BadAnnotation,
};

std::string to_string(ErrorKind k);

struct TypingError {
  ErrorKind kind;
  std::string message;
  std::optional<Typ> expected;
  std::optional<Typ> got;
  /// For NonCovering: the required heads absent from the branch set.
  std::vector<Head> missing;
};

class TypeError : public std::runtime_error {
 public:
  explicit TypeError(TypingError err);
  const TypingError& error() const { return err_; }

 private:
  TypingError err_;
};

/// Synthesizes the type of e at the given layer. Throws TypeError.
Typ infer(const GlobalCtx& psi, const LocalCtx& gamma, Layer layer,
          const Exp& e);
/// Non-throwing form.
std::variant<Typ, TypingError> try_infer(const GlobalCtx& psi,
                                         const LocalCtx& gamma, Layer layer,
                                         const Exp& e);

void check_lsubst(const GlobalCtx& psi, const LocalCtx& gamma, Layer layer,
                  const LSubst& d, const LocalCtx& target);

void check_branches(const GlobalCtx& psi, const LocalCtx& gamma,
                    const LocalCtx& scrut_ctx, const Typ& scrut_ty,
                    const Typ& ret, const BranchSet& bs);

/// Heads a match on code of type [ctx ⊢ t] must cover, in canonical order.
/// Throws BadScrutinee for types no branch set can cover.
std::vector<Head> required_heads(const LocalCtx& ctx, const Typ& t);

/// Global variables a branch binds, outermost first, for a scrutinee of type
/// [ctx ⊢ t]. Hints come from the branch.
GlobalCtx pattern_bindings(const Branch& b, const LocalCtx& ctx, const Typ& t);

/// Outermost constructor of a core term; none for a global variable.
std::optional<Head> head_of(const Exp& core);

/// The branch for the head of a core term; null for a global variable head.
const Branch* branch_lookup(const BranchSet& bs, const Exp& core);

}  // namespace lmtt
