#pragma once

// Name resolution and elaboration of surface programs into checked core
// terms. Elaboration is type-directed: wildcard branches, the identity
// substitution of a bare global `u`, and the annotations stored on letbox and
// match nodes all depend on inferred types, so every node is typechecked as
// it is built.

#include <string_view>
#include <vector>

#include "lmtt/surface.hpp"
#include "lmtt/typing.hpp"

namespace lmtt {

class ResolveError : public std::runtime_error {
 public:
  ResolveError(Pos pos, const std::string& message)
      : std::runtime_error(to_string(pos) + ": " + message), pos_(pos) {}
  Pos pos() const { return pos_; }

 private:
  Pos pos_;
};

/// A typing error located in the source.
class SourceTypeError : public std::runtime_error {
 public:
  SourceTypeError(Pos pos, TypingError err)
      : std::runtime_error(to_string(pos) + ": " + to_string(err.kind) + ": " +
                           err.message),
        pos_(pos),
        err_(std::move(err)) {}
  Pos pos() const { return pos_; }
  const TypingError& error() const { return err_; }

 private:
  Pos pos_;
  TypingError err_;
};

struct CheckedDef {
  std::string name;
  Typ typ;
  Exp body;
  Pos pos;
};

struct Elaborated {
  Exp exp;
  Typ typ;
};

/// Elaborates and checks every definition at layer 1 in empty contexts.
/// Earlier definitions are inlined where later ones mention them.
std::vector<CheckedDef> resolve(const Program& p);

/// Elaborates a single term. Names of Ψ and Γ are their hints.
Elaborated elaborate(const SExp& e, const GlobalCtx& psi, const LocalCtx& gamma,
                     Layer layer, const std::vector<CheckedDef>& defs = {});

/// parse_exp followed by elaborate.
Elaborated read_exp(std::string_view src, const GlobalCtx& psi = {},
                    const LocalCtx& gamma = {}, Layer layer = Layer::meta,
                    const std::vector<CheckedDef>& defs = {});

}  // namespace lmtt
