#pragma once

// Normalization by evaluation.
//
// A value lives at an ambient pair of contexts Ψ;Γ. Naturals and code are
// represented by their normal forms directly; functions are closures or
// reflected neutrals. Environments interpret a source context Φ;Δ at the
// ambient: the global part is a weakening Ψ ⇒ Φ when evaluating layer-0 code
// and a global substitution when evaluating layer-1 terms.

#include <cstddef>
#include <limits>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lmtt/substitution.hpp"
#include "lmtt/syntax.hpp"

namespace lmtt {

struct Ambient {
  GlobalCtx psi;
  LocalCtx gamma;
};
using AmbientRef = std::shared_ptr<const Ambient>;

AmbientRef make_ambient(GlobalCtx psi, LocalCtx gamma);

struct Value;
struct Closure;

struct Env {
  std::variant<GWk, GSubst> gpart;
  std::vector<Value> lpart;
  AmbientRef amb;
};

struct VNat {
  Exp nf;
};
struct VBox {
  Exp nf;
};
struct Reflected {
  Typ type;
  Exp neutral;
};
struct VFun {
  std::variant<std::shared_ptr<const Closure>, Reflected> fn;
};

struct Value {
  std::variant<VNat, VBox, VFun> v;
};

struct Closure {
  Layer layer;
  Env env;
  std::string hint;
  Typ dom;
  Exp body;
};

class FuelExhausted : public std::runtime_error {
 public:
  FuelExhausted() : std::runtime_error("evaluation fuel exhausted") {}
};

/// Evaluation machinery. Every call to eval consumes one unit of fuel.
class Evaluator {
 public:
  explicit Evaluator(
      std::size_t fuel = std::numeric_limits<std::size_t>::max())
      : fuel_(fuel) {}

  Value eval(Layer layer, const Exp& e, const Env& env);
  std::vector<Value> eval_lsubst(Layer layer, const LSubst& d, const Env& env);
  /// `w` weakens the function's ambient into `amb`, where `arg` lives.
  Value apply_fun(const Value& f, const Wk& w, const Value& arg,
                  const AmbientRef& amb);
  Exp reify(const AmbientRef& amb, const Typ& t, const Value& v);
  LSubst reify_lenv(const AmbientRef& amb, const LocalCtx& d,
                    const std::vector<Value>& rho);
  /// Match on a piece of code `core` : [m.ctx ⊢ m.typ] at the env's ambient.
  Value match_sem(const Exp& core, const expr::Match& m, const Env& env);
  Branch nfbranch_sem(const Branch& b, const expr::Match& m, const Env& env);
  Value rec_sem(Layer layer, const expr::Rec& r, const Exp& scrut_nf,
                const Env& env);

  std::size_t fuel_left() const { return fuel_; }

 private:
  Value letbox_sem(const expr::LetBox& l, const Value& scrut, const Env& env);
  void burn();

  std::size_t fuel_;
};

Value value_wk(const Value& v, const Wk& w, const AmbientRef& amb);
Env env_wk(const Env& env, const Wk& w, const AmbientRef& amb);
Value reflect(const Typ& t, const Exp& neutral);

/// Identity substitution for Ψ and reflected variables for Γ.
Env id_env(const GlobalCtx& psi, const LocalCtx& gamma);

/// Normal form of a layer-1 term e : t under Ψ;Γ.
Nf nbe(const GlobalCtx& psi, const LocalCtx& gamma, const Exp& e, const Typ& t,
       std::size_t fuel = std::numeric_limits<std::size_t>::max());

/// Layer 0: syntactic identity. Layer 1: identical normal forms.
bool equiv(const GlobalCtx& psi, const LocalCtx& gamma, Layer layer,
           const Exp& a, const Exp& b, const Typ& t);

}  // namespace lmtt
