#pragma once

// Core syntax of the two-layer contextual modal calculus.
//
// Everything is nameless: local and global variables are de Bruijn indices
// (0 = innermost binding) into the local context Γ and the global context Ψ
// respectively. Contexts are stored outermost-first, so index i refers to
// entry size-1-i. Binders keep a name hint that is only used for printing.
//
// All nodes are immutable and shared; copying an Exp or Typ is a pointer copy.

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lmtt {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Index = std::uint32_t;

/// Layer 0 is the code language (no dynamics), layer 1 the computation layer.
enum class Layer : std::uint8_t { code = 0, meta = 1 };

// ---------------------------------------------------------------------------
// Types

struct TypNode;

class Typ {
 public:
  explicit Typ(std::shared_ptr<const TypNode> node) : node_(std::move(node)) {}

  const TypNode& node() const { return *node_; }
  const TypNode* operator->() const { return node_.get(); }

 private:
  std::shared_ptr<const TypNode> node_;
};

/// Local context entry. Equality ignores the hint.
struct CtxEntry {
  std::string hint;
  Typ typ;
};
using LocalCtx = std::vector<CtxEntry>;

/// Global context entry u : (ctx ⊢ typ).
struct GlobalEntry {
  std::string hint;
  LocalCtx ctx;
  Typ typ;
};
using GlobalCtx = std::vector<GlobalEntry>;

namespace type {
struct Nat {};
struct Arr {
  Typ dom;
  Typ cod;
};
/// Contextual box type [ctx ⊢ body]; □T is [· ⊢ T].
struct CBox {
  LocalCtx ctx;
  Typ body;
};
/// Opaque core type standing for the hidden argument type of an
/// application pattern. Only the typechecker and the evaluator create these.
struct Opq {
  std::uint32_t id;
};
}  // namespace type

struct TypNode {
  std::variant<type::Nat, type::Arr, type::CBox, type::Opq> v;
};

Typ nat();
Typ arrow(Typ dom, Typ cod);
Typ cbox(LocalCtx ctx, Typ body);
Typ opaque(std::uint32_t id);
/// Right-nested arrow: arrows({A, B}, C) = A -> B -> C.
Typ arrows(const std::vector<Typ>& doms, Typ cod);

template <class T>
const T* as(const Typ& t) {
  return std::get_if<T>(&t->v);
}

bool operator==(const Typ& a, const Typ& b);
bool operator==(const CtxEntry& a, const CtxEntry& b);
bool operator==(const GlobalEntry& a, const GlobalEntry& b);

bool mentions_opaque(const Typ& t, std::uint32_t id);
bool mentions_opaque(const LocalCtx& ctx, std::uint32_t id);

// ---------------------------------------------------------------------------
// Terms

struct ExpNode;

class Exp {
 public:
  explicit Exp(std::shared_ptr<const ExpNode> node) : node_(std::move(node)) {}

  const ExpNode& node() const { return *node_; }
  const ExpNode* operator->() const { return node_.get(); }
  bool same_node(const Exp& o) const { return node_ == o.node_; }

 private:
  friend struct ExpNode;
  std::shared_ptr<const ExpNode> node_;
};

/// Local substitution δ : Δ, one term per entry of Δ (outermost first).
struct LSubst {
  std::vector<Exp> terms;
};

/// Global substitution σ : Φ, one core term per entry of Φ (outermost first).
/// Entry for u : (Δ ⊢ T) is a layer-0 term in Δ.
struct GSubst {
  std::vector<Exp> terms;
};

enum class HeadKind : std::uint8_t { zero, suc, lam, rec, app, var };

/// Pattern head. For var heads, `var` is the de Bruijn index into the
/// scrutinee's local context.
struct Head {
  HeadKind kind;
  Index var = 0;

  friend bool operator==(const Head&, const Head&) = default;
  friend auto operator<=>(const Head&, const Head&) = default;
};

std::string to_string(const Head& h);

/// One branch of a match. Pattern variables are global binders for the body,
/// pushed in the order they appear in the pattern:
///   suc ?u            binds u
///   \x. ?u            binds u              (locals = {x})
///   ?u ?u'            binds u, u'          (opaque = id of the hidden type)
///   rec ?u (x y.?u') ?u''  binds u, u', u''  (locals = {x, y})
struct Branch {
  Head head;
  std::vector<std::string> binders;
  std::vector<std::string> locals;
  std::uint32_t opaque = 0;
  Exp body;
};
using BranchSet = std::vector<Branch>;

/// Number of global variables a branch of the given head binds.
std::size_t binder_count(HeadKind kind);

namespace expr {
struct LVar {
  Index index;
};
struct GVar {
  Index index;
  LSubst subst;
};
struct Zero {};
struct Suc {
  Exp pred;
};
/// rec[motive] base (x y. step) scrut; step binds x : Nat then y : motive.
struct Rec {
  Typ motive;
  Exp base;
  std::string x_hint;
  std::string y_hint;
  Exp step;
  Exp scrut;
};
struct Lam {
  std::string hint;
  Typ dom;
  Exp body;
};
struct App {
  Exp fn;
  Exp arg;
};
struct Box {
  LocalCtx ctx;
  Exp body;
};
/// letbox u = scrut in body, with scrut : [ctx ⊢ typ] and body : ret.
struct LetBox {
  std::string hint;
  LocalCtx ctx;
  Typ typ;
  Typ ret;
  Exp scrut;
  Exp body;
};
/// match scrut branches, with scrut : [ctx ⊢ typ] and result type ret.
struct Match {
  LocalCtx ctx;
  Typ typ;
  Typ ret;
  Exp scrut;
  BranchSet branches;
};
}  // namespace expr

struct ExpNode {
  std::variant<expr::LVar, expr::GVar, expr::Zero, expr::Suc, expr::Rec,
               expr::Lam, expr::App, expr::Box, expr::LetBox, expr::Match>
      v;
  // Frees long suc chains without recursing once per node.
  ~ExpNode();
};

template <class T>
const T* as(const Exp& e) {
  return std::get_if<T>(&e->v);
}

Exp lvar(Index i);
Exp gvar(Index u, LSubst subst = {});
Exp zero();
Exp suc(Exp pred);
Exp numeral(std::size_t n);
Exp rec(Typ motive, Exp base, Exp step, Exp scrut, std::string x_hint = "x",
        std::string y_hint = "y");
Exp lam(std::string hint, Typ dom, Exp body);
Exp app(Exp fn, Exp arg);
Exp app(Exp fn, std::initializer_list<Exp> args);
Exp box(LocalCtx ctx, Exp body);
Exp letbox(std::string hint, LocalCtx ctx, Typ typ, Typ ret, Exp scrut,
           Exp body);
Exp match(LocalCtx ctx, Typ typ, Typ ret, Exp scrut, BranchSet branches);

Branch var_branch(Index x, Exp body);
Branch zero_branch(Exp body);
Branch suc_branch(std::string u, Exp body);
Branch lam_branch(std::string x, std::string u, Exp body);
Branch app_branch(std::string u, std::string u2, std::uint32_t opaque,
                  Exp body);
Branch rec_branch(std::string u, std::string x, std::string y, std::string u2,
                  std::string u3, Exp body);

/// Identity substitution over a local context of size n: the variables of
/// that context in order.
LSubst lsubst_identity(std::size_t n);
/// Identity substitution over ψ: entry u : (Δ ⊢ T) maps to u^{id_Δ}.
GSubst gsubst_identity(const GlobalCtx& psi);

// ---------------------------------------------------------------------------
// Equality up to name hints

/// Structural identity ignoring hints. Opaque binder ids of application
/// branches are treated as bound names.
bool alpha_eq(const Exp& a, const Exp& b);
bool alpha_eq(const LSubst& a, const LSubst& b);
bool alpha_eq(const GSubst& a, const GSubst& b);

// ---------------------------------------------------------------------------
// Normal and neutral forms as refinement views over Exp.

/// A term known to match the normal-form grammar:
///   w ::= v | zero | suc w | box(Δ. t^c) | λx. w
class Nf {
 public:
  /// The caller guarantees that e is normal.
  static Nf assume(Exp e);
  const Exp& exp() const { return e_; }

 private:
  friend std::optional<Nf> classify_nf(const Exp& e);
  explicit Nf(Exp e) : e_(std::move(e)) {}
  Exp e_;
};

/// A term known to match the neutral-form grammar:
///   v ::= x | u^θ | v w | letbox u v w | match v r⃗ | match box(Δ. u^δ) r⃗
///       | rec[T] w (x y. w') v
class Ne {
 public:
  static Ne assume(Exp e);
  const Exp& exp() const { return e_; }

 private:
  friend std::optional<Ne> classify_ne(const Exp& e);
  explicit Ne(Exp e) : e_(std::move(e)) {}
  Exp e_;
};

std::optional<Nf> classify_nf(const Exp& e);
std::optional<Ne> classify_ne(const Exp& e);
/// Core terms: no box, letbox or match anywhere.
bool is_core(const Exp& e);
/// True iff every term of the substitution is normal.
bool is_nf_lsubst(const LSubst& d);

std::ostream& operator<<(std::ostream& os, const Typ& t);
std::ostream& operator<<(std::ostream& os, const Exp& e);

}  // namespace lmtt
