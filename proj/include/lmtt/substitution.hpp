#pragma once

// Weakenings, local and global substitutions, and their actions on terms.
//
// Conventions (σ, δ are "target ⇐ source" maps):
//   LSubst δ over Γ, with terms in Ψ;Γ'   moves a term from Ψ;Γ to Ψ;Γ'.
//   GSubst σ over Ψ, with terms in Ψ'     moves a term from Ψ;Γ to Ψ';Γ.
//   Weakening w with dom Γ' and cod Γ      moves a term from Γ to Γ'.

#include <cstddef>
#include <vector>

#include "lmtt/syntax.hpp"

namespace lmtt {

struct GlobalTag {};
struct LocalTag {};

/// An order-preserving context inclusion, stored as one keep/drop bit per
/// entry of the larger context (outermost first).
template <class Tag>
class Weakening {
 public:
  Weakening() = default;

  static Weakening identity(std::size_t n) {
    return Weakening(std::vector<bool>(n, true));
  }
  /// Drops the innermost `k` entries of a context of size n + k.
  static Weakening shift(std::size_t n, std::size_t k) {
    std::vector<bool> bits(n, true);
    bits.resize(n + k, false);
    return Weakening(std::move(bits));
  }
  static Weakening from_bits(std::vector<bool> bits) {
    return Weakening(std::move(bits));
  }

  /// q(w): both contexts gain one innermost entry.
  Weakening keep() const { return extended(true); }
  /// p(w): the larger context gains one innermost entry.
  Weakening drop() const { return extended(false); }

  std::size_t dom_size() const { return bits_.size(); }
  std::size_t cod_size() const { return map_.size(); }
  bool is_identity() const { return map_.size() == bits_.size(); }
  const std::vector<bool>& bits() const { return bits_; }

  /// Index in the smaller context to index in the larger one.
  Index rename(Index i) const { return map_[i]; }

  friend bool operator==(const Weakening& a, const Weakening& b) {
    return a.bits_ == b.bits_;
  }

 private:
  explicit Weakening(std::vector<bool> bits) : bits_(std::move(bits)) {
    for (std::size_t k = bits_.size(); k-- > 0;)
      if (bits_[k]) map_.push_back(static_cast<Index>(bits_.size() - 1 - k));
  }

  Weakening extended(bool bit) const {
    auto bits = bits_;
    bits.push_back(bit);
    return Weakening(std::move(bits));
  }

  std::vector<bool> bits_;
  std::vector<Index> map_;
};

using GWk = Weakening<GlobalTag>;
using LWk = Weakening<LocalTag>;

struct Wk {
  GWk global;
  LWk local;

  friend bool operator==(const Wk&, const Wk&) = default;
};

/// w2 ∘ w1: first w2, then w1. Requires w1.cod_size() == w2.dom_size().
template <class Tag>
Weakening<Tag> wk_compose(const Weakening<Tag>& w2, const Weakening<Tag>& w1) {
  std::vector<bool> bits;
  bits.reserve(w1.dom_size());
  std::size_t next = 0;
  for (bool b : w1.bits()) bits.push_back(b ? w2.bits()[next++] : false);
  return Weakening<Tag>::from_bits(std::move(bits));
}
Wk wk_compose(const Wk& w2, const Wk& w1);

/// Restricts ψ' along w, giving the smaller context.
GlobalCtx wk_restrict(const GWk& w, const GlobalCtx& larger);
LocalCtx wk_restrict(const LWk& w, const LocalCtx& larger);

Exp wk_apply(const Exp& e, const Wk& w);
Exp wk_apply(const Exp& e, const GWk& w);
Exp wk_apply(const Exp& e, const LWk& w);
LSubst wk_apply(const LSubst& d, const Wk& w);
LSubst wk_apply(const LSubst& d, const GWk& w);
GSubst wk_apply(const GSubst& s, const GWk& w);
/// A branch lives in the same contexts as its match.
Branch wk_apply(const Branch& b, const Wk& w);

/// Pushes free locals up by `locals` and free globals up by `globals`.
Exp shift(const Exp& e, std::size_t locals, std::size_t globals);

Exp lsubst_apply(const Exp& e, const LSubst& d);
LSubst lsubst_apply(const LSubst& target, const LSubst& d);
Branch lsubst_apply(const Branch& b, const LSubst& d);
BranchSet lsubst_apply(const BranchSet& bs, const LSubst& d);
LSubst lsubst_compose(const LSubst& d2, const LSubst& d1);

Exp gsubst_apply(const Exp& e, const GSubst& s);
LSubst gsubst_apply(const LSubst& d, const GSubst& s);
Branch gsubst_apply(const Branch& b, const GSubst& s);
BranchSet gsubst_apply(const BranchSet& bs, const GSubst& s);
GSubst gsubst_compose(const GSubst& s2, const GSubst& s1);

/// σ, t/u: appends an entry for a new innermost global.
GSubst gsubst_extend(const GSubst& s, const Exp& t);

/// Replaces the opaque type `id` by `with` in every annotation of e. Stops at
/// application branches that rebind the same id.
Exp subst_opaque(const Exp& e, std::uint32_t id, const Typ& with);
Typ subst_opaque(const Typ& t, std::uint32_t id, const Typ& with);
LocalCtx subst_opaque(const LocalCtx& ctx, std::uint32_t id, const Typ& with);

}  // namespace lmtt
