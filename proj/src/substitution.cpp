#include "lmtt/substitution.hpp"

#include <stdexcept>

namespace lmtt {

namespace {

// Generic structural traversal. `ld`/`gd` count the local/global binders
// passed since the root; `local` turns false inside a box, where locals refer
// to the box's own context and are out of reach of local actions.
//
// An action provides
//   bool globals      whether it touches global variables at all
//   Exp lvar(i, ld, gd)         for a free local (i already has ld removed)
//   Exp gvar(u, subst, ld, gd)  for a free global (u has gd removed); subst
//                               has already been traversed
template <class Action>
class Traversal {
 public:
  explicit Traversal(const Action& a) : a_(a) {}

  Exp go(const Exp& e, Index ld, Index gd, bool local) const {
    return std::visit(
        overloaded{
            [&](const expr::LVar& x) -> Exp {
              if (!local || x.index < ld) return e;
              return a_.lvar(x.index - ld, ld, gd);
            },
            [&](const expr::GVar& g) -> Exp {
              LSubst d = subst(g.subst, ld, gd, local);
              if (g.index < gd) return gvar(g.index, std::move(d));
              return a_.gvar(g.index - gd, std::move(d), ld, gd);
            },
            [&](const expr::Zero&) -> Exp { return e; },
            [&](const expr::Suc& s) -> Exp {
              return suc(go(s.pred, ld, gd, local));
            },
            [&](const expr::Rec& r) -> Exp {
              return rec(r.motive, go(r.base, ld, gd, local),
                         go(r.step, ld + 2, gd, local),
                         go(r.scrut, ld, gd, local), r.x_hint, r.y_hint);
            },
            [&](const expr::Lam& l) -> Exp {
              return lam(l.hint, l.dom, go(l.body, ld + 1, gd, local));
            },
            [&](const expr::App& a) -> Exp {
              return app(go(a.fn, ld, gd, local), go(a.arg, ld, gd, local));
            },
            [&](const expr::Box& b) -> Exp {
              if (!Action::globals) return e;
              return box(b.ctx, go(b.body, 0, gd, false));
            },
            [&](const expr::LetBox& l) -> Exp {
              return letbox(l.hint, l.ctx, l.typ, l.ret,
                            go(l.scrut, ld, gd, local),
                            go(l.body, ld, gd + 1, local));
            },
            [&](const expr::Match& m) -> Exp {
              BranchSet bs;
              bs.reserve(m.branches.size());
              for (const auto& b : m.branches) bs.push_back(branch(b, ld, gd, local));
              return match(m.ctx, m.typ, m.ret, go(m.scrut, ld, gd, local),
                           std::move(bs));
            },
        },
        e->v);
  }

  LSubst subst(const LSubst& d, Index ld, Index gd, bool local) const {
    LSubst out;
    out.terms.reserve(d.terms.size());
    for (const auto& t : d.terms) out.terms.push_back(go(t, ld, gd, local));
    return out;
  }

  Branch branch(const Branch& b, Index ld, Index gd, bool local) const {
    Branch out = b;
    out.body = go(b.body, ld,
                  gd + static_cast<Index>(binder_count(b.head.kind)), local);
    return out;
  }

 private:
  const Action& a_;
};

struct ShiftAction {
  static constexpr bool globals = true;
  std::size_t locals;
  std::size_t globals_by;
  Exp lvar(Index i, Index ld, Index) const {
    return lmtt::lvar(static_cast<Index>(i + ld + locals));
  }
  Exp gvar(Index u, LSubst d, Index, Index gd) const {
    return lmtt::gvar(static_cast<Index>(u + gd + globals_by), std::move(d));
  }
};

struct WkAction {
  static constexpr bool globals = true;
  const GWk* g;
  const LWk* l;
  Exp lvar(Index i, Index ld, Index) const {
    return lmtt::lvar(l ? ld + l->rename(i) : ld + i);
  }
  Exp gvar(Index u, LSubst d, Index, Index gd) const {
    return lmtt::gvar(g ? gd + g->rename(u) : gd + u, std::move(d));
  }
};

struct LocalWkAction {
  static constexpr bool globals = false;
  const LWk* l;
  Exp lvar(Index i, Index ld, Index) const {
    return lmtt::lvar(ld + l->rename(i));
  }
  Exp gvar(Index u, LSubst d, Index, Index gd) const {
    return lmtt::gvar(gd + u, std::move(d));
  }
};

struct LSubstAction {
  static constexpr bool globals = false;
  const LSubst* d;
  Exp lvar(Index i, Index ld, Index gd) const {
    if (i >= d->terms.size())
      throw std::logic_error("local substitution does not cover variable");
    const Exp& t = d->terms[d->terms.size() - 1 - i];
    return (ld == 0 && gd == 0) ? t : shift(t, ld, gd);
  }
  Exp gvar(Index u, LSubst sub, Index, Index gd) const {
    return lmtt::gvar(gd + u, std::move(sub));
  }
};

struct GSubstAction {
  static constexpr bool globals = true;
  const GSubst* s;
  Exp lvar(Index i, Index ld, Index) const { return lmtt::lvar(i + ld); }
  Exp gvar(Index u, LSubst sub, Index, Index gd) const {
    if (u >= s->terms.size())
      throw std::logic_error("global substitution does not cover variable");
    const Exp& t = s->terms[s->terms.size() - 1 - u];
    return lsubst_apply(gd == 0 ? t : shift(t, 0, gd), sub);
  }
};

template <class Action>
Exp run(const Exp& e, const Action& a) {
  return Traversal<Action>(a).go(e, 0, 0, true);
}

template <class Action>
LSubst run(const LSubst& d, const Action& a) {
  return Traversal<Action>(a).subst(d, 0, 0, true);
}

template <class Action>
Branch run(const Branch& b, const Action& a) {
  return Traversal<Action>(a).branch(b, 0, 0, true);
}

// GSubst entries live in their own local contexts; only globals move.
template <class Action>
GSubst run_entries(const GSubst& s, const Action& a) {
  GSubst out;
  out.terms.reserve(s.terms.size());
  for (const auto& t : s.terms) out.terms.push_back(run(t, a));
  return out;
}

}  // namespace

Wk wk_compose(const Wk& w2, const Wk& w1) {
  return Wk{wk_compose(w2.global, w1.global), wk_compose(w2.local, w1.local)};
}

GlobalCtx wk_restrict(const GWk& w, const GlobalCtx& larger) {
  GlobalCtx out;
  for (std::size_t k = 0; k < larger.size(); ++k)
    if (w.bits()[k]) out.push_back(larger[k]);
  return out;
}

LocalCtx wk_restrict(const LWk& w, const LocalCtx& larger) {
  LocalCtx out;
  for (std::size_t k = 0; k < larger.size(); ++k)
    if (w.bits()[k]) out.push_back(larger[k]);
  return out;
}

Exp wk_apply(const Exp& e, const Wk& w) {
  if (w.global.is_identity() && w.local.is_identity()) return e;
  return run(e, WkAction{&w.global, &w.local});
}
Exp wk_apply(const Exp& e, const GWk& w) {
  if (w.is_identity()) return e;
  return run(e, WkAction{&w, nullptr});
}
Exp wk_apply(const Exp& e, const LWk& w) {
  if (w.is_identity()) return e;
  return run(e, LocalWkAction{&w});
}
LSubst wk_apply(const LSubst& d, const Wk& w) {
  return run(d, WkAction{&w.global, &w.local});
}
LSubst wk_apply(const LSubst& d, const GWk& w) {
  return run(d, WkAction{&w, nullptr});
}
GSubst wk_apply(const GSubst& s, const GWk& w) {
  if (w.is_identity()) return s;
  return run_entries(s, WkAction{&w, nullptr});
}
Branch wk_apply(const Branch& b, const Wk& w) {
  return run(b, WkAction{&w.global, &w.local});
}

Exp shift(const Exp& e, std::size_t locals, std::size_t globals) {
  if (locals == 0 && globals == 0) return e;
  return run(e, ShiftAction{locals, globals});
}

Exp lsubst_apply(const Exp& e, const LSubst& d) {
  return run(e, LSubstAction{&d});
}
LSubst lsubst_apply(const LSubst& target, const LSubst& d) {
  return run(target, LSubstAction{&d});
}
Branch lsubst_apply(const Branch& b, const LSubst& d) {
  return run(b, LSubstAction{&d});
}
BranchSet lsubst_apply(const BranchSet& bs, const LSubst& d) {
  BranchSet out;
  for (const auto& b : bs) out.push_back(lsubst_apply(b, d));
  return out;
}
LSubst lsubst_compose(const LSubst& d2, const LSubst& d1) {
  return lsubst_apply(d2, d1);
}

Exp gsubst_apply(const Exp& e, const GSubst& s) {
  return run(e, GSubstAction{&s});
}
LSubst gsubst_apply(const LSubst& d, const GSubst& s) {
  return run(d, GSubstAction{&s});
}
Branch gsubst_apply(const Branch& b, const GSubst& s) {
  return run(b, GSubstAction{&s});
}
BranchSet gsubst_apply(const BranchSet& bs, const GSubst& s) {
  BranchSet out;
  for (const auto& b : bs) out.push_back(gsubst_apply(b, s));
  return out;
}
GSubst gsubst_compose(const GSubst& s2, const GSubst& s1) {
  return run_entries(s2, GSubstAction{&s1});
}

GSubst gsubst_extend(const GSubst& s, const Exp& t) {
  GSubst out = s;
  out.terms.push_back(t);
  return out;
}

Typ subst_opaque(const Typ& t, std::uint32_t id, const Typ& with) {
  return std::visit(
      overloaded{
          [&](const type::Nat&) { return t; },
          [&](const type::Arr& a) {
            return arrow(subst_opaque(a.dom, id, with),
                         subst_opaque(a.cod, id, with));
          },
          [&](const type::CBox& b) {
            return cbox(subst_opaque(b.ctx, id, with),
                        subst_opaque(b.body, id, with));
          },
          [&](const type::Opq& o) { return o.id == id ? with : t; },
      },
      t->v);
}

LocalCtx subst_opaque(const LocalCtx& ctx, std::uint32_t id, const Typ& with) {
  LocalCtx out = ctx;
  for (auto& e : out) e.typ = subst_opaque(e.typ, id, with);
  return out;
}

Exp subst_opaque(const Exp& e, std::uint32_t id, const Typ& with) {
  auto go = [&](const Exp& x) { return subst_opaque(x, id, with); };
  auto ty = [&](const Typ& x) { return subst_opaque(x, id, with); };
  auto ctx = [&](const LocalCtx& x) { return subst_opaque(x, id, with); };
  auto sub = [&](const LSubst& d) {
    LSubst out;
    for (const auto& t : d.terms) out.terms.push_back(go(t));
    return out;
  };
  return std::visit(
      overloaded{
          [&](const expr::LVar&) { return e; },
          [&](const expr::GVar& g) { return gvar(g.index, sub(g.subst)); },
          [&](const expr::Zero&) { return e; },
          [&](const expr::Suc& s) { return suc(go(s.pred)); },
          [&](const expr::Rec& r) {
            return rec(ty(r.motive), go(r.base), go(r.step), go(r.scrut),
                       r.x_hint, r.y_hint);
          },
          [&](const expr::Lam& l) { return lam(l.hint, ty(l.dom), go(l.body)); },
          [&](const expr::App& a) { return app(go(a.fn), go(a.arg)); },
          [&](const expr::Box& b) { return box(ctx(b.ctx), go(b.body)); },
          [&](const expr::LetBox& l) {
            return letbox(l.hint, ctx(l.ctx), ty(l.typ), ty(l.ret),
                          go(l.scrut), go(l.body));
          },
          [&](const expr::Match& m) {
            BranchSet bs = m.branches;
            for (auto& b : bs)
              if (!(b.head.kind == HeadKind::app && b.opaque == id))
                b.body = go(b.body);
            return match(ctx(m.ctx), ty(m.typ), ty(m.ret), go(m.scrut),
                         std::move(bs));
          },
      },
      e->v);
}

}  // namespace lmtt
