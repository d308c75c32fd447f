#include "lmtt/oracle.hpp"

#include <stdexcept>

#include "lmtt/substitution.hpp"
#include "lmtt/typing.hpp"

namespace lmtt {

namespace {

LocalCtx extended(LocalCtx g, const std::string& hint, const Typ& t) {
  g.push_back(CtxEntry{hint, t});
  return g;
}

GlobalCtx with_bindings(GlobalCtx psi, const GlobalCtx& more) {
  for (const auto& g : more) psi.push_back(g);
  return psi;
}

GSubst splice(const GlobalCtx& psi, std::initializer_list<Exp> terms) {
  GSubst s = gsubst_identity(psi);
  for (const auto& t : terms) s.terms.push_back(t);
  return s;
}

std::optional<Exp> contract(const GlobalCtx& psi, const LocalCtx& gamma,
                            const Exp& e) {
  if (const auto* a = as<expr::App>(e)) {
    if (const auto* l = as<expr::Lam>(a->fn)) {
      LSubst d = lsubst_identity(gamma.size());
      d.terms.push_back(a->arg);
      return lsubst_apply(l->body, d);
    }
    return std::nullopt;
  }
  if (const auto* l = as<expr::LetBox>(e)) {
    if (const auto* b = as<expr::Box>(l->scrut))
      return gsubst_apply(l->body, splice(psi, {b->body}));
    return std::nullopt;
  }
  if (const auto* m = as<expr::Match>(e)) {
    const auto* b = as<expr::Box>(m->scrut);
    if (!b) return std::nullopt;
    const Branch* br = branch_lookup(m->branches, b->body);
    if (!br) return std::nullopt;
    const Exp& code = b->body;
    switch (br->head.kind) {
      case HeadKind::zero:
      case HeadKind::var: return br->body;
      case HeadKind::suc:
        return gsubst_apply(br->body, splice(psi, {as<expr::Suc>(code)->pred}));
      case HeadKind::lam:
        return gsubst_apply(br->body, splice(psi, {as<expr::Lam>(code)->body}));
      case HeadKind::app: {
        const auto* ap = as<expr::App>(code);
        Typ s = infer(psi, m->ctx, Layer::code, ap->arg);
        return gsubst_apply(subst_opaque(br->body, br->opaque, s),
                            splice(psi, {ap->fn, ap->arg}));
      }
      case HeadKind::rec: {
        const auto* r = as<expr::Rec>(code);
        return gsubst_apply(br->body, splice(psi, {r->base, r->step, r->scrut}));
      }
    }
    return std::nullopt;
  }
  if (const auto* r = as<expr::Rec>(e)) {
    if (as<expr::Zero>(r->scrut)) return r->base;
    if (const auto* s = as<expr::Suc>(r->scrut)) {
      LSubst d = lsubst_identity(gamma.size());
      d.terms.push_back(s->pred);
      d.terms.push_back(
          rec(r->motive, r->base, r->step, s->pred, r->x_hint, r->y_hint));
      return lsubst_apply(r->step, d);
    }
  }
  return std::nullopt;
}

std::optional<Exp> step_in(const GlobalCtx& psi, const LocalCtx& gamma,
                           const Exp& e) {
  if (auto r = contract(psi, gamma, e)) return r;
  return std::visit(
      overloaded{
          [&](const expr::GVar& g) -> std::optional<Exp> {
            for (std::size_t k = 0; k < g.subst.terms.size(); ++k)
              if (auto t = step_in(psi, gamma, g.subst.terms[k])) {
                LSubst d = g.subst;
                d.terms[k] = *t;
                return gvar(g.index, std::move(d));
              }
            return std::nullopt;
          },
          [&](const expr::Suc& s) -> std::optional<Exp> {
            if (auto t = step_in(psi, gamma, s.pred)) return suc(*t);
            return std::nullopt;
          },
          [&](const expr::Rec& r) -> std::optional<Exp> {
            if (auto t = step_in(psi, gamma, r.base))
              return rec(r.motive, *t, r.step, r.scrut, r.x_hint, r.y_hint);
            auto inner = extended(extended(gamma, r.x_hint, nat()), r.y_hint,
                                  r.motive);
            if (auto t = step_in(psi, inner, r.step))
              return rec(r.motive, r.base, *t, r.scrut, r.x_hint, r.y_hint);
            if (auto t = step_in(psi, gamma, r.scrut))
              return rec(r.motive, r.base, r.step, *t, r.x_hint, r.y_hint);
            return std::nullopt;
          },
          [&](const expr::Lam& l) -> std::optional<Exp> {
            if (auto t = step_in(psi, extended(gamma, l.hint, l.dom), l.body))
              return lam(l.hint, l.dom, *t);
            return std::nullopt;
          },
          [&](const expr::App& a) -> std::optional<Exp> {
            if (auto t = step_in(psi, gamma, a.fn)) return app(*t, a.arg);
            if (auto t = step_in(psi, gamma, a.arg)) return app(a.fn, *t);
            return std::nullopt;
          },
          [&](const expr::LetBox& l) -> std::optional<Exp> {
            if (auto t = step_in(psi, gamma, l.scrut))
              return letbox(l.hint, l.ctx, l.typ, l.ret, *t, l.body);
            auto inner = with_bindings(psi, {GlobalEntry{l.hint, l.ctx, l.typ}});
            if (auto t = step_in(inner, gamma, l.body))
              return letbox(l.hint, l.ctx, l.typ, l.ret, l.scrut, *t);
            return std::nullopt;
          },
          [&](const expr::Match& m) -> std::optional<Exp> {
            if (auto t = step_in(psi, gamma, m.scrut))
              return match(m.ctx, m.typ, m.ret, *t, m.branches);
            for (std::size_t k = 0; k < m.branches.size(); ++k) {
              const Branch& b = m.branches[k];
              auto inner = with_bindings(psi, pattern_bindings(b, m.ctx, m.typ));
              if (auto t = step_in(inner, gamma, b.body)) {
                BranchSet bs = m.branches;
                bs[k].body = *t;
                return match(m.ctx, m.typ, m.ret, m.scrut, std::move(bs));
              }
            }
            return std::nullopt;
          },
          // Variables, zero, and everything under a box are inert.
          [&](const auto&) -> std::optional<Exp> { return std::nullopt; },
      },
      e->v);
}

class Eta {
 public:
  Exp at(const GlobalCtx& psi, const LocalCtx& gamma, const Exp& e,
         const Typ& t) {
    if (const auto* arr = as<type::Arr>(t)) {
      auto inner = extended(gamma, "x", arr->dom);
      if (const auto* l = as<expr::Lam>(e))
        return lam(l->hint, l->dom,
                   at(psi, extended(gamma, l->hint, l->dom), l->body, arr->cod));
      Exp body = app(shift(e, 1, 0), lvar(0));
      return lam("x", arr->dom, at(psi, inner, body, arr->cod));
    }
    if (as<expr::Zero>(e) || as<expr::Box>(e)) return e;
    if (const auto* s = as<expr::Suc>(e)) return suc(at(psi, gamma, s->pred, t));
    return neutral(psi, gamma, e).first;
  }

  std::pair<Exp, Typ> neutral(const GlobalCtx& psi, const LocalCtx& gamma,
                              const Exp& e) {
    return std::visit(
        overloaded{
            [&](const expr::LVar& x) -> std::pair<Exp, Typ> {
              return {e, gamma[gamma.size() - 1 - x.index].typ};
            },
            [&](const expr::GVar& g) -> std::pair<Exp, Typ> {
              const auto& entry = psi[psi.size() - 1 - g.index];
              LSubst d;
              for (std::size_t k = 0; k < entry.ctx.size(); ++k)
                d.terms.push_back(at(psi, gamma, g.subst.terms[k], entry.ctx[k].typ));
              return {gvar(g.index, std::move(d)), entry.typ};
            },
            [&](const expr::App& a) -> std::pair<Exp, Typ> {
              auto [f, ft] = neutral(psi, gamma, a.fn);
              const auto& arr = std::get<type::Arr>(ft->v);
              return {app(f, at(psi, gamma, a.arg, arr.dom)), arr.cod};
            },
            [&](const expr::Rec& r) -> std::pair<Exp, Typ> {
              auto inner = extended(extended(gamma, r.x_hint, nat()), r.y_hint,
                                    r.motive);
              return {rec(r.motive, at(psi, gamma, r.base, r.motive),
                          at(psi, inner, r.step, r.motive),
                          neutral(psi, gamma, r.scrut).first, r.x_hint, r.y_hint),
                      r.motive};
            },
            [&](const expr::LetBox& l) -> std::pair<Exp, Typ> {
              auto inner = with_bindings(psi, {GlobalEntry{l.hint, l.ctx, l.typ}});
              return {letbox(l.hint, l.ctx, l.typ, l.ret,
                             neutral(psi, gamma, l.scrut).first,
                             at(inner, gamma, l.body, l.ret)),
                      l.ret};
            },
            [&](const expr::Match& m) -> std::pair<Exp, Typ> {
              Exp scrut = as<expr::Box>(m.scrut) ? m.scrut
                                                 : neutral(psi, gamma, m.scrut).first;
              BranchSet bs = m.branches;
              for (auto& b : bs) {
                auto inner = with_bindings(psi, pattern_bindings(b, m.ctx, m.typ));
                b.body = at(inner, gamma, b.body, m.ret);
              }
              return {match(m.ctx, m.typ, m.ret, scrut, std::move(bs)), m.ret};
            },
            [&](const auto&) -> std::pair<Exp, Typ> {
              throw std::logic_error("eta_long expects a beta-normal term");
            },
        },
        e->v);
  }
};

}  // namespace

std::optional<Exp> step(const GlobalCtx& psi, const LocalCtx& gamma,
                        const Exp& e) {
  return step_in(psi, gamma, e);
}

std::optional<Exp> beta_normalize(const GlobalCtx& psi, const LocalCtx& gamma,
                                  const Exp& e, std::size_t fuel) {
  Exp cur = e;
  for (std::size_t n = 0;; ++n) {
    auto next = step_in(psi, gamma, cur);
    if (!next) return cur;
    if (n == fuel) return std::nullopt;
    cur = *next;
  }
}

Exp eta_long(const GlobalCtx& psi, const LocalCtx& gamma, const Exp& e,
             const Typ& t) {
  return Eta{}.at(psi, gamma, e, t);
}

}  // namespace lmtt
