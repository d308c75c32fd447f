#include "lmtt/syntax.hpp"

#include <cassert>

namespace lmtt {

ExpNode::~ExpNode() {
  auto* s = std::get_if<expr::Suc>(&v);
  if (!s) return;
  // Nodes are allocated non-const, so detaching a uniquely owned
  // predecessor before it dies is sound.
  std::shared_ptr<const ExpNode> next = std::move(s->pred.node_);
  while (next && next.use_count() == 1) {
    auto* n = std::get_if<expr::Suc>(&const_cast<ExpNode&>(*next).v);
    if (!n) break;
    std::shared_ptr<const ExpNode> pred = std::move(n->pred.node_);
    next = std::move(pred);
  }
}

namespace {

Typ make_typ(decltype(TypNode::v) v) {
  return Typ(std::make_shared<const TypNode>(TypNode{std::move(v)}));
}

Exp make_exp(decltype(ExpNode::v) v) {
  return Exp(std::make_shared<ExpNode>(ExpNode{std::move(v)}));
}

// Structural comparison. Opaque ids bound by application branches are
// matched up to a bijection; free ids must coincide.
class Comparer {
 public:
  bool typ(const Typ& a, const Typ& b) const {
    if (&a.node() == &b.node() && pairs_.empty()) return true;
    if (a->v.index() != b->v.index()) return false;
    return std::visit(
        overloaded{
            [](const type::Nat&) { return true; },
            [&](const type::Arr& x) {
              const auto& y = std::get<type::Arr>(b->v);
              return typ(x.dom, y.dom) && typ(x.cod, y.cod);
            },
            [&](const type::CBox& x) {
              const auto& y = std::get<type::CBox>(b->v);
              return ctx(x.ctx, y.ctx) && typ(x.body, y.body);
            },
            [&](const type::Opq& x) {
              return opaque(x.id, std::get<type::Opq>(b->v).id);
            },
        },
        a->v);
  }

  bool ctx(const LocalCtx& a, const LocalCtx& b) const {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!typ(a[i].typ, b[i].typ)) return false;
    return true;
  }

  bool exp(const Exp& a0, const Exp& b0) {
    const Exp* pa = &a0;
    const Exp* pb = &b0;
    while (true) {
      const auto* sa = as<expr::Suc>(*pa);
      const auto* sb = as<expr::Suc>(*pb);
      if (!sa || !sb || (pa->same_node(*pb) && pairs_.empty())) break;
      pa = &sa->pred;
      pb = &sb->pred;
    }
    const Exp& a = *pa;
    const Exp& b = *pb;
    if (a.same_node(b) && pairs_.empty()) return true;
    if (a->v.index() != b->v.index()) return false;
    return std::visit(
        overloaded{
            [&](const expr::LVar& x) {
              return x.index == std::get<expr::LVar>(b->v).index;
            },
            [&](const expr::GVar& x) {
              const auto& y = std::get<expr::GVar>(b->v);
              return x.index == y.index && subst(x.subst.terms, y.subst.terms);
            },
            [](const expr::Zero&) { return true; },
            [&](const expr::Suc& x) {
              return exp(x.pred, std::get<expr::Suc>(b->v).pred);
            },
            [&](const expr::Rec& x) {
              const auto& y = std::get<expr::Rec>(b->v);
              return typ(x.motive, y.motive) && exp(x.base, y.base) &&
                     exp(x.step, y.step) && exp(x.scrut, y.scrut);
            },
            [&](const expr::Lam& x) {
              const auto& y = std::get<expr::Lam>(b->v);
              return typ(x.dom, y.dom) && exp(x.body, y.body);
            },
            [&](const expr::App& x) {
              const auto& y = std::get<expr::App>(b->v);
              return exp(x.fn, y.fn) && exp(x.arg, y.arg);
            },
            [&](const expr::Box& x) {
              const auto& y = std::get<expr::Box>(b->v);
              return ctx(x.ctx, y.ctx) && exp(x.body, y.body);
            },
            [&](const expr::LetBox& x) {
              const auto& y = std::get<expr::LetBox>(b->v);
              return ctx(x.ctx, y.ctx) && typ(x.typ, y.typ) &&
                     typ(x.ret, y.ret) && exp(x.scrut, y.scrut) &&
                     exp(x.body, y.body);
            },
            [&](const expr::Match& x) {
              const auto& y = std::get<expr::Match>(b->v);
              if (!(ctx(x.ctx, y.ctx) && typ(x.typ, y.typ) &&
                    typ(x.ret, y.ret) && exp(x.scrut, y.scrut)))
                return false;
              if (x.branches.size() != y.branches.size()) return false;
              for (std::size_t i = 0; i < x.branches.size(); ++i)
                if (!branch(x.branches[i], y.branches[i])) return false;
              return true;
            },
        },
        a->v);
  }

  bool subst(const std::vector<Exp>& a, const std::vector<Exp>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!exp(a[i], b[i])) return false;
    return true;
  }

 private:
  bool branch(const Branch& a, const Branch& b) {
    if (a.head != b.head) return false;
    if (a.head.kind != HeadKind::app) return exp(a.body, b.body);
    pairs_.emplace_back(a.opaque, b.opaque);
    bool same = exp(a.body, b.body);
    pairs_.pop_back();
    return same;
  }

  bool opaque(std::uint32_t a, std::uint32_t b) const {
    for (auto it = pairs_.rbegin(); it != pairs_.rend(); ++it)
      if (it->first == a || it->second == b)
        return it->first == a && it->second == b;
    return a == b;
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
};

bool is_core_subst(const LSubst& d) {
  for (const auto& t : d.terms)
    if (!is_core(t)) return false;
  return true;
}

}  // namespace

Typ nat() {
  static const Typ n = make_typ(type::Nat{});
  return n;
}
Typ arrow(Typ dom, Typ cod) {
  return make_typ(type::Arr{std::move(dom), std::move(cod)});
}
Typ cbox(LocalCtx ctx, Typ body) {
  return make_typ(type::CBox{std::move(ctx), std::move(body)});
}
Typ opaque(std::uint32_t id) { return make_typ(type::Opq{id}); }

Typ arrows(const std::vector<Typ>& doms, Typ cod) {
  for (auto it = doms.rbegin(); it != doms.rend(); ++it)
    cod = arrow(*it, std::move(cod));
  return cod;
}

bool operator==(const Typ& a, const Typ& b) { return Comparer{}.typ(a, b); }
bool operator==(const CtxEntry& a, const CtxEntry& b) { return a.typ == b.typ; }
bool operator==(const GlobalEntry& a, const GlobalEntry& b) {
  return Comparer{}.ctx(a.ctx, b.ctx) && a.typ == b.typ;
}

bool mentions_opaque(const Typ& t, std::uint32_t id) {
  return std::visit(
      overloaded{
          [](const type::Nat&) { return false; },
          [&](const type::Arr& a) {
            return mentions_opaque(a.dom, id) || mentions_opaque(a.cod, id);
          },
          [&](const type::CBox& b) {
            return mentions_opaque(b.ctx, id) || mentions_opaque(b.body, id);
          },
          [&](const type::Opq& o) { return o.id == id; },
      },
      t->v);
}

bool mentions_opaque(const LocalCtx& ctx, std::uint32_t id) {
  for (const auto& e : ctx)
    if (mentions_opaque(e.typ, id)) return true;
  return false;
}

std::string to_string(const Head& h) {
  switch (h.kind) {
    case HeadKind::zero: return "zero";
    case HeadKind::suc: return "suc";
    case HeadKind::lam: return "lam";
    case HeadKind::rec: return "rec";
    case HeadKind::app: return "app";
    case HeadKind::var: return "var #" + std::to_string(h.var);
  }
  return "?";
}

std::size_t binder_count(HeadKind kind) {
  switch (kind) {
    case HeadKind::suc:
    case HeadKind::lam: return 1;
    case HeadKind::app: return 2;
    case HeadKind::rec: return 3;
    default: return 0;
  }
}

Exp lvar(Index i) { return make_exp(expr::LVar{i}); }
Exp gvar(Index u, LSubst subst) {
  return make_exp(expr::GVar{u, std::move(subst)});
}
Exp zero() {
  static const Exp z = make_exp(expr::Zero{});
  return z;
}
Exp suc(Exp pred) { return make_exp(expr::Suc{std::move(pred)}); }
Exp numeral(std::size_t n) {
  Exp e = zero();
  while (n-- > 0) e = suc(std::move(e));
  return e;
}
Exp rec(Typ motive, Exp base, Exp step, Exp scrut, std::string x_hint,
        std::string y_hint) {
  return make_exp(expr::Rec{std::move(motive), std::move(base),
                            std::move(x_hint), std::move(y_hint),
                            std::move(step), std::move(scrut)});
}
Exp lam(std::string hint, Typ dom, Exp body) {
  return make_exp(expr::Lam{std::move(hint), std::move(dom), std::move(body)});
}
Exp app(Exp fn, Exp arg) {
  return make_exp(expr::App{std::move(fn), std::move(arg)});
}
Exp app(Exp fn, std::initializer_list<Exp> args) {
  for (const auto& a : args) fn = app(std::move(fn), a);
  return fn;
}
Exp box(LocalCtx ctx, Exp body) {
  return make_exp(expr::Box{std::move(ctx), std::move(body)});
}
Exp letbox(std::string hint, LocalCtx ctx, Typ typ, Typ ret, Exp scrut,
           Exp body) {
  return make_exp(expr::LetBox{std::move(hint), std::move(ctx), std::move(typ),
                               std::move(ret), std::move(scrut),
                               std::move(body)});
}
Exp match(LocalCtx ctx, Typ typ, Typ ret, Exp scrut, BranchSet branches) {
  return make_exp(expr::Match{std::move(ctx), std::move(typ), std::move(ret),
                              std::move(scrut), std::move(branches)});
}

Branch var_branch(Index x, Exp body) {
  return Branch{{HeadKind::var, x}, {}, {}, 0, std::move(body)};
}
Branch zero_branch(Exp body) {
  return Branch{{HeadKind::zero}, {}, {}, 0, std::move(body)};
}
Branch suc_branch(std::string u, Exp body) {
  return Branch{{HeadKind::suc}, {std::move(u)}, {}, 0, std::move(body)};
}
Branch lam_branch(std::string x, std::string u, Exp body) {
  return Branch{
      {HeadKind::lam}, {std::move(u)}, {std::move(x)}, 0, std::move(body)};
}
Branch app_branch(std::string u, std::string u2, std::uint32_t opaque,
                  Exp body) {
  return Branch{{HeadKind::app},
                {std::move(u), std::move(u2)},
                {},
                opaque,
                std::move(body)};
}
Branch rec_branch(std::string u, std::string x, std::string y, std::string u2,
                  std::string u3, Exp body) {
  return Branch{{HeadKind::rec},
                {std::move(u), std::move(u2), std::move(u3)},
                {std::move(x), std::move(y)},
                0,
                std::move(body)};
}

LSubst lsubst_identity(std::size_t n) {
  LSubst d;
  d.terms.reserve(n);
  for (std::size_t p = 0; p < n; ++p)
    d.terms.push_back(lvar(static_cast<Index>(n - 1 - p)));
  return d;
}

GSubst gsubst_identity(const GlobalCtx& psi) {
  GSubst s;
  s.terms.reserve(psi.size());
  for (std::size_t p = 0; p < psi.size(); ++p)
    s.terms.push_back(gvar(static_cast<Index>(psi.size() - 1 - p),
                           lsubst_identity(psi[p].ctx.size())));
  return s;
}

bool alpha_eq(const Exp& a, const Exp& b) { return Comparer{}.exp(a, b); }
bool alpha_eq(const LSubst& a, const LSubst& b) {
  return Comparer{}.subst(a.terms, b.terms);
}
bool alpha_eq(const GSubst& a, const GSubst& b) {
  return Comparer{}.subst(a.terms, b.terms);
}

// ---------------------------------------------------------------------------

Nf Nf::assume(Exp e) {
  assert(classify_nf(e).has_value());
  return Nf(std::move(e));
}

Ne Ne::assume(Exp e) {
  assert(classify_ne(e).has_value());
  return Ne(std::move(e));
}

bool is_core(const Exp& e) {
  return std::visit(
      overloaded{
          [](const expr::LVar&) { return true; },
          [](const expr::GVar& g) { return is_core_subst(g.subst); },
          [](const expr::Zero&) { return true; },
          [](const expr::Suc& s) { return is_core(s.pred); },
          [](const expr::Rec& r) {
            return is_core(r.base) && is_core(r.step) && is_core(r.scrut);
          },
          [](const expr::Lam& l) { return is_core(l.body); },
          [](const expr::App& a) { return is_core(a.fn) && is_core(a.arg); },
          [](const expr::Box&) { return false; },
          [](const expr::LetBox&) { return false; },
          [](const expr::Match&) { return false; },
      },
      e->v);
}

bool is_nf_lsubst(const LSubst& d) {
  for (const auto& t : d.terms)
    if (!classify_nf(t)) return false;
  return true;
}

namespace {

bool is_nf(const Exp& e);

bool is_ne(const Exp& e) {
  return std::visit(
      overloaded{
          [](const expr::LVar&) { return true; },
          [](const expr::GVar& g) { return is_nf_lsubst(g.subst); },
          [](const expr::App& a) { return is_ne(a.fn) && is_nf(a.arg); },
          [](const expr::LetBox& l) { return is_ne(l.scrut) && is_nf(l.body); },
          [](const expr::Match& m) {
            bool blocked = is_ne(m.scrut);
            if (!blocked) {
              // match box(Δ. u^δ) is stuck waiting for a global substitution.
              if (const auto* b = as<expr::Box>(m.scrut)) {
                const auto* g = as<expr::GVar>(b->body);
                blocked = g != nullptr && is_core_subst(g->subst);
              }
            }
            if (!blocked) return false;
            for (const auto& br : m.branches)
              if (!is_nf(br.body)) return false;
            return true;
          },
          [](const expr::Rec& r) {
            return is_nf(r.base) && is_nf(r.step) && is_ne(r.scrut);
          },
          [](const auto&) { return false; },
      },
      e->v);
}

bool is_nf(const Exp& start) {
  const Exp* p = &start;
  while (const auto* s = as<expr::Suc>(*p)) p = &s->pred;
  const Exp& e = *p;
  return std::visit(
      overloaded{
          [](const expr::Zero&) { return true; },
          [](const expr::Box& b) { return is_core(b.body); },
          [](const expr::Lam& l) { return is_nf(l.body); },
          [&](const auto&) { return is_ne(e); },
      },
      e->v);
}

}  // namespace

std::optional<Nf> classify_nf(const Exp& e) {
  if (!is_nf(e)) return std::nullopt;
  return Nf(e);
}

std::optional<Ne> classify_ne(const Exp& e) {
  if (!is_ne(e)) return std::nullopt;
  return Ne(e);
}

}  // namespace lmtt
