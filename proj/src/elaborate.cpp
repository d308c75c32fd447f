#include "lmtt/elaborate.hpp"

#include <algorithm>
#include <map>

#include "lmtt/substitution.hpp"
#include "lmtt/wellformed.hpp"

namespace lmtt {

namespace {

struct Scope {
  GlobalCtx psi;
  LocalCtx gamma;
  // Binding times, parallel to psi and gamma; the later binding of a name wins.
  std::vector<std::uint64_t> gtime;
  std::vector<std::uint64_t> ltime;
  Layer layer;
};

struct Lookup {
  enum class Kind { none, local, global } kind = Kind::none;
  Index index = 0;
};

class Elaborator {
 public:
  Elaborator(const std::vector<CheckedDef>& defs, std::uint32_t& next_opaque)
      : next_opaque_(next_opaque) {
    for (const auto& d : defs) defs_[d.name] = &d;
  }

  Scope scope(const GlobalCtx& psi, const LocalCtx& gamma, Layer layer) {
    Scope s{psi, gamma, {}, {}, layer};
    for (std::size_t k = 0; k < psi.size(); ++k) s.gtime.push_back(clock_++);
    for (std::size_t k = 0; k < gamma.size(); ++k) s.ltime.push_back(clock_++);
    return s;
  }

  Elaborated top(const SExp& e, const Scope& s) {
    Exp core = go(e, s);
    // Typed before the braced return: GCC leaks the copied core if the
    // second initializer throws.
    Typ t = type_of(core, s, e.pos);
    return {core, t};
  }

 private:
  Scope with_local(Scope s, const std::string& name, const Typ& t) {
    s.gamma.push_back(CtxEntry{name, t});
    s.ltime.push_back(clock_++);
    return s;
  }

  Scope with_global(Scope s, const GlobalEntry& g) {
    s.psi.push_back(g);
    s.gtime.push_back(clock_++);
    return s;
  }

  Typ type_of(const Exp& e, const Scope& s, Pos pos) {
    try {
      return infer(s.psi, s.gamma, s.layer, e);
    } catch (const TypeError& err) {
      throw SourceTypeError(pos, err.error());
    }
  }

  [[noreturn]] void type_error(Pos pos, ErrorKind kind, std::string msg) {
    throw SourceTypeError(pos, TypingError{kind, std::move(msg), {}, {}, {}});
  }

  static Lookup find_local(const Scope& s, const std::string& name) {
    for (std::size_t p = s.gamma.size(); p-- > 0;)
      if (s.gamma[p].hint == name)
        return {Lookup::Kind::local, static_cast<Index>(s.gamma.size() - 1 - p)};
    return {};
  }

  static Lookup find(const Scope& s, const std::string& name) {
    Lookup l = find_local(s, name);
    for (std::size_t p = s.psi.size(); p-- > 0;) {
      if (s.psi[p].hint != name) continue;
      if (l.kind == Lookup::Kind::local &&
          s.ltime[s.gamma.size() - 1 - l.index] > s.gtime[p])
        return l;
      return {Lookup::Kind::global, static_cast<Index>(s.psi.size() - 1 - p)};
    }
    return l;
  }

  // Gives each application pattern of an inlined definition a fresh id.
  Exp refresh(const Exp& e) {
    if (const auto* m = as<expr::Match>(e)) {
      BranchSet bs = m->branches;
      for (auto& b : bs) {
        if (b.head.kind == HeadKind::app) {
          std::uint32_t id = next_opaque_++;
          b.body = subst_opaque(b.body, b.opaque, opaque(id));
          b.opaque = id;
        }
        b.body = refresh(b.body);
      }
      return match(m->ctx, m->typ, m->ret, refresh(m->scrut), std::move(bs));
    }
    return std::visit(
        overloaded{
            [&](const expr::GVar& g) {
              LSubst d;
              for (const auto& t : g.subst.terms) d.terms.push_back(refresh(t));
              return gvar(g.index, std::move(d));
            },
            [&](const expr::Suc& s) { return suc(refresh(s.pred)); },
            [&](const expr::Rec& r) {
              return rec(r.motive, refresh(r.base), refresh(r.step),
                         refresh(r.scrut), r.x_hint, r.y_hint);
            },
            [&](const expr::Lam& l) { return lam(l.hint, l.dom, refresh(l.body)); },
            [&](const expr::App& a) { return app(refresh(a.fn), refresh(a.arg)); },
            [&](const expr::LetBox& l) {
              return letbox(l.hint, l.ctx, l.typ, l.ret, refresh(l.scrut),
                            refresh(l.body));
            },
            [&](const auto&) { return e; },
        },
        e->v);
  }

  Exp go(const SExp& e, const Scope& s) {
    return std::visit(
        overloaded{
            [&](const surf::Ident& x) { return ident(x.name, s, e.pos); },
            [&](const surf::GApp& g) { return gapp(g, s, e.pos); },
            [&](const surf::Zero&) { return zero(); },
            [&](const surf::Num& n) { return numeral(n.value); },
            [&](const surf::Suc& n) { return suc(go(*n.arg, s)); },
            [&](const surf::Rec& r) {
              Exp base = go(*r.base, s);
              Exp step = go(*r.step, with_local(with_local(s, r.x, nat()), r.y,
                                                r.motive));
              Exp scrut = go(*r.scrut, s);
              return checked(rec(r.motive, base, step, scrut, r.x, r.y), s, e.pos);
            },
            [&](const surf::Lam& l) { return lambda(l, 0, s, e.pos); },
            [&](const surf::App& a) {
              return checked(app(go(*a.fn, s), go(*a.arg, s)), s, e.pos);
            },
            [&](const surf::Box& b) {
              meta_only(s, e.pos, "box");
              if (!wf_ctx(Layer::code, b.ctx))
                type_error(e.pos, ErrorKind::NotCore, "box context is not core");
              Scope inner = s;
              inner.gamma.clear();
              inner.ltime.clear();
              inner.layer = Layer::code;
              for (const auto& c : b.ctx) inner = with_local(inner, c.hint, c.typ);
              return box(b.ctx, go(*b.body, inner));
            },
            [&](const surf::LetBox& l) { return let_box(l, s, e.pos); },
            [&](const surf::Match& m) { return match_on(m, s, e.pos); },
        },
        e.v);
  }

  Exp checked(Exp core, const Scope& s, Pos pos) {
    type_of(core, s, pos);
    return core;
  }

  void meta_only(const Scope& s, Pos pos, const char* what) {
    if (s.layer == Layer::code)
      type_error(pos, ErrorKind::LayerViolation,
                 std::string(what) + " is not allowed in layer-0 code");
  }

  Exp ident(const std::string& name, const Scope& s, Pos pos) {
    Lookup l = find(s, name);
    if (l.kind == Lookup::Kind::local) return lvar(l.index);
    if (l.kind == Lookup::Kind::global) {
      // A bare global stands for u^[x1, ..., xn] with its declared context.
      const auto& entry = s.psi[s.psi.size() - 1 - l.index];
      LSubst d;
      for (const auto& c : entry.ctx) {
        Lookup x = find(s, c.hint);
        if (x.kind != Lookup::Kind::local)
          throw ResolveError(pos, "'" + name + "' needs local '" + c.hint +
                                      "' in scope; write " + name +
                                      "^[...] explicitly");
        d.terms.push_back(lvar(x.index));
      }
      return checked(gvar(l.index, std::move(d)), s, pos);
    }
    auto it = defs_.find(name);
    if (it == defs_.end()) throw ResolveError(pos, "unbound name '" + name + "'");
    return checked(refresh(it->second->body), s, pos);
  }

  Exp gapp(const surf::GApp& g, const Scope& s, Pos pos) {
    Lookup l = find(s, g.name);
    if (l.kind != Lookup::Kind::global)
      throw ResolveError(pos, "'" + g.name + "' is not a global variable");
    const auto& entry = s.psi[s.psi.size() - 1 - l.index];
    if (entry.ctx.size() != g.args.size())
      throw ResolveError(pos, "'" + g.name + "' expects " +
                                  std::to_string(entry.ctx.size()) +
                                  " substitution terms, got " +
                                  std::to_string(g.args.size()));
    LSubst d;
    for (const auto& a : g.args) d.terms.push_back(go(*a, s));
    return checked(gvar(l.index, std::move(d)), s, pos);
  }

  Exp lambda(const surf::Lam& l, std::size_t k, const Scope& s, Pos pos) {
    const auto& p = l.params[k];
    if (!wf_typ(s.layer, p.typ))
      type_error(pos, ErrorKind::NotCore,
                 "annotation of '" + p.hint + "' is not a valid type here");
    Scope inner = with_local(s, p.hint, p.typ);
    Exp body = k + 1 < l.params.size() ? lambda(l, k + 1, inner, pos)
                                       : go(*l.body, inner);
    return lam(p.hint, p.typ, body);
  }

  std::pair<LocalCtx, Typ> code_type(const Exp& scrut, const Scope& s, Pos pos) {
    Typ t = type_of(scrut, s, pos);
    const auto* b = as<type::CBox>(t);
    if (!b)
      throw SourceTypeError(pos, TypingError{ErrorKind::BadScrutinee,
                                             "scrutinee is not code",
                                             std::nullopt, t, {}});
    return {b->ctx, b->body};
  }

  Exp let_box(const surf::LetBox& l, const Scope& s, Pos pos) {
    meta_only(s, pos, "letbox");
    Exp scrut = go(*l.scrut, s);
    auto [ctx, typ] = code_type(scrut, s, l.scrut->pos);
    Scope inner = with_global(s, GlobalEntry{l.name, ctx, typ});
    Exp body = go(*l.body, inner);
    Typ ret = type_of(body, inner, l.body->pos);
    return checked(letbox(l.name, ctx, typ, ret, scrut, body), s, pos);
  }

  static Head head_of_kind(SBranch::Kind k) {
    switch (k) {
      case SBranch::Kind::zero: return {HeadKind::zero};
      case SBranch::Kind::suc: return {HeadKind::suc};
      case SBranch::Kind::lam: return {HeadKind::lam};
      case SBranch::Kind::app: return {HeadKind::app};
      case SBranch::Kind::rec: return {HeadKind::rec};
      default: return {HeadKind::var};
    }
  }

  // Builds the core branch skeleton for head h with the given names.
  Branch skeleton(Head h, const std::vector<std::string>& names) {
    auto name = [&](std::size_t k) {
      return k < names.size() ? names[k] : std::string("_");
    };
    Branch b{h, {}, {}, 0, zero()};
    switch (h.kind) {
      case HeadKind::zero:
      case HeadKind::var: break;
      case HeadKind::suc: b.binders = {name(0)}; break;
      case HeadKind::lam:
        b.locals = {name(0)};
        b.binders = {name(1)};
        break;
      case HeadKind::app:
        b.binders = {name(0), name(1)};
        b.opaque = next_opaque_++;
        break;
      case HeadKind::rec:
        b.binders = {name(0), name(3), name(4)};
        b.locals = {name(1), name(2)};
        break;
    }
    return b;
  }

  Exp match_on(const surf::Match& m, const Scope& s, Pos pos) {
    meta_only(s, pos, "match");
    Exp scrut = go(*m.scrut, s);
    auto [ctx, typ] = code_type(scrut, s, m.scrut->pos);
    std::vector<Head> required;
    try {
      required = required_heads(ctx, typ);
    } catch (const TypeError& err) {
      throw SourceTypeError(m.scrut->pos, err.error());
    }

    // Resolve the written heads first so wildcards know what is missing.
    std::vector<std::pair<Head, const SBranch*>> written;
    for (const auto& sb : m.branches) {
      if (sb.kind == SBranch::Kind::wildcard) continue;
      Head h = head_of_kind(sb.kind);
      if (sb.kind == SBranch::Kind::var) {
        const std::string& x = sb.names[0];
        bool found = false;
        for (std::size_t p = ctx.size(); p-- > 0;)
          if (ctx[p].hint == x) {
            h.var = static_cast<Index>(ctx.size() - 1 - p);
            found = true;
            break;
          }
        if (!found)
          throw ResolveError(sb.pos, "'" + x + "' is not in the scrutinee's context");
      }
      written.emplace_back(h, &sb);
    }

    std::vector<std::pair<Branch, const SBranch*>> todo;
    std::size_t w = 0;
    for (const auto& sb : m.branches) {
      if (sb.kind != SBranch::Kind::wildcard) {
        const auto& [h, src] = written[w++];
        todo.emplace_back(skeleton(h, src->names), src);
        continue;
      }
      for (const auto& h : required) {
        bool present = std::any_of(written.begin(), written.end(),
                                   [&](const auto& p) { return p.first == h; }) ||
                       std::any_of(todo.begin(), todo.end(),
                                   [&](const auto& p) { return p.first.head == h; });
        if (!present) todo.emplace_back(skeleton(h, {}), &sb);
      }
    }

    BranchSet bs;
    std::optional<Typ> ret;
    std::optional<Typ> fallback;
    for (auto& [b, src] : todo) {
      GlobalCtx binds;
      try {
        binds = pattern_bindings(b, ctx, typ);
      } catch (const TypeError& err) {
        throw SourceTypeError(src->pos, err.error());
      }
      Scope inner = s;
      for (const auto& g : binds) inner = with_global(inner, g);
      b.body = go(*src->body, inner);
      Typ t = type_of(b.body, inner, src->body->pos);
      if (b.head.kind != HeadKind::app) {
        if (!ret) ret = t;
      } else if (!fallback) {
        fallback = t;
      }
      bs.push_back(b);
    }
    Typ result = ret ? *ret : fallback ? *fallback : nat();
    return checked(match(ctx, typ, result, scrut, std::move(bs)), s, pos);
  }

  std::map<std::string, const CheckedDef*> defs_;
  std::uint32_t& next_opaque_;
  std::uint64_t clock_ = 0;
};

std::uint32_t max_opaque(const Exp& e) {
  std::uint32_t m = 0;
  auto sub = [&](const Exp& x) { m = std::max(m, max_opaque(x)); };
  std::visit(overloaded{
                 [&](const expr::GVar& g) {
                   for (const auto& t : g.subst.terms) sub(t);
                 },
                 [&](const expr::Suc& s) { sub(s.pred); },
                 [&](const expr::Rec& r) {
                   sub(r.base);
                   sub(r.step);
                   sub(r.scrut);
                 },
                 [&](const expr::Lam& l) { sub(l.body); },
                 [&](const expr::App& a) {
                   sub(a.fn);
                   sub(a.arg);
                 },
                 [&](const expr::Box& b) { sub(b.body); },
                 [&](const expr::LetBox& l) {
                   sub(l.scrut);
                   sub(l.body);
                 },
                 [&](const expr::Match& mt) {
                   sub(mt.scrut);
                   for (const auto& b : mt.branches) {
                     m = std::max(m, b.opaque);
                     sub(b.body);
                   }
                 },
                 [](const auto&) {},
             },
             e->v);
  return m;
}

}  // namespace

std::vector<CheckedDef> resolve(const Program& p) {
  std::vector<CheckedDef> defs;
  defs.reserve(p.defs.size());
  std::uint32_t next_opaque = 1;
  for (const auto& d : p.defs) {
    for (const auto& prev : defs)
      if (prev.name == d.name)
        throw ResolveError(d.pos, "duplicate definition '" + d.name + "'");
    if (!wf_typ(Layer::meta, d.typ))
      throw SourceTypeError(
          d.pos, TypingError{ErrorKind::NotCore,
                             "declared type of '" + d.name + "' is not valid",
                             std::nullopt, d.typ, {}});
    Elaborator el(defs, next_opaque);
    Elaborated r = el.top(*d.body, el.scope({}, {}, Layer::meta));
    if (!(r.typ == d.typ))
      throw SourceTypeError(
          d.pos, TypingError{ErrorKind::Mismatch,
                             "body of '" + d.name + "' does not have its declared type",
                             d.typ, r.typ, {}});
    defs.push_back(CheckedDef{d.name, d.typ, r.exp, d.pos});
  }
  return defs;
}

Elaborated elaborate(const SExp& e, const GlobalCtx& psi, const LocalCtx& gamma,
                     Layer layer, const std::vector<CheckedDef>& defs) {
  std::uint32_t next_opaque = 1;
  for (const auto& d : defs) next_opaque = std::max(next_opaque, max_opaque(d.body) + 1);
  Elaborator el(defs, next_opaque);
  return el.top(e, el.scope(psi, gamma, layer));
}

Elaborated read_exp(std::string_view src, const GlobalCtx& psi,
                    const LocalCtx& gamma, Layer layer,
                    const std::vector<CheckedDef>& defs) {
  return elaborate(*parse_exp(src), psi, gamma, layer, defs);
}

}  // namespace lmtt
