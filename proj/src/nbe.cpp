#include "lmtt/nbe.hpp"

#include "lmtt/typing.hpp"

namespace lmtt {

namespace {

Exp nf_of(const Value& v) {
  if (const auto* n = std::get_if<VNat>(&v.v)) return n->nf;
  if (const auto* b = std::get_if<VBox>(&v.v)) return b->nf;
  throw std::logic_error("expected a first-order value");
}

Wk identity_wk(const Ambient& a) {
  return Wk{GWk::identity(a.psi.size()), LWk::identity(a.gamma.size())};
}

bool is_identity(const Wk& w) {
  return w.global.is_identity() && w.local.is_identity();
}

// Extends a layer-1 environment's substitution with new innermost entries.
Env with_globals(Env env, const std::vector<Exp>& terms) {
  auto& s = std::get<GSubst>(env.gpart);
  for (const auto& t : terms) s.terms.push_back(t);
  return env;
}

Env with_locals(Env env, std::initializer_list<Value> vs) {
  for (const auto& v : vs) env.lpart.push_back(v);
  return env;
}

// Weakens env to an ambient with `globals` more globals and `locals` more
// locals, both innermost.
Env env_extend(const Env& env, const GlobalCtx& globals, const LocalCtx& locals,
               AmbientRef& amb_out) {
  const Ambient& a = *env.amb;
  Ambient next = a;
  for (const auto& g : globals) next.psi.push_back(g);
  for (const auto& l : locals) next.gamma.push_back(l);
  amb_out = std::make_shared<const Ambient>(std::move(next));
  Wk w{GWk::shift(a.psi.size(), globals.size()),
       LWk::shift(a.gamma.size(), locals.size())};
  return env_wk(env, w, amb_out);
}

std::vector<Exp> identity_entries(const GlobalCtx& fresh) {
  std::vector<Exp> out;
  for (std::size_t j = 0; j < fresh.size(); ++j)
    out.push_back(gvar(static_cast<Index>(fresh.size() - 1 - j),
                       lsubst_identity(fresh[j].ctx.size())));
  return out;
}

}  // namespace

AmbientRef make_ambient(GlobalCtx psi, LocalCtx gamma) {
  return std::make_shared<const Ambient>(Ambient{std::move(psi), std::move(gamma)});
}

void Evaluator::burn() {
  if (fuel_ == 0) throw FuelExhausted();
  --fuel_;
}

Value Evaluator::eval(Layer layer, const Exp& e, const Env& env) {
  burn();
  const Ambient& amb = *env.amb;
  return std::visit(
      overloaded{
          [&](const expr::LVar& x) -> Value {
            return env.lpart[env.lpart.size() - 1 - x.index];
          },
          [&](const expr::GVar& g) -> Value {
            auto rho = eval_lsubst(layer, g.subst, env);
            if (layer == Layer::code) {
              Index u = std::get<GWk>(env.gpart).rename(g.index);
              const auto& entry = amb.psi[amb.psi.size() - 1 - u];
              return reflect(entry.typ,
                             gvar(u, reify_lenv(env.amb, entry.ctx, rho)));
            }
            const auto& s = std::get<GSubst>(env.gpart);
            const Exp& code = s.terms[s.terms.size() - 1 - g.index];
            Env inner{GWk::identity(amb.psi.size()), std::move(rho), env.amb};
            return eval(Layer::code, code, inner);
          },
          [&](const expr::Zero&) -> Value { return Value{VNat{zero()}}; },
          [&](const expr::Suc& s) -> Value {
            // Literals are long suc chains; walk them without recursing.
            std::size_t n = 1;
            const Exp* p = &s.pred;
            while (const auto* inner = as<expr::Suc>(*p)) {
              ++n;
              p = &inner->pred;
            }
            Exp nf = nf_of(eval(layer, *p, env));
            while (n-- > 0) nf = suc(std::move(nf));
            return Value{VNat{std::move(nf)}};
          },
          [&](const expr::Rec& r) -> Value {
            return rec_sem(layer, r, nf_of(eval(layer, r.scrut, env)), env);
          },
          [&](const expr::Lam& l) -> Value {
            return Value{VFun{std::make_shared<const Closure>(
                Closure{layer, env, l.hint, l.dom, l.body})}};
          },
          [&](const expr::App& a) -> Value {
            Value f = eval(layer, a.fn, env);
            Value arg = eval(layer, a.arg, env);
            return apply_fun(f, identity_wk(amb), arg, env.amb);
          },
          [&](const expr::Box& b) -> Value {
            if (layer == Layer::code)
              throw std::logic_error("box in layer-0 code");
            return Value{
                VBox{box(b.ctx, gsubst_apply(b.body, std::get<GSubst>(env.gpart)))}};
          },
          [&](const expr::LetBox& l) -> Value {
            if (layer == Layer::code)
              throw std::logic_error("letbox in layer-0 code");
            return letbox_sem(l, eval(layer, l.scrut, env), env);
          },
          [&](const expr::Match& m) -> Value {
            if (layer == Layer::code)
              throw std::logic_error("match in layer-0 code");
            Exp s = nf_of(eval(layer, m.scrut, env));
            if (const auto* b = as<expr::Box>(s)) return match_sem(b->body, m, env);
            BranchSet bs;
            for (const auto& br : m.branches) bs.push_back(nfbranch_sem(br, m, env));
            return reflect(m.ret, match(m.ctx, m.typ, m.ret, s, std::move(bs)));
          },
      },
      e->v);
}

Value Evaluator::letbox_sem(const expr::LetBox& l, const Value& scrut,
                            const Env& env) {
  const Exp& s = nf_of(scrut);
  if (const auto* b = as<expr::Box>(s))
    return eval(Layer::meta, l.body, with_globals(env, {b->body}));
  GlobalCtx fresh{GlobalEntry{l.hint, l.ctx, l.typ}};
  AmbientRef amb;
  Env inner = with_globals(env_extend(env, fresh, {}, amb), identity_entries(fresh));
  Exp body = reify(amb, l.ret, eval(Layer::meta, l.body, inner));
  return reflect(l.ret, letbox(l.hint, l.ctx, l.typ, l.ret, s, body));
}

std::vector<Value> Evaluator::eval_lsubst(Layer layer, const LSubst& d,
                                          const Env& env) {
  std::vector<Value> out;
  out.reserve(d.terms.size());
  for (const auto& t : d.terms) out.push_back(eval(layer, t, env));
  return out;
}

Value Evaluator::apply_fun(const Value& f, const Wk& w, const Value& arg,
                           const AmbientRef& amb) {
  const auto* fn = std::get_if<VFun>(&f.v);
  if (!fn) throw std::logic_error("applying a non-function value");
  return std::visit(
      overloaded{
          [&](const std::shared_ptr<const Closure>& c) -> Value {
            Env env = is_identity(w) && c->env.amb == amb ? c->env
                                                          : env_wk(c->env, w, amb);
            env.lpart.push_back(arg);
            return eval(c->layer, c->body, env);
          },
          [&](const Reflected& r) -> Value {
            const auto& arr = std::get<type::Arr>(r.type->v);
            return reflect(arr.cod, app(wk_apply(r.neutral, w),
                                        reify(amb, arr.dom, arg)));
          },
      },
      fn->fn);
}

Exp Evaluator::reify(const AmbientRef& amb, const Typ& t, const Value& v) {
  const auto* arr = as<type::Arr>(t);
  if (!arr) return nf_of(v);
  std::string hint = "x";
  if (const auto* fn = std::get_if<VFun>(&v.v))
    if (const auto* c = std::get_if<std::shared_ptr<const Closure>>(&fn->fn))
      hint = (*c)->hint;
  LocalCtx gamma = amb->gamma;
  gamma.push_back(CtxEntry{hint, arr->dom});
  auto next = make_ambient(amb->psi, std::move(gamma));
  Wk w{GWk::identity(amb->psi.size()), LWk::shift(amb->gamma.size(), 1)};
  Value body = apply_fun(v, w, reflect(arr->dom, lvar(0)), next);
  return lam(hint, arr->dom, reify(next, arr->cod, body));
}

LSubst Evaluator::reify_lenv(const AmbientRef& amb, const LocalCtx& d,
                             const std::vector<Value>& rho) {
  LSubst out;
  out.terms.reserve(d.size());
  for (std::size_t k = 0; k < d.size(); ++k)
    out.terms.push_back(reify(amb, d[k].typ, rho[k]));
  return out;
}

Value Evaluator::match_sem(const Exp& core, const expr::Match& m,
                           const Env& env) {
  const Branch* b = branch_lookup(m.branches, core);
  if (!b) {
    // A global variable at the head: blocked until it is substituted.
    BranchSet bs;
    for (const auto& br : m.branches) bs.push_back(nfbranch_sem(br, m, env));
    return reflect(m.ret, match(m.ctx, m.typ, m.ret, box(m.ctx, core), std::move(bs)));
  }
  return std::visit(
      overloaded{
          [&](const expr::Suc& s) {
            return eval(Layer::meta, b->body, with_globals(env, {s.pred}));
          },
          [&](const expr::Lam& l) {
            return eval(Layer::meta, b->body, with_globals(env, {l.body}));
          },
          [&](const expr::App& a) {
            Typ s = infer(env.amb->psi, m.ctx, Layer::code, a.arg);
            return eval(Layer::meta, subst_opaque(b->body, b->opaque, s),
                        with_globals(env, {a.fn, a.arg}));
          },
          [&](const expr::Rec& r) {
            return eval(Layer::meta, b->body,
                        with_globals(env, {r.base, r.step, r.scrut}));
          },
          [&](const auto&) { return eval(Layer::meta, b->body, env); },
      },
      core->v);
}

Branch Evaluator::nfbranch_sem(const Branch& b, const expr::Match& m,
                               const Env& env) {
  GlobalCtx fresh = pattern_bindings(b, m.ctx, m.typ);
  AmbientRef amb;
  Env inner = with_globals(env_extend(env, fresh, {}, amb), identity_entries(fresh));
  Branch out = b;
  out.body = reify(amb, m.ret, eval(Layer::meta, b.body, inner));
  return out;
}

Value Evaluator::rec_sem(Layer layer, const expr::Rec& r, const Exp& scrut_nf,
                         const Env& env) {
  // Peel the successors iteratively, then fold the step back up.
  std::vector<Exp> preds;
  Exp tip = scrut_nf;
  while (const auto* s = as<expr::Suc>(tip)) {
    preds.push_back(s->pred);
    tip = s->pred;
  }
  Value acc = [&]() -> Value {
    if (as<expr::Zero>(tip)) return eval(layer, r.base, env);
    Exp base = reify(env.amb, r.motive, eval(layer, r.base, env));
    LocalCtx binders{CtxEntry{r.x_hint, nat()}, CtxEntry{r.y_hint, r.motive}};
    AmbientRef amb;
    Env inner = with_locals(env_extend(env, {}, binders, amb),
                            {reflect(nat(), lvar(1)), reflect(r.motive, lvar(0))});
    Exp step = reify(amb, r.motive, eval(layer, r.step, inner));
    return reflect(r.motive, rec(r.motive, base, step, tip, r.x_hint, r.y_hint));
  }();
  for (auto it = preds.rbegin(); it != preds.rend(); ++it)
    acc = eval(layer, r.step, with_locals(env, {Value{VNat{*it}}, acc}));
  return acc;
}

Value value_wk(const Value& v, const Wk& w, const AmbientRef& amb) {
  return std::visit(
      overloaded{
          [&](const VNat& n) { return Value{VNat{wk_apply(n.nf, w)}}; },
          [&](const VBox& b) { return Value{VBox{wk_apply(b.nf, w)}}; },
          [&](const VFun& f) {
            return std::visit(
                overloaded{
                    [&](const std::shared_ptr<const Closure>& c) {
                      return Value{VFun{std::make_shared<const Closure>(
                          Closure{c->layer, env_wk(c->env, w, amb), c->hint,
                                  c->dom, c->body})}};
                    },
                    [&](const Reflected& r) {
                      return Value{VFun{Reflected{r.type, wk_apply(r.neutral, w)}}};
                    },
                },
                f.fn);
          },
      },
      v.v);
}

Env env_wk(const Env& env, const Wk& w, const AmbientRef& amb) {
  Env out;
  out.amb = amb;
  if (const auto* g = std::get_if<GWk>(&env.gpart))
    out.gpart = wk_compose(*g, w.global);
  else
    out.gpart = wk_apply(std::get<GSubst>(env.gpart), w.global);
  out.lpart.reserve(env.lpart.size());
  for (const auto& v : env.lpart) out.lpart.push_back(value_wk(v, w, amb));
  return out;
}

Value reflect(const Typ& t, const Exp& neutral) {
  return std::visit(
      overloaded{
          [&](const type::Arr&) { return Value{VFun{Reflected{t, neutral}}}; },
          [&](const type::CBox&) { return Value{VBox{neutral}}; },
          [&](const auto&) { return Value{VNat{neutral}}; },
      },
      t->v);
}

Env id_env(const GlobalCtx& psi, const LocalCtx& gamma) {
  Env env{gsubst_identity(psi), {}, make_ambient(psi, gamma)};
  for (std::size_t p = 0; p < gamma.size(); ++p)
    env.lpart.push_back(
        reflect(gamma[p].typ, lvar(static_cast<Index>(gamma.size() - 1 - p))));
  return env;
}

Nf nbe(const GlobalCtx& psi, const LocalCtx& gamma, const Exp& e, const Typ& t,
       std::size_t fuel) {
  Evaluator ev(fuel);
  Env env = id_env(psi, gamma);
  return Nf::assume(ev.reify(env.amb, t, ev.eval(Layer::meta, e, env)));
}

bool equiv(const GlobalCtx& psi, const LocalCtx& gamma, Layer layer,
           const Exp& a, const Exp& b, const Typ& t) {
  if (layer == Layer::code) return alpha_eq(a, b);
  return alpha_eq(nbe(psi, gamma, a, t).exp(), nbe(psi, gamma, b, t).exp());
}

}  // namespace lmtt
