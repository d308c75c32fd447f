#include "lmtt/typing.hpp"

#include <algorithm>
#include <sstream>

#include "lmtt/wellformed.hpp"

namespace lmtt {

namespace {

std::string show(const Typ& t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

[[noreturn]] void fail(ErrorKind kind, std::string message,
                       std::optional<Typ> expected = std::nullopt,
                       std::optional<Typ> got = std::nullopt) {
  throw TypeError(TypingError{kind, std::move(message), std::move(expected),
                              std::move(got), {}});
}

void expect(const Typ& expected, const Typ& got, const char* what) {
  if (!(expected == got))
    fail(ErrorKind::Mismatch,
         std::string(what) + ": expected " + show(expected) + ", got " +
             show(got),
         expected, got);
}

void require_valid(Layer layer, const Typ& t, const char* what) {
  if (!wf_typ(layer, t))
    fail(ErrorKind::NotCore, std::string(what) + " " + show(t) +
                                 " is not a valid layer-" +
                                 std::to_string(static_cast<int>(layer)) +
                                 " type");
}

LocalCtx extended(LocalCtx g, std::string hint, Typ t) {
  g.push_back(CtxEntry{std::move(hint), std::move(t)});
  return g;
}

// The scrutinee of letbox/match must be code of the annotated type.
void check_code_scrutinee(const GlobalCtx& psi, const LocalCtx& gamma,
                          const LocalCtx& ctx, const Typ& typ,
                          const Exp& scrut) {
  if (!wf_ctx(Layer::code, ctx) || !wf_typ(Layer::code, typ))
    fail(ErrorKind::NotCore, "annotated code type " + show(cbox(ctx, typ)) +
                                 " is not core");
  Typ got = infer(psi, gamma, Layer::meta, scrut);
  if (!as<type::CBox>(got))
    fail(ErrorKind::BadScrutinee, "scrutinee has type " + show(got) +
                                      ", expected a code type",
         std::nullopt, got);
  if (!(got == cbox(ctx, typ)))
    fail(ErrorKind::BadAnnotation,
         "scrutinee annotation " + show(cbox(ctx, typ)) +
             " disagrees with its type " + show(got),
         cbox(ctx, typ), got);
}

}  // namespace

std::string to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::UnboundVar: return "UnboundVar";
    case ErrorKind::LayerViolation: return "LayerViolation";
    case ErrorKind::NotCore: return "NotCore";
    case ErrorKind::Mismatch: return "Mismatch";
    case ErrorKind::NonCovering: return "NonCovering";
    case ErrorKind::DuplicateBranch: return "DuplicateBranch";
    case ErrorKind::UnexpectedBranch: return "UnexpectedBranch";
    case ErrorKind::BadScrutinee: return "BadScrutinee";
    case ErrorKind::BadAnnotation: return "BadAnnotation";
  }
  return "?";
}

TypeError::TypeError(TypingError err)
    : std::runtime_error(to_string(err.kind) + ": " + err.message),
      err_(std::move(err)) {}

Typ infer(const GlobalCtx& psi, const LocalCtx& gamma, Layer layer,
          const Exp& e) {
  auto meta_only = [&](const char* what) {
    if (layer == Layer::code)
      fail(ErrorKind::LayerViolation,
           std::string(what) + " is not allowed in layer-0 code");
  };
  return std::visit(
      overloaded{
          [&](const expr::LVar& x) -> Typ {
            if (x.index >= gamma.size())
              fail(ErrorKind::UnboundVar,
                   "local variable #" + std::to_string(x.index) +
                       " is out of scope");
            return gamma[gamma.size() - 1 - x.index].typ;
          },
          [&](const expr::GVar& g) -> Typ {
            if (g.index >= psi.size())
              fail(ErrorKind::UnboundVar,
                   "global variable #" + std::to_string(g.index) +
                       " is out of scope");
            const auto& entry = psi[psi.size() - 1 - g.index];
            check_lsubst(psi, gamma, layer, g.subst, entry.ctx);
            return entry.typ;
          },
          [&](const expr::Zero&) -> Typ { return nat(); },
          [&](const expr::Suc& s) -> Typ {
            expect(nat(), infer(psi, gamma, layer, s.pred), "suc");
            return nat();
          },
          [&](const expr::Rec& r) -> Typ {
            require_valid(layer, r.motive, "rec motive");
            expect(r.motive, infer(psi, gamma, layer, r.base), "rec base");
            auto inner = extended(extended(gamma, r.x_hint, nat()), r.y_hint,
                                  r.motive);
            expect(r.motive, infer(psi, inner, layer, r.step), "rec step");
            expect(nat(), infer(psi, gamma, layer, r.scrut), "rec scrutinee");
            return r.motive;
          },
          [&](const expr::Lam& l) -> Typ {
            require_valid(layer, l.dom, "lambda annotation");
            return arrow(l.dom,
                         infer(psi, extended(gamma, l.hint, l.dom), layer, l.body));
          },
          [&](const expr::App& a) -> Typ {
            Typ f = infer(psi, gamma, layer, a.fn);
            const auto* arr = as<type::Arr>(f);
            if (!arr)
              fail(ErrorKind::Mismatch,
                   "applying a term of non-function type " + show(f),
                   std::nullopt, f);
            expect(arr->dom, infer(psi, gamma, layer, a.arg), "argument");
            return arr->cod;
          },
          [&](const expr::Box& b) -> Typ {
            meta_only("box");
            if (!wf_ctx(Layer::code, b.ctx))
              fail(ErrorKind::NotCore, "box context is not core");
            return cbox(b.ctx, infer(psi, b.ctx, Layer::code, b.body));
          },
          [&](const expr::LetBox& l) -> Typ {
            meta_only("letbox");
            check_code_scrutinee(psi, gamma, l.ctx, l.typ, l.scrut);
            require_valid(Layer::meta, l.ret, "letbox result");
            GlobalCtx inner = psi;
            inner.push_back(GlobalEntry{l.hint, l.ctx, l.typ});
            expect(l.ret, infer(inner, gamma, Layer::meta, l.body), "letbox body");
            return l.ret;
          },
          [&](const expr::Match& m) -> Typ {
            meta_only("match");
            check_code_scrutinee(psi, gamma, m.ctx, m.typ, m.scrut);
            require_valid(Layer::meta, m.ret, "match result");
            check_branches(psi, gamma, m.ctx, m.typ, m.ret, m.branches);
            return m.ret;
          },
      },
      e->v);
}

std::variant<Typ, TypingError> try_infer(const GlobalCtx& psi,
                                         const LocalCtx& gamma, Layer layer,
                                         const Exp& e) {
  try {
    return infer(psi, gamma, layer, e);
  } catch (const TypeError& err) {
    return err.error();
  }
}

void check_lsubst(const GlobalCtx& psi, const LocalCtx& gamma, Layer layer,
                  const LSubst& d, const LocalCtx& target) {
  if (d.terms.size() != target.size())
    fail(ErrorKind::BadScrutinee,
         "local substitution has " + std::to_string(d.terms.size()) +
             " terms, context expects " + std::to_string(target.size()));
  for (std::size_t k = 0; k < target.size(); ++k)
    expect(target[k].typ, infer(psi, gamma, layer, d.terms[k]),
           "local substitution entry");
}

std::vector<Head> required_heads(const LocalCtx& ctx, const Typ& t) {
  std::vector<Head> heads;
  if (as<type::Nat>(t)) {
    heads = {{HeadKind::zero}, {HeadKind::suc}, {HeadKind::rec}, {HeadKind::app}};
  } else if (as<type::Arr>(t)) {
    heads = {{HeadKind::lam}, {HeadKind::rec}, {HeadKind::app}};
  } else {
    fail(ErrorKind::BadScrutinee,
         "cannot pattern match on code of type " + show(t));
  }
  for (std::size_t p = 0; p < ctx.size(); ++p)
    if (ctx[p].typ == t)
      heads.push_back({HeadKind::var, static_cast<Index>(ctx.size() - 1 - p)});
  std::sort(heads.begin(), heads.end());
  return heads;
}

GlobalCtx pattern_bindings(const Branch& b, const LocalCtx& ctx, const Typ& t) {
  auto name = [&](std::size_t k) {
    return k < b.binders.size() ? b.binders[k] : std::string("u");
  };
  auto local = [&](std::size_t k, const char* fallback) {
    return k < b.locals.size() ? b.locals[k] : std::string(fallback);
  };
  switch (b.head.kind) {
    case HeadKind::zero:
    case HeadKind::var: return {};
    case HeadKind::suc: return {GlobalEntry{name(0), ctx, nat()}};
    case HeadKind::lam: {
      const auto* arr = as<type::Arr>(t);
      if (!arr) fail(ErrorKind::UnexpectedBranch, "lambda pattern at " + show(t));
      return {GlobalEntry{name(0), extended(ctx, local(0, "x"), arr->dom),
                          arr->cod}};
    }
    case HeadKind::app: {
      Typ s = opaque(b.opaque);
      return {GlobalEntry{name(0), ctx, arrow(s, t)},
              GlobalEntry{name(1), ctx, s}};
    }
    case HeadKind::rec:
      return {GlobalEntry{name(0), ctx, t},
              GlobalEntry{name(1),
                          extended(extended(ctx, local(0, "x"), nat()),
                                   local(1, "y"), t),
                          t},
              GlobalEntry{name(2), ctx, nat()}};
  }
  return {};
}

void check_branches(const GlobalCtx& psi, const LocalCtx& gamma,
                    const LocalCtx& scrut_ctx, const Typ& scrut_ty,
                    const Typ& ret, const BranchSet& bs) {
  const auto required = required_heads(scrut_ctx, scrut_ty);
  std::vector<Head> seen;
  for (const auto& b : bs) {
    if (std::find(seen.begin(), seen.end(), b.head) != seen.end())
      fail(ErrorKind::DuplicateBranch,
           "duplicate branch for " + to_string(b.head));
    if (std::find(required.begin(), required.end(), b.head) == required.end())
      throw TypeError(TypingError{ErrorKind::UnexpectedBranch,
                                  "no " + to_string(b.head) +
                                      " pattern at type " + show(scrut_ty),
                                  std::nullopt, std::nullopt, {b.head}});
    seen.push_back(b.head);
  }
  std::vector<Head> missing;
  for (const auto& h : required)
    if (std::find(seen.begin(), seen.end(), h) == seen.end()) missing.push_back(h);
  if (!missing.empty()) {
    std::string list;
    for (const auto& h : missing) list += (list.empty() ? "" : ", ") + to_string(h);
    throw TypeError(TypingError{ErrorKind::NonCovering,
                                "match is missing branches: " + list,
                                std::nullopt, std::nullopt, missing});
  }
  for (const auto& b : bs) {
    if (b.head.kind == HeadKind::app && mentions_opaque(ret, b.opaque))
      fail(ErrorKind::BadAnnotation,
           "result type mentions the hidden argument type of an application "
           "pattern");
    GlobalCtx inner = psi;
    for (auto& g : pattern_bindings(b, scrut_ctx, scrut_ty)) inner.push_back(g);
    expect(ret, infer(inner, gamma, Layer::meta, b.body), "branch body");
  }
}

std::optional<Head> head_of(const Exp& core) {
  return std::visit(
      overloaded{
          [](const expr::LVar& x) -> std::optional<Head> {
            return Head{HeadKind::var, x.index};
          },
          [](const expr::Zero&) -> std::optional<Head> {
            return Head{HeadKind::zero};
          },
          [](const expr::Suc&) -> std::optional<Head> {
            return Head{HeadKind::suc};
          },
          [](const expr::Lam&) -> std::optional<Head> {
            return Head{HeadKind::lam};
          },
          [](const expr::App&) -> std::optional<Head> {
            return Head{HeadKind::app};
          },
          [](const expr::Rec&) -> std::optional<Head> {
            return Head{HeadKind::rec};
          },
          [](const auto&) -> std::optional<Head> { return std::nullopt; },
      },
      core->v);
}

const Branch* branch_lookup(const BranchSet& bs, const Exp& core) {
  auto h = head_of(core);
  if (!h) return nullptr;
  for (const auto& b : bs)
    if (b.head == *h) return &b;
  return nullptr;
}

}  // namespace lmtt
