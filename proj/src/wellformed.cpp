#include "lmtt/wellformed.hpp"

namespace lmtt {

bool wf_typ(Layer layer, const Typ& t) {
  return std::visit(
      overloaded{
          [](const type::Nat&) { return true; },
          [](const type::Opq&) { return true; },
          [&](const type::Arr& a) {
            return wf_typ(layer, a.dom) && wf_typ(layer, a.cod);
          },
          [&](const type::CBox& b) {
            return layer == Layer::meta && wf_ctx(Layer::code, b.ctx) &&
                   wf_typ(Layer::code, b.body);
          },
      },
      t->v);
}

bool wf_ctx(Layer layer, const LocalCtx& g) {
  for (const auto& e : g)
    if (!wf_typ(layer, e.typ)) return false;
  return true;
}

bool wf_gctx(const GlobalCtx& p) {
  for (const auto& e : p)
    if (!wf_ctx(Layer::code, e.ctx) || !wf_typ(Layer::code, e.typ)) return false;
  return true;
}

}  // namespace lmtt
