#include <gtest/gtest.h>

#include "lmtt/substitution.hpp"

using namespace lmtt;

namespace {

Typ n2n() { return arrow(nat(), nat()); }

#define EXPECT_ALPHA(a, b) EXPECT_TRUE(alpha_eq((a), (b))) << (a) << "  vs  " << (b)

}  // namespace

TEST(Weakening, Renaming) {
  // Larger context a b c d, smaller a c: bits 1 0 1 0.
  LWk w = LWk::from_bits({true, false, true, false});
  EXPECT_EQ(w.dom_size(), 4u);
  EXPECT_EQ(w.cod_size(), 2u);
  EXPECT_EQ(w.rename(0), 1u);  // c
  EXPECT_EQ(w.rename(1), 3u);  // a
  EXPECT_FALSE(w.is_identity());
  EXPECT_TRUE(LWk::identity(3).is_identity());
  EXPECT_EQ(LWk::shift(2, 1).rename(0), 1u);
  EXPECT_EQ(w.keep().rename(0), 0u);
  EXPECT_EQ(w.keep().rename(1), 2u);
  EXPECT_EQ(w.drop().rename(0), 2u);
}

TEST(Weakening, Composition) {
  LWk first = LWk::from_bits({true, false, true});        // a c  ->  a b c
  LWk second = LWk::from_bits({false, true, true, true});  // a b c  ->  z a b c
  LWk both = wk_compose(first, second);
  EXPECT_EQ(both, LWk::from_bits({false, true, false, true}));
  for (Index i = 0; i < 2; ++i) EXPECT_EQ(both.rename(i), second.rename(first.rename(i)));
}

TEST(Weakening, ActsOnFreeVariablesOnly) {
  LWk w = LWk::shift(1, 1);  // Γ = n  to  Γ' = n, m
  Exp e = lam("x", nat(), app(lvar(1), lvar(0)));
  EXPECT_ALPHA(wk_apply(e, w), lam("x", nat(), app(lvar(2), lvar(0))));
  // Box bodies see no outer locals, so local weakening leaves them alone.
  Exp b = box({{"x", nat()}}, lvar(0));
  EXPECT_ALPHA(wk_apply(b, w), b);
}

TEST(Weakening, GlobalWeakeningReachesCode) {
  GWk w = GWk::shift(1, 1);
  Exp e = box({{"x", nat()}}, gvar(0, {{lvar(0)}}));
  EXPECT_ALPHA(wk_apply(e, w), box({{"x", nat()}}, gvar(1, {{lvar(0)}})));
  // Under a letbox the bound global is kept.
  Exp l = letbox("u", {}, nat(), nat(), lvar(0), app(gvar(1), gvar(0)));
  EXPECT_ALPHA(wk_apply(l, w), letbox("u", {}, nat(), nat(), lvar(0), app(gvar(2), gvar(0))));
}

TEST(Shift, FreeVariables) {
  Exp e = lam("x", nat(), app(app(lvar(0), lvar(1)), gvar(0)));
  EXPECT_ALPHA(shift(e, 2, 1), lam("x", nat(), app(app(lvar(0), lvar(3)), gvar(1))));
}

TEST(LocalSubst, Examples) {
  // (λx. y x)[suc z / y] with z free in the target.
  LSubst d{{suc(lvar(0))}};
  Exp e = lam("x", nat(), app(lvar(1), lvar(0)));
  EXPECT_ALPHA(lsubst_apply(e, d), lam("x", nat(), app(suc(lvar(1)), lvar(0))));

  // rec binds two locals.
  Exp r = rec(nat(), lvar(0), app(lvar(2), lvar(0)), lvar(0));
  LSubst d2{{lvar(1)}};
  EXPECT_ALPHA(lsubst_apply(r, d2), rec(nat(), lvar(1), app(lvar(3), lvar(0)), lvar(1)));

  // Substitutions in a global variable's closure are composed.
  Exp g = gvar(0, {{lvar(0), zero()}});
  EXPECT_ALPHA(lsubst_apply(g, LSubst{{numeral(5)}}), gvar(0, {{numeral(5), zero()}}));
}

TEST(LocalSubst, Composition) {
  // d1 : (a, b) with terms over (c);  d2 : (c) with terms over (e).
  LSubst d1{{suc(lvar(0)), zero()}};
  LSubst d2{{numeral(2)}};
  LSubst both = lsubst_compose(d1, d2);
  ASSERT_EQ(both.terms.size(), 2u);
  EXPECT_ALPHA(both.terms[0], numeral(3));
  EXPECT_ALPHA(both.terms[1], zero());
  Exp e = app(lvar(1), lvar(0));
  EXPECT_ALPHA(lsubst_apply(lsubst_apply(e, d1), d2), lsubst_apply(e, both));
}

TEST(GlobalSubst, SplicesCode) {
  // u : (x:Nat ⊢ Nat) := suc x in box(y:Nat. (\z. u^[y]) u^[zero]).
  GSubst s{{suc(lvar(0))}};
  Exp e = box({{"y", nat()}}, app(lam("z", nat(), gvar(0, {{lvar(1)}})), gvar(0, {{zero()}})));
  Exp want = box({{"y", nat()}}, app(lam("z", nat(), suc(lvar(1))), suc(zero())));
  EXPECT_ALPHA(gsubst_apply(e, s), want);
}

TEST(GlobalSubst, UnderGlobalBinders) {
  // σ = (v := w^[] ) over Ψ = v, with the target Ψ' = w.
  GSubst s{{gvar(0)}};
  // letbox u = c in box(. v^[] + u^[]) : v is index 1 under the letbox.
  Exp e = letbox("u", {}, nat(), nat(), lvar(0), app(gvar(1), gvar(0)));
  Exp want = letbox("u", {}, nat(), nat(), lvar(0), app(gvar(1), gvar(0)));
  EXPECT_ALPHA(gsubst_apply(e, s), want);

  // A substituted term mentioning target globals is shifted past binders.
  GSubst s2{{suc(gvar(0))}};
  Exp e2 = letbox("u", {}, nat(), nat(), lvar(0), gvar(1));
  EXPECT_ALPHA(gsubst_apply(e2, s2), letbox("u", {}, nat(), nat(), lvar(0), suc(gvar(1))));
}

TEST(GlobalSubst, CompositionAndExtension) {
  // Ψ = u : (⊢ Nat);  s1 : Ψ => (v : (x:Nat ⊢ Nat)),  s2 : (v) => ().
  GSubst s1{{gvar(0, {{numeral(1)}})}};
  GSubst s2{{suc(lvar(0))}};
  GSubst both = gsubst_compose(s1, s2);
  ASSERT_EQ(both.terms.size(), 1u);
  EXPECT_ALPHA(both.terms[0], numeral(2));
  Exp e = box({}, gvar(0));
  EXPECT_ALPHA(gsubst_apply(gsubst_apply(e, s1), s2), gsubst_apply(e, both));

  GSubst ext = gsubst_extend(s2, zero());
  ASSERT_EQ(ext.terms.size(), 2u);
  EXPECT_ALPHA(ext.terms[1], zero());
}

TEST(GlobalSubst, ReachesBranches) {
  GSubst s{{numeral(4)}};
  Branch b = suc_branch("p", box({}, app(lam("x", nat(), gvar(0)), gvar(1))));
  Branch got = gsubst_apply(b, s);
  EXPECT_ALPHA(got.body, box({}, app(lam("x", nat(), gvar(0)), numeral(4))));
}

TEST(Restrict, KeepsSelectedEntries) {
  LocalCtx g{{"a", nat()}, {"b", n2n()}, {"c", nat()}};
  auto r = wk_restrict(LWk::from_bits({true, false, true}), g);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].hint, "a");
  EXPECT_EQ(r[1].hint, "c");
}

TEST(SubstOpaque, ReplacesAnnotationsUntilRebound) {
  Exp e = lam("x", opaque(1), lvar(0));
  EXPECT_ALPHA(subst_opaque(e, 1, nat()), lam("x", nat(), lvar(0)));
  EXPECT_ALPHA(subst_opaque(e, 2, nat()), e);
  EXPECT_EQ(subst_opaque(cbox({{"x", opaque(1)}}, opaque(1)), 1, n2n()),
            cbox({{"x", n2n()}}, n2n()));

  Exp inner = lam("x", opaque(1), zero());
  Exp m = match({}, nat(), nat(), box({}, zero()),
                {app_branch("f", "a", 1, app(inner, gvar(0)))});
  EXPECT_ALPHA(subst_opaque(m, 1, nat()), m);
}
