#include <gtest/gtest.h>

#include "lmtt/syntax.hpp"

using namespace lmtt;

namespace {

Typ n2n() { return arrow(nat(), nat()); }

}  // namespace

TEST(Types, StructuralEquality) {
  EXPECT_EQ(arrow(nat(), n2n()), arrows({nat(), nat()}, nat()));
  EXPECT_FALSE(arrow(n2n(), nat()) == arrows({nat(), nat()}, nat()));
  EXPECT_EQ(cbox({{"x", nat()}}, nat()), cbox({{"y", nat()}}, nat()));
  EXPECT_FALSE(cbox({{"x", nat()}}, nat()) == cbox({}, nat()));
  EXPECT_FALSE(opaque(1) == opaque(2));
  EXPECT_FALSE(opaque(1) == nat());
}

TEST(Types, MentionsOpaque) {
  EXPECT_TRUE(mentions_opaque(arrow(opaque(3), nat()), 3));
  EXPECT_FALSE(mentions_opaque(arrow(opaque(3), nat()), 4));
  EXPECT_TRUE(mentions_opaque(cbox({{"x", opaque(3)}}, nat()), 3));
  EXPECT_TRUE(mentions_opaque(LocalCtx{{"x", nat()}, {"y", opaque(5)}}, 5));
}

TEST(Terms, Numeral) {
  EXPECT_TRUE(alpha_eq(numeral(0), zero()));
  EXPECT_TRUE(alpha_eq(numeral(3), suc(suc(suc(zero())))));
  EXPECT_FALSE(alpha_eq(numeral(3), numeral(2)));
}

TEST(Terms, AlphaEqIgnoresHints) {
  Exp a = lam("x", nat(), suc(lvar(0)));
  Exp b = lam("y", nat(), suc(lvar(0)));
  EXPECT_TRUE(alpha_eq(a, b));
  EXPECT_FALSE(alpha_eq(a, lam("x", n2n(), suc(lvar(0)))));
  EXPECT_TRUE(alpha_eq(box({{"x", nat()}}, lvar(0)), box({{"z", nat()}}, lvar(0))));
  EXPECT_FALSE(alpha_eq(lvar(0), lvar(1)));
  EXPECT_FALSE(alpha_eq(gvar(0, {{zero()}}), gvar(0, {{suc(zero())}})));
}

TEST(Terms, AlphaEqTreatsOpaqueIdsAsBound) {
  auto with_id = [](std::uint32_t id) {
    Branch b = app_branch("f", "a", id, zero());
    return match({}, nat(), nat(), box({}, zero()),
                 {zero_branch(zero()), suc_branch("p", zero()),
                  rec_branch("b", "x", "y", "s", "n", zero()), b});
  };
  EXPECT_TRUE(alpha_eq(with_id(7), with_id(8)));

  // A body mentioning the bound id compares equal only under the renaming.
  auto annotated = [](std::uint32_t bound, std::uint32_t used) {
    Exp body = app(lam("x", opaque(used), zero()), zero());
    return match({}, nat(), nat(), box({}, zero()),
                 {app_branch("f", "a", bound, body)});
  };
  EXPECT_TRUE(alpha_eq(annotated(1, 1), annotated(2, 2)));
  EXPECT_FALSE(alpha_eq(annotated(1, 1), annotated(2, 1)));
}

TEST(Terms, Identities) {
  LSubst id = lsubst_identity(3);
  ASSERT_EQ(id.terms.size(), 3u);
  EXPECT_TRUE(alpha_eq(id.terms[0], lvar(2)));
  EXPECT_TRUE(alpha_eq(id.terms[2], lvar(0)));

  GlobalCtx psi{{"u", {{"x", nat()}, {"y", nat()}}, nat()}, {"v", {}, nat()}};
  GSubst gid = gsubst_identity(psi);
  ASSERT_EQ(gid.terms.size(), 2u);
  EXPECT_TRUE(alpha_eq(gid.terms[0], gvar(1, lsubst_identity(2))));
  EXPECT_TRUE(alpha_eq(gid.terms[1], gvar(0)));
}

TEST(Terms, BinderCounts) {
  EXPECT_EQ(binder_count(HeadKind::zero), 0u);
  EXPECT_EQ(binder_count(HeadKind::var), 0u);
  EXPECT_EQ(binder_count(HeadKind::suc), 1u);
  EXPECT_EQ(binder_count(HeadKind::lam), 1u);
  EXPECT_EQ(binder_count(HeadKind::app), 2u);
  EXPECT_EQ(binder_count(HeadKind::rec), 3u);
}

TEST(Terms, IsCore) {
  EXPECT_TRUE(is_core(lam("x", nat(), app(gvar(0, {{lvar(0)}}), lvar(0)))));
  EXPECT_TRUE(is_core(rec(nat(), zero(), suc(lvar(0)), numeral(2))));
  EXPECT_FALSE(is_core(box({}, zero())));
  EXPECT_FALSE(is_core(lam("x", nat(), box({}, zero()))));
  EXPECT_FALSE(is_core(letbox("u", {}, nat(), nat(), lvar(0), gvar(0))));
}

TEST(NormalForms, Classification) {
  Exp redex = app(lam("x", nat(), lvar(0)), zero());
  EXPECT_FALSE(classify_nf(redex));
  EXPECT_FALSE(classify_ne(redex));
  // Code is normal whatever it contains.
  EXPECT_TRUE(classify_nf(box({}, redex)));
  EXPECT_FALSE(classify_ne(box({}, redex)));

  EXPECT_TRUE(classify_ne(lvar(0)));
  EXPECT_TRUE(classify_ne(app(lvar(0), suc(zero()))));
  EXPECT_FALSE(classify_ne(app(lvar(0), redex)));
  EXPECT_TRUE(classify_nf(lam("x", nat(), suc(lvar(0)))));
  EXPECT_TRUE(classify_ne(gvar(0, {{zero()}})));
  EXPECT_FALSE(classify_ne(gvar(0, {{redex}})));

  EXPECT_TRUE(classify_ne(rec(nat(), zero(), suc(lvar(0)), lvar(0))));
  EXPECT_FALSE(classify_nf(rec(nat(), zero(), suc(lvar(0)), numeral(2))));

  EXPECT_TRUE(classify_ne(letbox("u", {}, nat(), nat(), lvar(0), gvar(0))));
  EXPECT_FALSE(classify_nf(letbox("u", {}, nat(), nat(), box({}, zero()), gvar(0))));
}

TEST(NormalForms, MatchOnCode) {
  BranchSet bs{zero_branch(zero()), suc_branch("p", zero()),
               rec_branch("b", "x", "y", "s", "n", zero()),
               app_branch("f", "a", 1, zero())};
  // A global variable under box blocks matching.
  EXPECT_TRUE(classify_ne(match({}, nat(), nat(), box({}, gvar(0)), bs)));
  // Known code is a redex.
  EXPECT_FALSE(classify_nf(match({}, nat(), nat(), box({}, zero()), bs)));
  EXPECT_FALSE(classify_nf(match({}, nat(), nat(), box({}, suc(gvar(0))), bs)));
  // A neutral scrutinee blocks too.
  EXPECT_TRUE(classify_ne(match({}, nat(), nat(), lvar(0), bs)));
  // Branch bodies must be normal.
  BranchSet bad = bs;
  bad[0].body = app(lam("x", nat(), lvar(0)), zero());
  EXPECT_FALSE(classify_nf(match({}, nat(), nat(), lvar(0), bad)));
}

TEST(Heads, Printing) {
  EXPECT_EQ(to_string(Head{HeadKind::rec}), "rec");
  EXPECT_EQ(to_string(Head{HeadKind::var, 2}), "var #2");
  EXPECT_LT(Head{HeadKind::zero}, Head{HeadKind::suc});
}
