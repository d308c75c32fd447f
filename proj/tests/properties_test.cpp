#include <gtest/gtest.h>

#include <functional>

#include "generators.hpp"
#include "lmtt/typing.hpp"
#include "properties.hpp"

using namespace lmtt;
using namespace lmtt::testkit;

namespace {

class Seeded : public ::testing::TestWithParam<std::uint64_t> {};

constexpr int kPerSeed = 60;

#define EXPECT_HOLDS(f)               \
  do {                                \
    auto failure_ = (f);              \
    ASSERT_FALSE(failure_) << *failure_; \
  } while (0)

}  // namespace

TEST_P(Seeded, GeneratedTermsAreWellTyped) {
  Gen gen(GetParam());
  for (int k = 0; k < kPerSeed; ++k) {
    EXPECT_HOLDS(well_typed(gen.meta_sample(), Layer::meta));
    EXPECT_HOLDS(well_typed(gen.core_sample(), Layer::code));
  }
}

TEST_P(Seeded, BetaInvariance) {
  Gen gen(GetParam());
  for (int k = 0; k < kPerSeed; ++k) EXPECT_HOLDS(beta_invariance(gen.meta_sample(), 40));
}

TEST_P(Seeded, Soundness) {
  Gen gen(GetParam());
  for (int k = 0; k < kPerSeed; ++k) EXPECT_HOLDS(soundness(gen.meta_sample()));
}

TEST_P(Seeded, AgreesWithReducer) {
  Gen gen(GetParam());
  for (int k = 0; k < kPerSeed; ++k) EXPECT_HOLDS(reducer_agreement(gen.meta_sample(), 20000));
}

TEST_P(Seeded, Lifting) {
  Gen gen(GetParam());
  for (int k = 0; k < kPerSeed; ++k) EXPECT_HOLDS(lifting(gen.core_sample()));
}

TEST_P(Seeded, Rigidity) {
  Gen gen(GetParam());
  for (int k = 0; k < kPerSeed; ++k) {
    auto a = gen.core_sample();
    EXPECT_HOLDS(rigidity(a, a));
    Sample b = a;
    b.exp = gen.term(a.psi, a.gamma, Layer::code, a.typ, 4);
    EXPECT_HOLDS(rigidity(a, b));
  }
}

TEST_P(Seeded, Naturality) {
  Gen gen(GetParam());
  for (int k = 0; k < kPerSeed; ++k) {
    auto s = gen.meta_sample();
    EXPECT_HOLDS(naturality(s, gen.weakening(s.psi, s.gamma)));
  }
}

TEST_P(Seeded, SubstitutionLaws) {
  Gen gen(GetParam());
  for (int k = 0; k < kPerSeed; ++k) EXPECT_HOLDS(substitution_laws(gen.meta_sample(), gen));
}

INSTANTIATE_TEST_SUITE_P(Seeds, Seeded, ::testing::Values(1u, 2u, 3u, 0xabcdefu));

TEST(Generators, CoverEveryConstruct) {
  Gen gen(11);
  bool seen_match = false, seen_letbox = false, seen_rec = false, seen_box = false;
  std::function<void(const Exp&)> visit = [&](const Exp& e) {
    std::visit(overloaded{
                   [&](const expr::Match& m) {
                     seen_match = true;
                     visit(m.scrut);
                     for (const auto& b : m.branches) visit(b.body);
                   },
                   [&](const expr::LetBox& l) {
                     seen_letbox = true;
                     visit(l.scrut);
                     visit(l.body);
                   },
                   [&](const expr::Rec& r) {
                     seen_rec = true;
                     visit(r.base);
                     visit(r.step);
                     visit(r.scrut);
                   },
                   [&](const expr::Box&) { seen_box = true; },
                   [&](const expr::Lam& l) { visit(l.body); },
                   [&](const expr::App& a) {
                     visit(a.fn);
                     visit(a.arg);
                   },
                   [&](const expr::Suc& s) { visit(s.pred); },
                   [](const auto&) {},
               },
               e->v);
  };
  for (int k = 0; k < 200; ++k) visit(gen.meta_sample().exp);
  EXPECT_TRUE(seen_match);
  EXPECT_TRUE(seen_letbox);
  EXPECT_TRUE(seen_rec);
  EXPECT_TRUE(seen_box);
}
