#include <gtest/gtest.h>

#include <functional>

#include "lmtt/wellformed.hpp"

using namespace lmtt;

namespace {

// Independent statement of validity: a type is core when it mentions no box;
// layer 1 allows boxes whose context and body are core.
bool mentions_box(const Typ& t);

bool ctx_mentions_box(const LocalCtx& g) {
  for (const auto& e : g)
    if (mentions_box(e.typ)) return true;
  return false;
}

bool mentions_box(const Typ& t) {
  if (as<type::CBox>(t)) return true;
  if (const auto* a = as<type::Arr>(t)) return mentions_box(a->dom) || mentions_box(a->cod);
  return false;
}

bool expected_valid(Layer layer, const Typ& t) {
  if (layer == Layer::code) return !mentions_box(t);
  if (const auto* b = as<type::CBox>(t))
    return !ctx_mentions_box(b->ctx) && !mentions_box(b->body);
  if (const auto* a = as<type::Arr>(t))
    return expected_valid(layer, a->dom) && expected_valid(layer, a->cod);
  return true;
}

// All types of size at most n built from Nat, Opq, ->, and boxes over
// contexts of at most one entry.
std::vector<Typ> enumerate(int n) {
  std::vector<std::vector<Typ>> by_size(n + 1);
  by_size[1] = {nat(), opaque(1)};
  for (int s = 2; s <= n; ++s) {
    for (int l = 1; l < s - 1 + 1 && l < s; ++l) {
      int r = s - 1 - l;
      if (r < 1) continue;
      for (const auto& a : by_size[l])
        for (const auto& b : by_size[r]) by_size[s].push_back(arrow(a, b));
    }
    for (const auto& b : by_size[s - 1]) by_size[s].push_back(cbox({}, b));
    for (int l = 1; l < s - 1; ++l) {
      int r = s - 1 - l;
      for (const auto& c : by_size[l])
        for (const auto& b : by_size[r]) by_size[s].push_back(cbox({{"x", c}}, b));
    }
  }
  std::vector<Typ> all;
  for (const auto& v : by_size) all.insert(all.end(), v.begin(), v.end());
  return all;
}

}  // namespace

TEST(WellFormed, Examples) {
  EXPECT_TRUE(wf_typ(Layer::code, nat()));
  EXPECT_TRUE(wf_typ(Layer::code, arrow(nat(), nat())));
  EXPECT_FALSE(wf_typ(Layer::code, cbox({}, nat())));
  EXPECT_TRUE(wf_typ(Layer::meta, cbox({}, nat())));
  EXPECT_TRUE(wf_typ(Layer::meta, cbox({{"x", arrow(nat(), nat())}}, nat())));
  EXPECT_FALSE(wf_typ(Layer::meta, cbox({}, cbox({}, nat()))));
  EXPECT_FALSE(wf_typ(Layer::meta, cbox({{"c", cbox({}, nat())}}, nat())));
  EXPECT_TRUE(wf_typ(Layer::meta, arrow(cbox({}, nat()), cbox({}, nat()))));
  EXPECT_TRUE(wf_typ(Layer::code, opaque(4)));
  EXPECT_TRUE(wf_typ(Layer::meta, cbox({{"x", opaque(4)}}, opaque(4))));
}

TEST(WellFormed, AgreesWithDefinitionOnAllSmallTypes) {
  auto all = enumerate(5);
  ASSERT_GT(all.size(), 100u);
  std::size_t valid_meta = 0, valid_code = 0;
  for (const auto& t : all) {
    for (Layer layer : {Layer::code, Layer::meta}) {
      bool want = expected_valid(layer, t);
      ASSERT_EQ(wf_typ(layer, t), want);
      if (want) ++(layer == Layer::meta ? valid_meta : valid_code);
    }
  }
  EXPECT_GT(valid_meta, valid_code);
}

TEST(WellFormed, ContextsAreValidEntrywise) {
  auto all = enumerate(4);
  for (const auto& a : all)
    for (const auto& b : all)
      for (Layer layer : {Layer::code, Layer::meta}) {
        LocalCtx g{{"a", a}, {"b", b}};
        ASSERT_EQ(wf_ctx(layer, g), expected_valid(layer, a) && expected_valid(layer, b));
      }
  EXPECT_TRUE(wf_ctx(Layer::code, {}));
}

TEST(WellFormed, GlobalContextsHoldCoreEntries) {
  EXPECT_TRUE(wf_gctx({}));
  EXPECT_TRUE(wf_gctx({{"u", {{"x", nat()}}, arrow(nat(), nat())}}));
  EXPECT_FALSE(wf_gctx({{"u", {}, cbox({}, nat())}}));
  EXPECT_FALSE(wf_gctx({{"u", {{"c", cbox({}, nat())}}, nat()}}));
}
