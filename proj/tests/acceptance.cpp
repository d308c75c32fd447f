// Acceptance suite: one PASS/FAIL line per criterion. Counts, seeds and step
// bounds are fixed here; the process fails if any criterion fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "lmtt/elaborate.hpp"
#include "lmtt/nbe.hpp"
#include "lmtt/printer.hpp"
#include "lmtt/typing.hpp"
#include "lmtt/wellformed.hpp"
#include "lmtt/oracle.hpp"
#include "properties.hpp"

using namespace lmtt;
using testkit::Failure;

namespace {

constexpr std::size_t kBetaTerms = 500;
constexpr std::size_t kBetaMaxSteps = 60;
constexpr std::size_t kLiftTerms = 200;
constexpr std::size_t kRigidPairs = 200;
constexpr std::size_t kMinRigidEqual = 40;
constexpr std::size_t kMinRigidDistinct = 40;
constexpr std::size_t kWkPairs = 200;
constexpr std::size_t kSubstPairs = 200;
constexpr int kMetaDepth = 6;
constexpr int kCoreDepth = 5;

struct Result {
  bool ok;
  std::string detail;
};

Result pass(std::string detail) { return {true, std::move(detail)}; }
Result fail(std::string detail) { return {false, std::move(detail)}; }

Typ box0(Typ t) { return cbox({}, std::move(t)); }

std::string read_corpus(const std::string& name) {
  std::ifstream in(std::string(LMTT_CORPUS_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing corpus file " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const CheckedDef& def_named(const std::vector<CheckedDef>& defs, const std::string& n) {
  for (const auto& d : defs)
    if (d.name == n) return d;
  throw std::runtime_error("no definition " + n);
}

// add = \a b. rec[Nat] b (x y. suc y) a, built directly.
Exp add_term() {
  return lam("a", nat(), lam("b", nat(), rec(nat(), lvar(0), suc(lvar(0)), lvar(1))));
}

Result axiom_k() {
  Typ a = nat();
  Typ b = arrow(nat(), nat());
  Typ want = arrows({box0(arrow(a, b)), box0(a)}, box0(b));
  auto e = read_exp(
      "\\(f:[|-Nat->(Nat->Nat)]).\\(x:[|-Nat]). letbox u=f in letbox u'=x in "
      "box(. u^[] u'^[])");
  if (!(e.typ == want)) return fail("got " + print(e.typ));
  return pass(print(want));
}

Result axiom_t() {
  Typ want = arrow(box0(nat()), nat());
  auto t = read_exp("\\(x:[|-Nat]). letbox u=x in u^[]");
  if (!(t.typ == want)) return fail("got " + print(t.typ));
  Exp applied = app(t.exp, box({}, suc(zero())));
  Exp nf = nbe({}, {}, applied, nat()).exp();
  if (!alpha_eq(nf, suc(zero()))) return fail("nbe gives " + print(nf));
  return pass(print(want) + ", applied to box(. suc zero) gives suc zero");
}

Result box_in_box() {
  if (wf_typ(Layer::meta, box0(box0(nat())))) return fail("[|- [|- Nat]] accepted");
  if (!wf_typ(Layer::meta, box0(nat()))) return fail("[|- Nat] rejected");
  return pass("[|- [|- Nat]] is not a valid type");
}

Result composition() {
  auto defs = resolve(parse_program(
      "def add : Nat -> Nat -> Nat := \\(a:Nat)(b:Nat). rec [Nat] b (x y. suc y) a;"
      "def comp : [|-Nat] -> [|-Nat] -> [|-Nat] :="
      "  \\(a:[|-Nat])(b:[|-Nat]). letbox u = a in letbox v = b in box(. add u v);"
      "def c : [|-Nat] := comp (box(. add 3 2)) (box(. add 1 4));"));
  const auto& c = def_named(defs, "c");
  Exp nf = nbe({}, {}, c.body, c.typ).exp();
  Exp add = add_term();
  Exp want = box({}, app(add, {app(add, {numeral(3), numeral(2)}),
                               app(add, {numeral(1), numeral(4)})}));
  if (!alpha_eq(nf, want)) return fail("nbe gives " + print(nf));
  if (alpha_eq(nf, box({}, numeral(10)))) return fail("result is box(. 10)");
  return pass("box(. add (add 3 2) (add 1 4)), not box(. 10)");
}

Result confluence() {
  const char* branches = "{ ?a ?b => zero | _ => suc zero }";
  auto closed = read_exp(std::string("letbox u = box(f:Nat->Nat, y:Nat. f y) in "
                                     "match box(f:Nat->Nat, y:Nat. u^[f,y]) ") +
                         branches);
  Exp nf = nbe({}, {}, closed.exp, closed.typ).exp();
  if (!alpha_eq(nf, zero())) return fail("closed program gives " + print(nf));

  GlobalCtx psi{{"u", {{"f", arrow(nat(), nat())}, {"y", nat()}}, nat()}};
  auto open = read_exp(std::string("match box(f:Nat->Nat, y:Nat. u^[f,y]) ") + branches,
                       psi);
  Exp stuck = nbe(psi, {}, open.exp, open.typ).exp();
  const auto* m = as<expr::Match>(stuck);
  const auto* b = m ? as<expr::Box>(m->scrut) : nullptr;
  if (!b || !as<expr::GVar>(b->body) || !classify_ne(stuck))
    return fail("open program gives " + print(stuck, psi));
  return pass("zero; with u free the match on box(f, y. u^[f, y]) is neutral");
}

Result match_rules() {
  auto defs = resolve(parse_program(read_corpus("match_beta.lmtt")));
  std::vector<std::string> rules{"var_rule", "zero_rule", "suc_rule",
                                 "lam_rule", "app_rule",  "rec_rule"};
  for (const auto& r : rules) {
    const auto& lhs = def_named(defs, r);
    const auto& rhs = def_named(defs, r + "_reduced");
    if (!(lhs.typ == rhs.typ)) return fail(r + ": types differ");
    if (!equiv({}, {}, Layer::meta, lhs.body, rhs.body, lhs.typ))
      return fail(r + " is not equivalent to its reduct");
  }
  return pass("6 rules agree with their hand reducts");
}

Result recursion() {
  Exp add = add_term();
  Exp four = nbe({}, {}, app(add, {numeral(2), numeral(2)}), nat()).exp();
  if (!alpha_eq(four, numeral(4))) return fail("2 + 2 gives " + print(four));
  Exp open = lam("n", nat(), app(add, {lvar(0), numeral(2)}));
  Exp nf = nbe({}, {}, open, arrow(nat(), nat())).exp();
  Exp want = lam("n", nat(), rec(nat(), numeral(2), suc(lvar(0)), lvar(0)));
  if (!alpha_eq(nf, want)) return fail("n + 2 gives " + print(nf));
  const auto* body = as<expr::Lam>(nf);
  if (!body || !classify_ne(body->body)) return fail("n + 2 is not neutral");
  return pass("2 + 2 = 4; n + 2 is rec [Nat] 2 (x y. suc y) n");
}

Result beta_invariance() {
  testkit::Gen gen(0x5eed0001);
  std::size_t steps = 0;
  for (std::size_t k = 0; k < kBetaTerms; ++k) {
    auto s = gen.meta_sample(kMetaDepth);
    if (auto f = testkit::well_typed(s, Layer::meta)) return fail(*f);
    if (auto f = testkit::beta_invariance(s, kBetaMaxSteps)) return fail(*f);
    Exp cur = s.exp;
    for (std::size_t n = 0; n < kBetaMaxSteps; ++n) {
      auto next = step(s.psi, s.gamma, cur);
      if (!next) break;
      cur = *next;
      ++steps;
    }
  }
  return pass(std::to_string(kBetaTerms) + " terms, " + std::to_string(steps) +
              " steps, 0 failures");
}

Result soundness() {
  testkit::Gen gen(0x5eed0001);
  for (std::size_t k = 0; k < kBetaTerms; ++k) {
    auto s = gen.meta_sample(kMetaDepth);
    if (auto f = testkit::soundness(s)) return fail(*f);
  }
  return pass(std::to_string(kBetaTerms) + " terms, 0 failures");
}

Result lifting() {
  testkit::Gen gen(0x5eed0002);
  for (std::size_t k = 0; k < kLiftTerms; ++k) {
    auto s = gen.core_sample(kCoreDepth);
    if (auto f = testkit::lifting(s)) return fail(*f);
  }
  return pass(std::to_string(kLiftTerms) + " terms, 0 failures");
}

Result rigidity() {
  testkit::Gen gen(0x5eed0003);
  std::size_t equal = 0, distinct = 0;
  for (std::size_t k = 0; k < kRigidPairs; ++k) {
    auto a = gen.core_sample(kCoreDepth);
    testkit::Sample b = a;
    switch (k % 3) {
      case 0: {
        // Same term rebuilt from the same seed.
        testkit::Gen twin(k);
        testkit::Gen again(k);
        a = twin.core_sample(kCoreDepth);
        b = again.core_sample(kCoreDepth);
        break;
      }
      case 1:
        // A layer-1 redex around the same term: equal after evaluation, but
        // different code.
        b.exp = app(lam("x", a.typ, lvar(0)), a.exp);
        break;
      default:
        b = gen.core_sample(kCoreDepth);
        b.psi = a.psi;
        b.gamma = a.gamma;
        b.typ = a.typ;
        b.exp = gen.term(a.psi, a.gamma, Layer::code, a.typ, kCoreDepth);
        break;
    }
    if (auto f = testkit::well_typed(b, Layer::code)) return fail(*f);
    if (auto f = testkit::rigidity(a, b)) return fail(*f);
    (alpha_eq(a.exp, b.exp) ? equal : distinct) += 1;
  }
  if (equal < kMinRigidEqual || distinct < kMinRigidDistinct)
    return fail("too few equal (" + std::to_string(equal) + ") or distinct (" +
                std::to_string(distinct) + ") pairs");
  return pass(std::to_string(kRigidPairs) + " pairs (" + std::to_string(equal) +
              " equal, " + std::to_string(distinct) + " distinct), 0 failures");
}

Result naturality() {
  testkit::Gen gen(0x5eed0004);
  for (std::size_t k = 0; k < kWkPairs; ++k) {
    auto s = gen.meta_sample(kMetaDepth);
    auto w = gen.weakening(s.psi, s.gamma);
    if (auto f = testkit::naturality(s, w)) return fail(*f);
  }
  return pass(std::to_string(kWkPairs) + " pairs, 0 failures");
}

Result substitution() {
  testkit::Gen gen(0x5eed0005);
  for (std::size_t k = 0; k < kSubstPairs; ++k) {
    auto s = gen.meta_sample(kMetaDepth);
    if (auto f = testkit::substitution_laws(s, gen)) return fail(*f);
  }
  return pass(std::to_string(kSubstPairs) + " terms with local and global substitutions, 0 failures");
}

Result covering() {
  try {
    read_exp("\\(c:[|-Nat]). match c { zero => 0 | suc ?p => 1 | ?f ?a => 2 }");
  } catch (const SourceTypeError& e) {
    const auto& err = e.error();
    if (err.kind != ErrorKind::NonCovering) return fail(std::string("got ") + e.what());
    if (err.missing != std::vector<Head>{Head{HeadKind::rec}})
      return fail("missing heads reported wrongly: " + std::string(e.what()));
    return pass("NonCovering([rec])");
  }
  return fail("match without a rec branch accepted");
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"axiom K type", axiom_k},
      {"axiom T type and evaluation", axiom_t},
      {"code of code rejected", box_in_box},
      {"code composition stays code", composition},
      {"matching on spliced code", confluence},
      {"match reduction rules", match_rules},
      {"recursion", recursion},
      {"beta invariance", beta_invariance},
      {"normal form soundness", soundness},
      {"lifting", lifting},
      {"layer-0 rigidity", rigidity},
      {"weakening naturality", naturality},
      {"substitution laws", substitution},
      {"covering enforcement", covering},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r = fail(std::string("exception: ") + e.what());
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    if (!r.ok) ++failed;
    std::cout << (r.ok ? "PASS" : "FAIL") << " [" << (n < 10 ? " " : "") << n
              << "] " << name << ": " << r.detail << " (" << ms << " ms)\n";
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
