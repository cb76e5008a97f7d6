#include <gtest/gtest.h>

#include <random>

#include "support/oracle.hpp"
#include "tk/enumerate.hpp"
#include "tk/error.hpp"
#include "tk/hierarchy.hpp"
#include "tk/parse.hpp"

using namespace tk;

namespace {

const Var x("x"), y("y");

HFSet C(std::uint64_t n) { return HFSet::from_code(n); }

std::vector<Formula> sentences(const Structure& m, std::vector<Var> vars, unsigned depth) {
  return closures(m, FormulaPool(PoolSpec{std::move(vars)}, depth).up_to(depth));
}

}  // namespace

TEST(TrueK, Examples) {
  Structure m = Structure::stage(3);
  EXPECT_TRUE(true_k(m, 1, mem(C(0), C(1))));
  EXPECT_FALSE(true_k(m, 1, mem(C(1), C(0))));
  EXPECT_THROW(true_k(m, 1, neg(eq(C(0), C(0)))), Error);
  EXPECT_FALSE(true_k(m, 2, neg(eq(C(0), C(0)))));
  EXPECT_THROW(true_k(m, 3, eq(C(0), C(16))), Error);
  EXPECT_THROW(true_k(m, 3, eq(x, C(0))), Error);
  EXPECT_THROW(true_k(m, 3, parse("(pred P #0)")), Error);
}

TEST(TrueK, AgreesWithSatAndOracleOverStageTwo) {
  Structure m = Structure::stage(2);
  oracle::Model om = oracle::standard(2);
  for (auto& s : sentences(m, {x, y}, 3))
    for (unsigned k = s.depth(); k <= 4; ++k) {
      bool expect = oracle::sat(om, s, {});
      ASSERT_EQ(true_k(m, k, s), expect) << render(s) << " k=" << k;
      ASSERT_EQ(sat(m, s, {}), expect);
    }
}

TEST(TrueK, MonotoneInK) {
  Structure m = Structure::stage(3);
  auto ss = sentences(m, {x, y}, 3);
  for (unsigned k = 1; k <= 3; ++k)
    for (auto& s : ss)
      if (s.depth() <= k) ASSERT_EQ(true_k(m, k, s), true_k(m, k + 1, s)) << render(s);
}

TEST(TrueK, SigmaFilter) {
  Structure m = Structure::stage(3);
  EXPECT_TRUE(true_sigma(m, 1, parse("(ex x (mem #0 x))")));
  EXPECT_TRUE(true_sigma(m, 0, parse("(all-in x #3 (not (eq x #3)))")));
  Formula pi2 = parse("(all x (ex y (mem x y)))");
  EXPECT_THROW(true_sigma(m, 1, pi2), Error);
  EXPECT_FALSE(true_sigma(m, 2, pi2));
}

TEST(DepthFamily, MatchesAnalyze) {
  FormulaPool pool(PoolSpec{{x, y}}, 3);
  for (auto& f : pool.up_to(3))
    for (unsigned k = 0; k <= 4; ++k) {
      EXPECT_EQ(DepthFamily{k}.contains(f), analyze(f).depth <= k);
      if (DepthFamily{k}.contains(f))
        for (auto& g : f.immediate_subformulas()) EXPECT_TRUE(DepthFamily{k}.contains(g));
    }
  EXPECT_FALSE(DepthFamily{0}.contains(eq(x, x)));
}

TEST(Materializer, TrueOneText) {
  EXPECT_EQ(materialize_true(1).to_string(),
            "(ex y1 (ex z2 (or (and (code-eq phi0 y1 z2) (eq y1 z2)) (and (code-mem phi0 y1 z2) (mem y1 z2)))))");
  EXPECT_GT(materialize_true(3).size(), materialize_true(2).size());
  EXPECT_THROW(materialize_true(4), Error);
}

TEST(Materializer, CrossEvaluatesWithInterpreter) {
  Structure m = Structure::stage(2);
  auto ss = sentences(m, {x, y}, 2);
  for (unsigned k = 1; k <= 2; ++k) {
    MetaFormula f = materialize_true(k);
    for (auto& s : ss)
      if (s.depth() <= k) ASSERT_EQ(eval_materialized(m, f, s), true_k(m, k, s)) << render(s);
  }
  MetaFormula f3 = materialize_true(3);
  Structure m1 = Structure::stage(1);
  for (auto& s : sentences(m1, {x}, 3)) ASSERT_EQ(eval_materialized(m1, f3, s), true_k(m1, 3, s)) << render(s);
}

TEST(Mostowski, AgreesWithSat) {
  Structure m = Structure::stage(2);
  for (auto& s : sentences(m, {x, y}, 3)) {
    auto r = mostowski_probe(m, s);
    ASSERT_EQ(r.value, sat(m, s, {})) << render(s);
    EXPECT_EQ(r.p, s.depth());
  }
  EXPECT_FALSE(mostowski_truth(Structure::stage(3), mem(C(0), C(0))));
  EXPECT_EQ(mostowski_probe(Structure::stage(3), parse("(not (mem #1 #0))")).p, 2u);
}

TEST(Piecewise, Examples) {
  Structure m = Structure::stage(3);
  auto t = diagram(m, 3, true);
  EXPECT_EQ(piecewise_code(t, HFSet()), HFSet());
  HFSet s = HFSet::of({eq(C(0), C(0)).code()});
  EXPECT_EQ(piecewise_code(t, s), s);
  EXPECT_THROW(piecewise_code(t, HFSet::of({eq(x, C(0)).code()})), Error);
  EXPECT_THROW(piecewise_code(t, HFSet::of({C(5)})), Error);
}

TEST(Piecewise, ComprehensionAndMonotonicity) {
  Structure m = Structure::stage(2);
  auto t = diagram(m, 3, true);
  auto pool = sentences(m, {x}, 3);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    std::vector<Formula> picked, more;
    for (auto& s : pool) {
      unsigned r = rng() % 8;
      if (r == 0) picked.push_back(s);
      if (r <= 1) more.push_back(s);
    }
    auto codes = [](const std::vector<Formula>& fs) {
      std::vector<HFSet> cs;
      for (auto& f : fs) cs.push_back(f.code());
      return HFSet::of(cs);
    };
    HFSet s = codes(picked), s2 = codes(more);
    HFSet r = piecewise_code(t, s);
    std::vector<Formula> expect;
    for (auto& f : picked)
      if (sat(m, f, {})) expect.push_back(f);
    EXPECT_EQ(r, codes(expect));
    EXPECT_TRUE(r.subset_of(s));
    EXPECT_TRUE(r.subset_of(piecewise_code(t, s2)));
  }
}
