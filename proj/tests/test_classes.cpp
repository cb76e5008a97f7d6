#include <gtest/gtest.h>

#include <random>

#include "tk/classes.hpp"
#include "tk/enumerate.hpp"
#include "tk/error.hpp"
#include "tk/parse.hpp"
#include "tk/syntax.hpp"

using namespace tk;

namespace {

const Var x("x"), y("y"), u("u"), w("w");

HFSet C(std::uint64_t n) { return HFSet::from_code(n); }

bool has_clause(const Report& r, unsigned clause) {
  for (auto& v : r.violations)
    if (v.clause == clause) return true;
  return false;
}

Family random_restriction(const Family& fam, std::mt19937_64& rng) {
  std::vector<Formula> seeds;
  for (auto& f : fam)
    if (rng() % 40 == 0) seeds.push_back(f);
  return subformula_closure(seeds);
}

}  // namespace

TEST(Validate, InducedClassesPass) {
  Structure m = Structure::stage(3);
  Family fam = depth_family(3, {x, y});
  SatClass s = induced_sat(m, fam);
  EXPECT_TRUE(validate_class(s).ok());
  EXPECT_TRUE(validate_class(induced_truth(m, fam)).ok());
  EXPECT_GT(s.entries.size(), 10000u);
}

TEST(Validate, RemovedAtomIsWitnessed) {
  Structure m = Structure::stage(2);
  SatClass s = induced_sat(m, depth_family(2, {x, y}));
  Entry atom{mem(x, y), Assignment{{x, C(0)}, {y, C(1)}}};
  ASSERT_TRUE(s.entries.erase(atom));
  Report r = validate_class(s);
  ASSERT_FALSE(r.ok());
  bool found = false;
  for (auto& v : r.violations)
    if (v.clause == 2) {
      EXPECT_EQ(v.formula, atom.first);
      EXPECT_EQ(v.assignment, atom.second);
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(Validate, FamilyNotClosed) {
  Structure m = Structure::stage(2);
  SatClass s = induced_sat(m, Family{neg(mem(x, y))});
  Report r = validate_class(s);
  ASSERT_TRUE(has_clause(r, 1));
  EXPECT_EQ(r.violations.front().formula, neg(mem(x, y)));
  TruthClass t = induced_truth(m, Family{neg(eq(x, x))});
  EXPECT_TRUE(has_clause(validate_class(t), 1));
}

TEST(Validate, EntriesOutsideFamilyOrAssignment) {
  Structure m = Structure::stage(2);
  SatClass s = induced_sat(m, Family{eq(x, x)});
  s.entries.insert({mem(x, x), Assignment{{x, C(0)}}});
  s.entries.insert({eq(x, x), Assignment{{y, C(0)}}});
  s.entries.insert({eq(x, x), Assignment{{x, C(9)}}});
  Report r = validate_class(s);
  EXPECT_EQ(r.violations.size(), 3u);
  for (auto& v : r.violations) EXPECT_EQ(v.clause, 1u);
  TruthClass t = induced_truth(m, Family{eq(x, x)});
  t.sentences.insert(mem(C(0), C(1)));
  EXPECT_TRUE(has_clause(validate_class(t), 1));
}

TEST(Validate, PathologicalClassIsData) {
  // A class that declares the false sentence 0 in 0 true breaks the atomic
  // clause and nothing else about its shape.
  Structure m = Structure::stage(1);
  TruthClass t = induced_truth(m, 2, {x});
  t.sentences.insert(mem(C(0), C(0)));
  t.sentences.erase(neg(mem(C(0), C(0))));
  Report r = validate_class(t);
  ASSERT_TRUE(has_clause(r, 2));
  EXPECT_FALSE(has_clause(r, 1));
  EXPECT_EQ(r.violations.front().formula, mem(C(0), C(0)));
}

TEST(Validate, BudgetApplies) {
  Structure m = Structure::stage(3);
  SatClass s = induced_sat(m, depth_family(2, {x, y}));
  EXPECT_THROW(validate_class(s, 10), BudgetExceeded);
}

TEST(Extensional, Examples) {
  Structure m = Structure::stage(2);
  EXPECT_TRUE(is_extensional(induced_sat(m, depth_family(2, {x, y}))).empty());
  SatClass s{m, Family{mem(x, y), mem(u, w)}, {}};
  Assignment a{{x, C(0)}, {y, C(1)}};
  s.entries.insert({mem(x, y), a});
  auto bad = is_extensional(s);
  ASSERT_EQ(bad.size(), 1u);
  std::set<Formula, FormulaLess> pair{bad[0].first.first, bad[0].second.first};
  EXPECT_EQ(pair, (std::set<Formula, FormulaLess>{mem(x, y), mem(u, w)}));
  SatClass single{m, Family{mem(x, y)}, {}};
  single.entries.insert({mem(x, y), a});
  EXPECT_TRUE(is_extensional(single).empty());
}

TEST(Extensional, PositionwiseRenaming) {
  // (x in x, x=a) and (u in w, u=a, w=a) are related.
  Structure m = Structure::stage(2);
  SatClass s{m, Family{mem(x, x), mem(u, w)}, {}};
  s.entries.insert({mem(u, w), Assignment{{u, C(0)}, {w, C(0)}}});
  EXPECT_FALSE(is_extensional(s).empty());
}

TEST(Convert, RoundTripsOnInducedClasses) {
  for (unsigned n = 1; n <= 2; ++n) {
    Structure m = Structure::stage(n);
    Family fam = depth_family(3, {x, y});
    SatClass s = induced_sat(m, fam);
    TruthClass t = induced_truth(m, fam);
    EXPECT_EQ(convert(s).sentences, t.sentences);
    EXPECT_EQ(convert(convert(s)).entries, s.entries);
    EXPECT_EQ(convert(convert(t)).sentences, t.sentences);
  }
}

TEST(Convert, RoundTripsOnRestrictions) {
  Structure m = Structure::stage(2);
  Family fam = depth_family(3, {x, y});
  SatClass s = induced_sat(m, fam);
  TruthClass t = induced_truth(m, fam);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    Family sub = random_restriction(fam, rng);
    SatClass rs = restrict_class(s, sub);
    TruthClass rt = restrict_class(t, sub);
    ASSERT_TRUE(validate_class(rs).ok());
    EXPECT_EQ(convert(convert(rs)).entries, rs.entries);
    EXPECT_EQ(convert(convert(rt)).sentences, rt.sentences);
  }
}

TEST(Convert, EmptyAndInvalid) {
  Structure m = Structure::stage(2);
  SatClass empty{m, {}, {}};
  EXPECT_TRUE(convert(empty).sentences.empty());
  EXPECT_TRUE(convert(TruthClass{m, {}, {}}).entries.empty());
  SatClass s = induced_sat(m, depth_family(1, {x, y}));
  s.entries.erase(s.entries.begin());
  EXPECT_THROW(convert(s), Error);
}

TEST(Induced, StageOneDepthOne) {
  TruthClass t = induced_truth(Structure::stage(1), 1, {x, y});
  EXPECT_TRUE(t.contains(eq(C(0), C(0))));
  EXPECT_FALSE(t.contains(mem(C(0), C(0))));
  EXPECT_EQ(t.sentences.size(), 1u);
}

TEST(Mutation, EveryToggleIsDetected) {
  Structure m = Structure::stage(1);
  Family fam = depth_family(2, {x, y});
  std::size_t n = 0;
  for_each_toggle(induced_sat(m, fam), [&](const SatClass& c, const Entry& e) {
    EXPECT_FALSE(validate_class(c).ok()) << render(e.first) << " " << e.second.to_string();
    ++n;
  });
  for_each_toggle(induced_truth(m, fam), [&](const TruthClass& c, const Formula& s) {
    EXPECT_FALSE(validate_class(c).ok()) << render(s);
    ++n;
  });
  EXPECT_GT(n, 100u);
}

TEST(Pathology, Shape) {
  Formula f = eq(C(0), C(0));
  EXPECT_EQ(pathology_D(1, f), disj(f, f));
  EXPECT_EQ(pathology_D(2, f), disj(disj(f, f), disj(f, f)));
  EXPECT_THROW(pathology_D(0, f), Error);
  Formula g = parse("(ex x (all y (not (mem y x))))");
  for (unsigned k = 1; k <= 20; ++k) EXPECT_EQ(pathology_D(k, g).depth(), g.depth() + k);
}

TEST(Pathology, StandardModelHasNone) {
  Structure m = Structure::stage(2);
  for (auto& s : {parse("(ex x (mem x x))"), parse("(all x (ex y (mem x y)))"), parse("(ex x (eq x x))")})
    for (unsigned k = 1; k <= 16; ++k) EXPECT_EQ(sat(m, pathology_D(k, s), {}), sat(m, s, {}));
}

TEST(Diagonal, Examples) {
  Structure m = Structure::stage(4);
  Formula s1 = parse("(and (eq x x) (not (eq y y)))");
  Formula r1 = diagonal_formula(s1);
  auto w1 = diagonal_refute(m, s1, ackermann_coding(m, subformulas(r1)));
  EXPECT_FALSE(w1.s_rr);
  EXPECT_TRUE(w1.r_r);
  Formula s2 = eq(x, y);
  auto w2 = diagonal_refute(m, s2, ackermann_coding(m, {diagonal_formula(s2)}));
  EXPECT_EQ(w2.r_formula, neg(eq(x, x)));
  EXPECT_TRUE(w2.s_rr);
  EXPECT_FALSE(w2.r_r);
  EXPECT_THROW(diagonal_formula(mem(x, x)), Error);
  EXPECT_THROW(diagonal_refute(m, s2, [](const Formula&) { return HFSet::from_code(1000); }), Error);
}

TEST(Diagonal, AvoidsCapture) {
  Structure m = Structure::stage(2);
  Formula s = parse("(ex x (and (mem x y) (mem w x)))");
  Formula r = diagonal_formula(s);
  EXPECT_EQ(r.free_vars().size(), 1u);
  auto wit = diagonal_refute(m, s, ackermann_coding(m, {r}));
  EXPECT_NE(wit.s_rr, wit.r_r);
}

TEST(Diagonal, SweepOverStageTwo) {
  Structure m = Structure::stage(2);
  std::size_t n = 0;
  for (auto& s : depth_family(2, {x, y})) {
    if (s.free_vars().size() != 2) continue;
    Formula r = diagonal_formula(s);
    for (auto& a : m.labels()) {
      auto wit = diagonal_refute(m, s, [&](const Formula&) { return a; });
      EXPECT_NE(wit.s_rr, wit.r_r);
    }
    ++n;
  }
  EXPECT_GT(n, 20u);
}

TEST(Coding, InjectiveOnPool) {
  Structure m = Structure::stage(3);
  std::vector<Formula> pool{eq(x, x), mem(x, x), neg(eq(x, x))};
  Coding c = ackermann_coding(m, pool);
  EXPECT_NE(c(pool[0]), c(pool[1]));
  EXPECT_NE(c(pool[1]), c(pool[2]));
  EXPECT_THROW(c(eq(y, y)), Error);
  std::vector<Formula> big;
  for (auto& f : depth_family(1, {x, y})) big.push_back(f);
  EXPECT_THROW(ackermann_coding(Structure::stage(2), big), Error);
}
