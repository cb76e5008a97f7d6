#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <set>

#include "support/oracle.hpp"
#include "tk/error.hpp"
#include "tk/structure.hpp"

using namespace tk;

namespace {

HFSet E() { return HFSet(); }
HFSet S(std::initializer_list<HFSet> xs) { return HFSet::of(xs); }

// code(x) straight from the definition.
BigNat ref_code(const HFSet& x) {
  BigNat r = 0;
  for (auto& y : x.elements()) r += BigNat(1) << static_cast<unsigned>(ref_code(y));
  return r;
}

}  // namespace

TEST(HFSet, EmptyAndSingletons) {
  EXPECT_TRUE(E().empty());
  EXPECT_EQ(E().rank(), 0u);
  EXPECT_EQ(*E().small_code(), 0u);
  EXPECT_EQ(*S({E()}).small_code(), 1u);
  EXPECT_EQ(*S({S({E()})}).small_code(), 2u);
  EXPECT_EQ(*S({E(), S({E()})}).small_code(), 3u);
  EXPECT_EQ(S({E(), S({E()})}).rank(), 2u);
  EXPECT_EQ(S({E(), E(), E()}), S({E()}));
}

TEST(HFSet, InterningGivesPointerEquality) {
  HFSet a = S({E(), S({E()})});
  HFSet b = HFSet::from_code(3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
}

TEST(HFSet, CodeRoundTripOverV4) {
  for (const auto& x : oracle::stage(4)) {
    auto c = x.code();
    EXPECT_EQ(c, ref_code(x));
    EXPECT_EQ(HFSet::from_code(c), x);
  }
}

TEST(HFSet, CodeRoundTripRandom) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t n = rng() % (1u << 20);
    HFSet x = HFSet::from_code(n);
    EXPECT_EQ(x.code(), BigNat(n));
    EXPECT_EQ(ref_code(x), BigNat(n));
  }
}

TEST(HFSet, LargeCodes) {
  BigNat big = (BigNat(1) << 200) + (BigNat(1) << 70) + 5;
  HFSet x = HFSet::from_code(big);
  EXPECT_FALSE(x.small_code().has_value());
  EXPECT_EQ(x.code(), big);
  EXPECT_EQ(ref_code(x), big);
}

TEST(HFSet, AckermannOrderMatchesCodes) {
  std::mt19937_64 rng(11);
  std::vector<BigNat> codes;
  for (int i = 0; i < 200; ++i) {
    BigNat c = rng() % 5000;
    if (i % 3 == 0) c += BigNat(1) << (64 + rng() % 80);
    if (i % 7 == 0) c += BigNat(1) << (rng() % 130);
    codes.push_back(c);
  }
  for (auto& a : codes)
    for (auto& b : codes) {
      HFSet x = HFSet::from_code(a), y = HFSet::from_code(b);
      EXPECT_EQ(x < y, a < b);
      EXPECT_EQ(x == y, a == b);
    }
}

TEST(HFSet, RankRecursion) {
  auto v4 = oracle::stage(4);
  for (auto& x : v4) EXPECT_EQ(x.rank(), oracle::rank(x));
  EXPECT_EQ(S({E(), S({E()})}).rank(), 2u);
}

TEST(HFSet, ContainsAndSubset) {
  auto v3 = oracle::stage(3);
  for (auto& x : v3)
    for (auto& y : v3) {
      bool member = false;
      for (auto& z : y.elements()) member = member || z == x;
      EXPECT_EQ(y.contains(x), member);
      bool sub = true;
      for (auto& z : x.elements()) sub = sub && y.contains(z);
      EXPECT_EQ(x.subset_of(y), sub);
    }
}

TEST(Kuratowski, Examples) {
  EXPECT_EQ(kuratowski(E(), E()), S({S({E()})}));
  EXPECT_EQ(kuratowski(E(), S({E()})), S({S({E()}), S({E(), S({E()})})}));
}

TEST(Kuratowski, InjectiveOverV3) {
  auto v3 = oracle::stage(3);
  for (auto& a : v3)
    for (auto& b : v3)
      for (auto& c : v3)
        for (auto& d : v3)
          EXPECT_EQ(kuratowski(a, b) == kuratowski(c, d), a == c && b == d);
}

TEST(Kuratowski, UnpairInverts) {
  auto v4 = oracle::stage(4);
  for (auto& a : v4)
    for (auto& b : v4) {
      auto p = unpair(kuratowski(a, b));
      ASSERT_TRUE(p.has_value());
      EXPECT_EQ(p->first, a);
      EXPECT_EQ(p->second, b);
    }
  EXPECT_FALSE(unpair(HFSet::from_code(3)).has_value());
}

TEST(Kuratowski, RankOfPair) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    HFSet x = HFSet::from_code(rng() % (1u << 16));
    HFSet y = HFSet::from_code(rng() % (1u << 16));
    EXPECT_EQ(oracle::rank(kuratowski(x, y)), std::max(oracle::rank(x), oracle::rank(y)) + 2);
  }
}

TEST(Tuples, RoundTrip) {
  std::vector<HFSet> c{HFSet::from_code(5), E(), HFSet::from_code(12), HFSet::from_code(1)};
  auto t = tuple(c);
  auto back = untuple(t, 4);
  ASSERT_TRUE(back);
  EXPECT_EQ(*back, c);
  EXPECT_THROW(tuple({E()}), Error);
}

TEST(Numerals, VonNeumann) {
  EXPECT_EQ(numeral(0), E());
  EXPECT_EQ(numeral(1), S({E()}));
  EXPECT_EQ(numeral(2), S({E(), S({E()})}));
  for (unsigned n = 0; n < 12; ++n) {
    EXPECT_EQ(numeral(n).size(), n);
    EXPECT_EQ(numeral(n).rank(), n);
    EXPECT_EQ(as_numeral(numeral(n)), n);
  }
  EXPECT_FALSE(as_numeral(S({S({E()})})).has_value());
}

TEST(Tower, Values) {
  EXPECT_EQ(tower(0), 0u);
  EXPECT_EQ(tower(1), 1u);
  EXPECT_EQ(tower(2), 2u);
  EXPECT_EQ(tower(3), 4u);
  EXPECT_EQ(tower(4), 16u);
  EXPECT_EQ(tower(5), 65536u);
}

TEST(Stage, Sizes) {
  EXPECT_EQ(Structure::stage(0).size(), 0u);
  EXPECT_EQ(Structure::stage(1).size(), 1u);
  EXPECT_EQ(Structure::stage(4).size(), 16u);
  EXPECT_EQ(Structure::stage(5).size(), 65536u);
}

TEST(Stage, ElementsAreExactlyLowRank) {
  for (unsigned n = 0; n <= 4; ++n) {
    Structure m = Structure::stage(n);
    auto ref = oracle::stage(n);
    std::set<HFSet> a(m.labels().begin(), m.labels().end());
    std::set<HFSet> b(ref.begin(), ref.end());
    EXPECT_EQ(a, b);
    for (auto& x : m.labels()) EXPECT_LT(x.rank(), n);
  }
}

TEST(Stage, TransitiveAndTrueMembership) {
  for (unsigned n = 1; n <= 4; ++n) {
    Structure m = Structure::stage(n);
    for (Elem b = 0; b < m.size(); ++b) {
      for (auto& y : m.label(b).elements()) EXPECT_TRUE(m.find(y).has_value());
      for (Elem a = 0; a < m.size(); ++a) EXPECT_EQ(m.in(a, b), m.label(b).contains(m.label(a)));
    }
  }
}

TEST(Stage, CapIsEnforced) {
  EXPECT_THROW(Structure::stage(6), Error);
  setenv("TK_MAX_STAGE", "3", 1);
  EXPECT_THROW(Structure::stage(4), Error);
  EXPECT_NO_THROW(Structure::stage(3));
  setenv("TK_MAX_STAGE", "9", 1);
  EXPECT_EQ(max_stage(), kStageCap);
  unsetenv("TK_MAX_STAGE");
}

TEST(Structure, GeneralRelation) {
  HFSet a = HFSet::from_code(0), b = HFSet::from_code(7);
  Structure m = Structure::make({b, a}, {{b, a}, {a, a}});
  ASSERT_EQ(m.size(), 2u);
  Elem ia = *m.find(a), ib = *m.find(b);
  EXPECT_TRUE(m.in(ib, ia));
  EXPECT_TRUE(m.in(ia, ia));
  EXPECT_FALSE(m.in(ia, ib));
  EXPECT_THROW(Structure::make({a, a}, {}), Error);
  EXPECT_THROW(Structure::make({a}, {{a, b}}), Error);
}

TEST(Collapse, TwoNodes) {
  auto v = collapse({10, 20}, {{20, 10}});
  EXPECT_EQ(v.at(10), S({E()}));
  EXPECT_EQ(v.at(20), E());
}

TEST(Collapse, ExtensionalityViolation) {
  try {
    collapse({1, 2}, {});
    FAIL() << "expected an extensionality error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("nodes 1 and 2"), std::string::npos);
  }
}

TEST(Collapse, CycleDetected) {
  EXPECT_THROW(collapse({1, 2}, {{1, 2}, {2, 1}}), Error);
  EXPECT_THROW(collapse({1}, {{1, 1}}), Error);
}

TEST(Collapse, TransitiveSetsCollapseToThemselves) {
  // Transitive closures of random small sets.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    HFSet x = HFSet::from_code(rng() % (1u << 16));
    std::set<HFSet> tc;
    std::vector<HFSet> work{x};
    while (!work.empty()) {
      HFSet y = work.back();
      work.pop_back();
      if (!tc.insert(y).second) continue;
      for (auto& z : y.elements()) work.push_back(z);
    }
    std::vector<std::uint64_t> nodes;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
    for (auto& y : tc) nodes.push_back(*y.small_code());
    for (auto& y : tc)
      for (auto& z : y.elements()) edges.emplace_back(*z.small_code(), *y.small_code());
    auto v = collapse(nodes, edges);
    for (auto& y : tc) EXPECT_EQ(v.at(*y.small_code()), y);
  }
}

TEST(Collapse, StructureCollapseIsIdempotent) {
  HFSet a = HFSet::from_code(100), b = HFSet::from_code(200), c = HFSet::from_code(300);
  Structure m = Structure::make({a, b, c}, {{a, b}, {b, c}, {a, c}});
  auto v = collapse(m);
  std::vector<std::pair<HFSet, HFSet>> edges;
  for (auto& x : v)
    for (auto& y : v)
      if (y.contains(x)) edges.emplace_back(x, y);
  Structure image = Structure::make(v, edges);
  auto w = collapse(image);
  std::set<HFSet> s1(v.begin(), v.end()), s2(w.begin(), w.end());
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(s1, (std::set<HFSet>{E(), S({E()}), S({E(), S({E()})})}));
}
