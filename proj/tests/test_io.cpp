#include <gtest/gtest.h>

#include "tk/error.hpp"
#include "tk/io.hpp"
#include "tk/parse.hpp"

using namespace tk;

namespace {

const Var x("x"), y("y");

HFSet C(std::uint64_t n) { return HFSet::from_code(n); }

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(StructureFile, Stage) {
  Structure m = parse_structure("# V_3\nstage 3\n");
  EXPECT_EQ(m.stage_index(), 3u);
  EXPECT_EQ(write_structure(m), "stage 3\n");
}

TEST(StructureFile, CollapsedIds) {
  // 0 < 1 < 2 = {0,1}; the ids are labelled by their collapse.
  Structure m = parse_structure("element e\nelement o\nelement t\nedge e o\nedge e t\nedge o t\n");
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.labels(), (std::vector<HFSet>{C(0), C(1), C(3)}));
  EXPECT_TRUE(m.in(0, 2));
  EXPECT_FALSE(m.in(2, 0));
  Structure again = parse_structure(write_structure(m));
  EXPECT_EQ(again.labels(), m.labels());
  EXPECT_EQ(again.edges(), m.edges());
}

TEST(StructureFile, CodedIdsKeepLabels) {
  // A non-transitive structure: {1} without 1 = {0}.
  Structure m = parse_structure("element #0\nelement #4\n");
  EXPECT_EQ(m.labels(), (std::vector<HFSet>{C(0), C(4)}));
  EXPECT_TRUE(m.edges().empty());
}

TEST(StructureFile, Errors) {
  EXPECT_NE(error_of([] { parse_structure("element a\nedge a b\n"); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_structure("stage 2\nelement a\n"); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_structure("node a\n"); }).find("line 1"), std::string::npos);
  EXPECT_FALSE(error_of([] { parse_structure(""); }).empty());
}

TEST(ClassFile, SatRoundTrip) {
  std::string text =
      "class sat over stage 2\n"
      "family (mem x y)\n"
      "family (not (mem x y))\n"
      "entry (mem x y) x=0 y=1\n"
      "entry (not (mem x y)) x=1 y=0   # comment\n";
  auto c = parse_class(text);
  ASSERT_TRUE(std::holds_alternative<SatClass>(c));
  const auto& s = std::get<SatClass>(c);
  EXPECT_EQ(s.family.size(), 2u);
  EXPECT_TRUE(s.contains(mem(x, y), Assignment{{x, C(0)}, {y, C(1)}}));
  EXPECT_EQ(s.entries.size(), 2u);
  std::string out = write_class(s);
  auto again = std::get<SatClass>(parse_class(out));
  EXPECT_EQ(again.family, s.family);
  EXPECT_EQ(again.entries, s.entries);
  EXPECT_EQ(write_class(again), out);
}

TEST(ClassFile, TruthRoundTrip) {
  std::string text =
      "class truth over stage 2\n"
      "family (ex x (mem x y))\n"
      "entry (ex x (mem x #1))\n"
      "entry (all x (eq x x))\n";
  auto t = std::get<TruthClass>(parse_class(text));
  EXPECT_TRUE(t.contains(exists(x, mem(x, C(1)))));
  EXPECT_TRUE(t.contains(forall(x, eq(x, x))));
  auto again = std::get<TruthClass>(parse_class(write_class(t)));
  EXPECT_EQ(again.sentences, t.sentences);
}

TEST(ClassFile, Errors) {
  EXPECT_NE(error_of([] { parse_class("class sat over stage 2\nentry (mem x y) x=q\n"); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_class("class truth over stage 2\nentry (mem #0 #1) x=0\n"); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_class("klass sat over stage 2\n"); }).find("line 1"), std::string::npos);
  EXPECT_NE(error_of([] { parse_class("class sat over stage 2\nfamily (mem x\n"); }).find("line 2"), std::string::npos);
  EXPECT_FALSE(error_of([] { parse_class("# nothing\n"); }).empty());
}

TEST(TheoryFile, RoundTrip) {
  std::string text =
      "# a small theory\n"
      "theory demo\n"
      "(ex x (mem x #1))\n"
      "\n"
      "(all x (eq x x)) @ref base=ZF n=2 iter=1\n";
  Theory t = parse_theory(text);
  EXPECT_EQ(t.name, "demo");
  ASSERT_EQ(t.lines.size(), 2u);
  EXPECT_FALSE(t.lines[0].ref);
  ASSERT_TRUE(t.lines[1].ref);
  EXPECT_EQ(t.lines[1].ref->base, "ZF");
  EXPECT_EQ(t.lines[1].ref->n, 2u);
  EXPECT_EQ(t.lines[1].ref->iter, 1u);
  Theory again = parse_theory(write_theory(t));
  EXPECT_EQ(again.sentences(), t.sentences());
  EXPECT_EQ(again.lines[1].ref->base, "ZF");
}

TEST(TheoryFile, Errors) {
  EXPECT_NE(error_of([] { parse_theory("theory t\n(mem x #1)\n"); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_theory("theory t\n(eq #0 #0) @ref n=2\n"); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_theory("(eq #0 #0)\n"); }).find("line 1"), std::string::npos);
}

TEST(ProofFile, RoundTripAndCheck) {
  Formula a = mem(C(0), C(1)), b = eq(C(1), C(1));
  Proof p{{{a, Justification::premise()}, {imp(a, b), Justification::premise()}, {b, Justification::mp(1, 2)}}};
  std::string text = write_proof(p);
  Proof again = parse_proof(text);
  ASSERT_EQ(again.lines.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(again.lines[i], p.lines[i]);
  EXPECT_TRUE(check_proof(again, std::vector<Formula>{a, imp(a, b)}).ok);

  Proof g = parse_proof("proof\n1: (eq x x) ; axiom E1\n2: (all x (eq x x)) ; gen 1 x\n");
  EXPECT_TRUE(check_proof(g, std::vector<Formula>{}).ok);
}

TEST(ProofFile, Errors) {
  EXPECT_NE(error_of([] { parse_proof("proof\n2: (eq x x) ; axiom E1\n"); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_proof("proof\n1: (eq x x) ; lemma\n"); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_proof("1: (eq x x) ; premise\n"); }).find("line 1"), std::string::npos);
}
