// Satisfaction and truth classes as explicit finite data: validation of the
// compositional clauses, extensionality, interconversion, pathological
// disjunctions and the diagonal refuter.

#ifndef TK_CLASSES_HPP_
#define TK_CLASSES_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tk/eval.hpp"
#include "tk/formula.hpp"
#include "tk/structure.hpp"

namespace tk {

using Entry = std::pair<Formula, Assignment>;

struct EntryLess {
  bool operator()(const Entry& a, const Entry& b) const;
};

struct EntryHash {
  std::size_t operator()(const Entry& e) const { return e.first.hash() * 1000003u ^ e.second.hash(); }
};

using Family = std::set<Formula, FormulaLess>;
using EntrySet = std::unordered_set<Entry, EntryHash>;
using SentenceSet = std::unordered_set<Formula>;

struct SatClass {
  Structure m;
  Family family;
  EntrySet entries;

  bool contains(const Formula& f, const Assignment& a) const { return entries.count({f, a}) > 0; }
};

struct TruthClass {
  Structure m;
  Family family;
  SentenceSet sentences;

  bool contains(const Formula& s) const { return sentences.count(s) > 0; }
};

// An explicit truth class seen as a TruthPredicate: the family is the set of
// F-shaped sentences.
class ExplicitTruth : public TruthPredicate {
 public:
  explicit ExplicitTruth(const TruthClass& t);
  const Structure& structure() const override { return t_->m; }
  bool in_family(const Formula& s) const override { return shaped_.count(s) > 0; }
  bool holds(const Formula& s) const override { return t_->contains(s); }

 private:
  const TruthClass* t_;
  SentenceSet shaped_;
};

// Canonical orderings for reports.
std::vector<Entry> sorted_entries(const SatClass& s);
std::vector<Formula> sorted_sentences(const TruthClass& t);

struct Violation {
  // Axiom number 1-5.
  unsigned clause = 0;
  Formula formula;
  Assignment assignment;
  std::string message;
};

struct Report {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks axioms (1)-(5) over every formula of the family and every
// assignment into M (truth classes: every F-shaped sentence). Clause 5 uses
// at most `budget` witness probes before throwing BudgetExceeded.
Report validate_class(const SatClass& c, std::uint64_t budget = kDefaultBudget);
Report validate_class(const TruthClass& c, std::uint64_t budget = kDefaultBudget);

// Pairs of ~-related family members (with assignments into M) whose
// membership differs; the first of each pair is the canonical representative
// of its ~-class.
std::vector<std::pair<Entry, Entry>> is_extensional(const SatClass& s);

// T(S) = {f*a : (f,a) in S} and S(T) = {(f,a) : f in F, f*a in T}. Inputs
// must validate (and S must be extensional); throws Error otherwise.
TruthClass convert(const SatClass& s);
SatClass convert(const TruthClass& t);

// All formulas over `vars` of depth <= k.
Family depth_family(unsigned k, const std::vector<Var>& vars);
// Downward closure under immediate subformulas.
Family subformula_closure(const std::vector<Formula>& fs);
// Closed instances f*a of family members over m.
std::vector<Formula> shaped_sentences(const Structure& m, const Family& f);

SatClass induced_sat(const Structure& m, Family f);
TruthClass induced_truth(const Structure& m, Family f);
TruthClass induced_truth(const Structure& m, unsigned k, const std::vector<Var>& vars);

// The same class over a smaller (closed) family.
SatClass restrict_class(const SatClass& s, const Family& f);
TruthClass restrict_class(const TruthClass& t, const Family& f);

// Every single-entry toggle of a class: each (f,a) with f in the family and
// a an assignment for f, flipped in or out.
void for_each_toggle(const SatClass& s, const std::function<void(const SatClass&, const Entry&)>& fn);
void for_each_toggle(const TruthClass& t, const std::function<void(const TruthClass&, const Formula&)>& fn);

// D(1,f) = f v f, D(i+1,f) = D(i,f) v D(i,f).
Formula pathology_D(unsigned k, const Formula& f);

using Coding = std::function<HFSet(const Formula&)>;

// Codes the formulas of a pool injectively: the i-th formula in Ackermann
// order of codes goes to the i-th element of M. Throws Error if the pool is
// larger than M; the returned map throws on formulas outside the pool.
Coding ackermann_coding(const Structure& m, std::vector<Formula> pool);

// R(u) = not S(u,u) for S with free variables u < w.
Formula diagonal_formula(const Formula& s);

struct DiagonalWitness {
  Formula s;
  Formula r_formula;
  HFSet r;
  bool s_rr = false;
  bool r_r = false;
};

// Builds R from a binary S and evaluates S(r,r) and R(r) at r = coding(R);
// they always differ. Throws Error if S does not have exactly two free
// variables or coding(R) is outside M.
DiagonalWitness diagonal_refute(const Structure& m, const Formula& s, const Coding& coding);

}  // namespace tk

#endif  // TK_CLASSES_HPP_
