// A small Hilbert-style proof checker over {not, or, exists}, a bounded
// prover that produces checkable proofs, and the global-reflection closure
// checks built on them.
//
// Axiom schemas (A -> B abbreviates (or (not A) B)):
//   A1  A -> (B -> A)
//   A2  (A -> (B -> C)) -> ((A -> B) -> (A -> C))
//   A3  (not B -> not A) -> ((not B -> A) -> B)
//   O1  (A or B) -> (not not A or B)
//   O2  (not not A or B) -> (A or B)
//   E1  t = t
//   E2  s = t -> (R -> R') for R atomic, R' = R with some s replaced by t
//   Q1  B[t/x] -> ex x B, t free for x in B
//   Q2  all x (A -> B) -> (A -> all x B), x not free in A
// Rules: MP and generalization, with the eigenvariable condition that the
// generalized variable is not free in any premise the line depends on.

#ifndef TK_PROOF_HPP_
#define TK_PROOF_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tk/eval.hpp"
#include "tk/formula.hpp"

namespace tk {

struct Justification {
  enum class Kind { Premise, Axiom, MP, Gen };
  Kind kind = Kind::Premise;
  // A1 A2 A3 O1 O2 E1 E2 Q1 Q2.
  std::string schema;
  // 1-based line numbers. MP: i is the antecedent, j the implication.
  unsigned i = 0;
  unsigned j = 0;
  Var var;

  static Justification premise() { return {}; }
  static Justification axiom(std::string id) { return {Kind::Axiom, std::move(id), 0, 0, Var()}; }
  static Justification mp(unsigned i, unsigned j) { return {Kind::MP, "", i, j, Var()}; }
  static Justification gen(unsigned i, Var v) { return {Kind::Gen, "", i, 0, v}; }

  std::string to_string() const;
  bool operator==(const Justification&) const = default;
};

struct ProofLine {
  Formula formula;
  Justification just;
  bool operator==(const ProofLine&) const = default;
};

struct Proof {
  std::vector<ProofLine> lines;
  const Formula& conclusion() const { return lines.back().formula; }
  bool empty() const { return lines.empty(); }
};

struct ProofCheck {
  bool ok = true;
  // 1-based line of the first error, 0 for an empty proof.
  unsigned line = 0;
  std::string message;
};

using PremiseSet = std::function<bool(const Formula&)>;

// Whether f is an instance of the named schema.
bool is_axiom(const std::string& schema, const Formula& f);
// The first schema f instantiates, if any.
std::optional<std::string> axiom_schema(const Formula& f);

ProofCheck check_proof(const Proof& p, const PremiseSet& premises);
ProofCheck check_proof(const Proof& p, const std::vector<Formula>& premises);

struct ProveOptions {
  // Upper bound on search steps and emitted lines.
  std::uint64_t budget = 10'000;
  // Allow quantifier instantiation and generalization.
  bool quantifiers = true;
  // Tautology checks give up above this many propositional atoms.
  unsigned max_atoms = 8;
};

// Bounded, incomplete search. A returned proof always passes check_proof
// (asserted); nullopt says nothing about provability.
std::optional<Proof> prove(const std::vector<Formula>& premises, const Formula& goal,
                           const ProveOptions& options = {});

// Propositional atoms of f: maximal subformulas that are not not/or.
std::vector<Formula> prop_atoms(const Formula& f);
// Truth-table test of the propositional skeleton.
std::optional<bool> is_tautology(const Formula& f, unsigned max_atoms = 16);

enum class GRefMode { Full, Prop, DepthBounded };

struct GRefConfig {
  GRefMode mode = GRefMode::Prop;
  // DepthBounded: only conclusions of depth <= depth_x are checked.
  unsigned depth_x = 0;
  // DepthBounded: extra premises Z.
  std::vector<Formula> extra;
  std::uint64_t budget = 10'000;
};

struct GRefFailure {
  Formula conclusion;
  Proof proof;
};

struct GRefReport {
  std::uint64_t steps = 0;
  std::size_t proofs = 0;
  bool exhausted = false;
  std::vector<GRefFailure> failures;
  bool ok() const { return failures.empty(); }
};

// Premises are the pool members in T (plus the extra premises); candidate
// conclusions are the pool members and every modus ponens consequence of
// two premises. A conclusion with a proof but not in T is a failure.
GRefReport check_gref(const TruthPredicate& t, const std::vector<Formula>& pool, const GRefConfig& config);

}  // namespace tk

#endif  // TK_PROOF_HPP_
