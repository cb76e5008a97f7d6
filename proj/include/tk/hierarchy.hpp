// Partial truth predicates True_k, the finite Mostowski truth predicate and
// piecewise coding of truth sets.

#ifndef TK_HIERARCHY_HPP_
#define TK_HIERARCHY_HPP_

#include <optional>
#include <string>
#include <vector>

#include "tk/eval.hpp"
#include "tk/formula.hpp"
#include "tk/structure.hpp"
#include "tk/syntax.hpp"

namespace tk {

struct DepthFamily {
  unsigned k = 0;
  bool contains(const Formula& f) const { return in_depth(f, k); }
};

// Interprets the True_k recursion on sentences of Sent+ over m: the atomic
// clause at depth 1, and for depth r+1 (r < k) the Neg_r / Disj_r / Exist_r
// disjunction, Exist_r ranging witnesses over the domain of m. Throws Error
// if depth(s) > k, s is not an L_set sentence or a constant is outside m.
bool true_k(const Structure& m, unsigned k, const Formula& s);

// Levy's partial truth for Sigma_n: true_k at k = depth(s), restricted to
// sentences the Levy recognizer places in Delta0 or Sigma_j / Pi_j, j <= n.
bool true_sigma(const Structure& m, unsigned n, const Formula& s);

// Two-sorted formula produced by the materializer. Syntactic variables range
// over sentences, object variables over the structure.
struct MetaFormula {
  enum class Op { Rel, Mem, Eq, Not, Or, And, ExSyn, ExObj };
  Op op = Op::Rel;
  // Relation name for Rel, bound variable for ExSyn / ExObj.
  std::string name;
  // Rel: (depth= phi "r"), (code-eq phi y z), (code-mem phi y z),
  // (code-neg phi psi), (code-or phi psi1 psi2), (code-inst phi v theta)
  // where theta is the instance of the matrix of phi = ex x psi at v.
  // Mem / Eq: two object variables.
  std::vector<std::string> args;
  std::vector<MetaFormula> subs;

  std::string to_string() const;
  std::size_t size() const;
};

// The True_k formula text for 1 <= k <= 3 with free syntactic variable phi0.
MetaFormula materialize_true(unsigned k);

// Evaluates a materialized formula against sentence s bound to phi0.
// Syntactic quantifiers range over the sentences reachable from s by taking
// immediate subformulas and instantiating quantifiers with elements of m.
bool eval_materialized(const Structure& m, const MetaFormula& f, const Formula& s);

// Sentences reachable from s as above, s first.
std::vector<Formula> instance_closure(const Structure& m, const Formula& s);

struct MostowskiResult {
  bool value = false;
  // The depth bound p at which a truth class containing the decision was
  // found.
  unsigned p = 0;
};

// Searches p = depth(s), depth(s)+1, ... for a Depth_p truth class on the
// instance closure of s (the one induced by evaluation, checked against the
// compositional clauses) and reports membership of s.
MostowskiResult mostowski_probe(const Structure& m, const Formula& s);
bool mostowski_truth(const Structure& m, const Formula& s);

// {c in s : decode(c) is a sentence in T}, as a set of codes. Throws Error if
// an element of s does not decode to a sentence.
HFSet piecewise_code(const TruthPredicate& t, const HFSet& s);

}  // namespace tk

#endif  // TK_HIERARCHY_HPP_
