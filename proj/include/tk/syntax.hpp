// Syntactic analysis and transformations: depth, Levy classification,
// existential closures, iterated disjunction, relativization and the
// renaming relation between (formula, assignment) pairs.

#ifndef TK_SYNTAX_HPP_
#define TK_SYNTAX_HPP_

#include <optional>
#include <string>
#include <vector>

#include "tk/formula.hpp"

namespace tk {

struct LevyClass {
  enum class Kind { Delta0, Sigma, Pi, Unclassified };
  Kind kind = Kind::Unclassified;
  unsigned n = 0;

  std::string to_string() const;
  bool operator==(const LevyClass&) const = default;
};

// Every quantifier of f has the bounded shape produced by ex_in/all_in.
bool is_delta0(const Formula& f);
// Conservative recognizer: Delta0, Sigma_n / Pi_n for exact prenex
// alternations over a Delta0 matrix, otherwise Unclassified.
LevyClass levy_class(const Formula& f);

// Matches Exists(v, Not(Or(Not(Mem(v, t)), Not(body)))) with t != v.
bool match_bounded_exists(const Formula& f, Term* bound, Formula* body);

struct Analysis {
  std::vector<Var> free_vars;
  unsigned depth = 0;
  std::vector<Formula> immediate_subformulas;
  LevyClass levy;
  bool sentence = false;
};

Analysis analyze(const Formula& f);

// psi[#v/x] for ex = (ex x psi).
Formula instantiate(const Formula& ex, const HFSet& v);

// No Pred or Prov atoms.
bool lset_only(const Formula& f);

// Depth_k membership: depth(f) <= k. Depth_0 is empty.
inline bool in_depth(const Formula& f, unsigned k) { return f.depth() <= k; }

// Existential closure: one quantifier per free variable in canonical order,
// outermost first.
Formula ecl(const Formula& f);
// Bounded existential closure over x; x must not occur in f.
Formula becl(const Formula& f, Var x);

// Left-nested disjunction ((f0 or f1) or f2) ...
Formula big_or(const std::vector<Formula>& fs);
// Left-nested conjunction, used for SPI antecedents.
Formula big_and(const std::vector<Formula>& fs);

// Bounds every quantifier of f by x; x must not occur in f.
Formula relativize(const Formula& f, Var x);

// The renaming relation on (formula, assignment) pairs: same skeleton after
// canonical renaming of bound variables, free positions matched with free
// positions carrying equal values. Throws Error when an assignment is not
// total for its formula.
bool sim_equiv(const Formula& f0, const Assignment& a0, const Formula& f1, const Assignment& a1);

// Key with sim_key(p) == sim_key(q) iff sim_equiv(p, q).
std::string sim_key(const Formula& f, const Assignment& a);

// The subformula closure (all formulas reachable through immediate
// subformulas, including f).
std::vector<Formula> subformulas(const Formula& f);

}  // namespace tk

#endif  // TK_SYNTAX_HPP_
