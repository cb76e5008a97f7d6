// Exhaustive formula pools and assignment sweeps.

#ifndef TK_ENUMERATE_HPP_
#define TK_ENUMERATE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tk/formula.hpp"
#include "tk/structure.hpp"

namespace tk {

struct PoolSpec {
  std::vector<Var> vars;
  std::vector<HFSet> constants;
  // Unary predicate symbols contributing atoms (pred P t).
  std::vector<Var> predicates;
  bool mem = true;
  bool eq = true;
  // Quantifiers are emitted as ex_in(v, t, .) with t a term other than v;
  // each bounded quantifier counts as a single construction level.
  bool bounded = false;
};

// All formulas built from the atoms of a PoolSpec by not, or and the
// quantifier, organised by construction level (which equals depth unless
// the pool is bounded).
class FormulaPool {
 public:
  FormulaPool(PoolSpec spec, unsigned levels);

  unsigned levels() const { return static_cast<unsigned>(levels_.size()); }
  // Formulas of exactly level d, 1 <= d <= levels().
  const std::vector<Formula>& level(unsigned d) const { return levels_.at(d - 1); }
  std::vector<Formula> up_to(unsigned d) const;

  // Streams the formulas of level levels()+1 without storing them.
  void for_each_next(const std::function<void(const Formula&)>& fn) const;
  std::uint64_t count_next() const;

  const PoolSpec& spec() const { return spec_; }

 private:
  std::vector<Term> terms() const;
  void build_level(const std::function<void(const Formula&)>& fn) const;

  PoolSpec spec_;
  std::vector<std::vector<Formula>> levels_;
};

// Calls fn for every assignment of `vars` into the elements of m, in
// lexicographic order of element indices.
void for_each_assignment(const Structure& m, std::span<const Var> vars,
                         const std::function<void(const Assignment&)>& fn);

// All closures f*a of the given formulas over m, deduplicated, in input
// order then assignment order.
std::vector<Formula> closures(const Structure& m, const std::vector<Formula>& fs);

}  // namespace tk

#endif  // TK_ENUMERATE_HPP_
