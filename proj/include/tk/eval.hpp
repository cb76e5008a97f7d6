// Tarskian satisfaction over finite structures, elementary diagrams and the
// finite reflection explorer.

#ifndef TK_EVAL_HPP_
#define TK_EVAL_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "tk/formula.hpp"
#include "tk/structure.hpp"

namespace tk {

// Extensions for the non-membership atoms. Fin holds of every element.
struct Interpretation {
  std::map<Var, std::set<HFSet>> predicates;
  // Decides Prov placeholder atoms; receives the quoted sentence.
  std::function<bool(Var symbol, const Formula& sentence)> prov;
};

enum class EvalMode { Fast, Oracle };

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

struct EvalOptions {
  // Fast short-circuits disjunctions and quantifiers; Oracle evaluates every
  // branch.
  EvalMode mode = EvalMode::Fast;
  std::uint64_t budget = kDefaultBudget;
  const Interpretation* interp = nullptr;
  // Caches quantifier results per (subformula, values of its free
  // variables). Same answers, fewer visits on sentences with repeated
  // quantified subformulas.
  bool memoize = false;
};

// M |= f[a]. The domain of a must equal the free variables of f. Throws
// Error on a domain mismatch, a constant outside M, or an uninterpreted
// atom; BudgetExceeded when more than options.budget nodes are visited.
bool sat(const Structure& m, const Formula& f, const Assignment& a, const EvalOptions& options = {});

// Any queryable set of sentences over a structure: the diagram, explicit
// truth classes.
class TruthPredicate {
 public:
  virtual ~TruthPredicate() = default;
  virtual const Structure& structure() const = 0;
  // Whether the sentence lies in the family the predicate speaks about.
  virtual bool in_family(const Formula& sentence) const = 0;
  virtual bool holds(const Formula& sentence) const = 0;
};

// ED(M) (with constants) or Th(M) (constant-free) restricted to depth <= k;
// membership defers to sat.
class TruthClassView : public TruthPredicate {
 public:
  TruthClassView(Structure m, unsigned depth_bound, bool with_constants,
                 const Interpretation* interp = nullptr);

  const Structure& structure() const override { return m_; }
  bool in_family(const Formula& sentence) const override;
  bool holds(const Formula& sentence) const override;
  unsigned depth_bound() const { return k_; }
  bool with_constants() const { return constants_; }

 private:
  Structure m_;
  unsigned k_;
  bool constants_;
  const Interpretation* interp_;
};

TruthClassView diagram(const Structure& m, unsigned depth_bound, bool with_constants);

// V_a reflects f inside V_N. Both relativization routes (evaluation on
// stage(a) and the relativized formula inside stage(N) with the bound
// variable pointing at V_a) are computed and must agree.
bool reflects(unsigned N, unsigned a, const Formula& f);

// Least a with a0 < a <= N and reflects(N, a, f).
std::optional<unsigned> least_reflecting(unsigned N, const Formula& f, unsigned a0);

}  // namespace tk

#endif  // TK_EVAL_HPP_
