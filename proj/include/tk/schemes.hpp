// Axiom-scheme instances, the Delta0^fin translation, internal scheme checks,
// truth-class correctness properties and the constructions used to relate
// them (psi sequences, theta_s, reflection and consistency instances).

#ifndef TK_SCHEMES_HPP_
#define TK_SCHEMES_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tk/classes.hpp"
#include "tk/eval.hpp"
#include "tk/formula.hpp"

namespace tk {

enum class SchemeTag { Sep, Coll, Repl, Ind, Found, REF, CON, IntSep, IntColl, IntRepl, IntInd };

std::string to_string(SchemeTag t);
std::optional<SchemeTag> scheme_from_string(const std::string& s);

struct RefMeta {
  std::string base;
  unsigned n = 1;
  unsigned iter = 0;
};

struct SchemeInstance {
  SchemeTag tag;
  Formula templ;
  Formula sentence;
  std::optional<RefMeta> ref;
  // Set for Ind: quantification over omega is read as quantification over
  // the von Neumann numerals present in the structure.
  bool finite_omega = false;
};

// Template variables: parameter v and x for Sep / Ind / Found, v, x, y for
// Coll / Repl.
std::vector<Var> template_vars(SchemeTag tag);

// The universal closure over v of the displayed scheme instance. Throws
// Error on arity mismatch or for tags that are not set-theoretic schemes.
SchemeInstance gen_scheme(SchemeTag tag, const Formula& templ);

// x is a von Neumann natural number (transitive set of transitive sets).
Formula nat_formula(Var x);

// The * translation on Delta0 formulas of L_set(P). Throws Error if the
// formula is not recognized as Delta0.
Formula delta0fin(const Formula& f);

struct InternalFailure {
  Formula templ;
  Formula sentence;
  // "outside family" or "not in T".
  std::string reason;
};

struct InternalReport {
  SchemeTag tag;
  std::size_t checked = 0;
  std::vector<InternalFailure> failures;
  bool ok() const { return failures.empty(); }
};

// For every template of depth <= bound over template_vars(base tag), checks
// that the generated instance lies in T.
InternalReport check_internal(const TruthPredicate& t, SchemeTag tag, unsigned bound);
// Templates generated for an internal check.
std::vector<Formula> internal_templates(SchemeTag tag, unsigned bound);
SchemeTag base_scheme(SchemeTag internal);

enum class TruthProperty { DCOut, DCIn, PI, SPI };

std::string to_string(TruthProperty p);
std::optional<TruthProperty> property_from_string(const std::string& s);

struct SequenceViolation {
  std::vector<Formula> sequence;
  std::string message;
};

struct PropertyReport {
  TruthProperty prop;
  std::size_t checked = 0;
  std::vector<SequenceViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks one sequence; nullopt when it satisfies the property. The chain
// hypotheses of PI and SPI are read inside T: T(f_i -> f_i+1) and
// T((f_0 & ... & f_j-1) -> f_j).
std::optional<std::string> property_failure(const TruthPredicate& t, TruthProperty p,
                                            const std::vector<Formula>& seq);

PropertyReport check_truth_property(const TruthPredicate& t, TruthProperty p,
                                    const std::vector<std::vector<Formula>>& seqs);

// All sequences of length 1..max_len over pool, lexicographic by index.
void for_each_sequence(const std::vector<Formula>& pool, unsigned max_len,
                       const std::function<void(const std::vector<Formula>&)>& fn);

PropertyReport check_truth_property(const TruthPredicate& t, TruthProperty p, const std::vector<Formula>& pool,
                                    unsigned max_len);

// psi_0 = not f_0, psi_i = (not f_i -> OR_{j<i} not f_j).
std::vector<Formula> psi_seq(const std::vector<Formula>& fs);

// OR_{i<k} ((x = i) & s_i) with i the von Neumann numeral constants.
Formula theta_s(const std::vector<Formula>& s, Var x = Var("x"));

enum class RefKind { REF, CON };

// REF: all x (Prov(f(x)) -> f(x)); CON: all x (f(x) -> not Prov(not f(x))),
// Prov the placeholder predicate named after the base theory, n and iter.
// f must have at most one free variable.
SchemeInstance gen_ref(const std::string& base, unsigned n, const Formula& f, RefKind kind, unsigned iter = 0);

// Placeholder symbol for Prov_{base + True_n} at iteration depth iter.
Var prov_symbol(const std::string& base, unsigned n, unsigned iter);

}  // namespace tk

#endif  // TK_SCHEMES_HPP_
