// First-order formulas over {not, or, exists} with membership and equality,
// plus two atom kinds used by the scheme generators: unary predicate atoms
// (P, Fin) and the Prov placeholder of the reflection schemes.
//
// Formulas are immutable and cheap to copy. Structural equality is deep
// (guarded by a cached hash); the canonical order is the Ackermann order of
// the formula codes.

#ifndef TK_FORMULA_HPP_
#define TK_FORMULA_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "tk/hfset.hpp"

namespace tk {

struct IdentRec;

// Interned identifier used for variables and predicate symbols. Variables
// are ordered v0 < v1 < ... < v10 < ... first, then other names
// lexicographically.
class Var {
 public:
  Var() = default;
  explicit Var(std::string_view name);
  static Var v(unsigned i);

  const std::string& name() const;
  // i for names of the form v<i> (no leading zeros).
  std::optional<std::uint64_t> index() const;
  bool valid() const { return rec_ != nullptr; }

  bool operator==(const Var& o) const { return rec_ == o.rec_; }
  std::strong_ordering operator<=>(const Var& o) const;
  std::size_t hash() const { return reinterpret_cast<std::uintptr_t>(rec_) >> 4; }

 private:
  const IdentRec* rec_ = nullptr;
};

class Term {
 public:
  Term(Var v) : var_(v) {}  // NOLINT(google-explicit-constructor)
  Term(HFSet c) : constant_(true), c_(std::move(c)) {}  // NOLINT
  static Term constant(std::uint64_t code) { return Term(HFSet::from_code(code)); }

  bool is_var() const { return !constant_; }
  bool is_const() const { return constant_; }
  Var var() const { return var_; }
  const HFSet& value() const { return c_; }

  bool operator==(const Term& o) const {
    return constant_ == o.constant_ && (constant_ ? c_ == o.c_ : var_ == o.var_);
  }
  std::size_t hash() const { return constant_ ? c_.hash() * 3 + 1 : var_.hash() * 3; }

 private:
  bool constant_ = false;
  Var var_;
  HFSet c_;
};

using VarList = boost::container::small_vector<Var, 4>;

enum class Kind : std::uint8_t { Mem, Eq, Pred, Prov, Not, Or, Exists };

struct FormulaNode;

class Formula {
 public:
  Formula() = default;

  Kind kind() const;
  bool valid() const { return node_ != nullptr; }
  bool atomic() const;

  // Mem/Eq: the two terms. Pred: rhs() is the argument. Prov: lhs() is the
  // argument substituted for var() in quoted().
  const Term& lhs() const;
  const Term& rhs() const;
  // Pred/Prov symbol.
  Var symbol() const;
  // Bound variable of Exists, quoted variable of Prov.
  Var var() const;
  // Operand of Not/Exists, left disjunct of Or, quoted formula of Prov.
  const Formula& sub() const;
  const Formula& left() const { return sub(); }
  const Formula& right() const;

  // Sorted by Var order.
  std::span<const Var> free_vars() const;
  bool free(Var v) const;
  bool sentence() const { return free_vars().empty(); }
  unsigned depth() const;
  std::size_t hash() const;
  std::vector<Formula> immediate_subformulas() const;

  // Canonical HF code, cached.
  const HFSet& code() const;

  bool operator==(const Formula& o) const;

  const FormulaNode* node() const { return node_.get(); }

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;

  friend struct FormulaBuilder;
};

struct FormulaNode {
  Kind kind;
  Term t1{Var()};
  Term t2{Var()};
  Var sym;
  Var v;
  Formula a;
  Formula b;
  VarList fv;
  unsigned depth = 1;
  std::size_t hash = 0;
  mutable std::once_flag code_once;
  mutable HFSet code;
};

inline Kind Formula::kind() const { return node_->kind; }
inline bool Formula::atomic() const { return node_->kind < Kind::Not; }
inline const Term& Formula::lhs() const { return node_->t1; }
inline const Term& Formula::rhs() const { return node_->kind == Kind::Pred ? node_->t1 : node_->t2; }
inline Var Formula::symbol() const { return node_->sym; }
inline Var Formula::var() const { return node_->v; }
inline const Formula& Formula::sub() const { return node_->a; }
inline const Formula& Formula::right() const { return node_->b; }
inline std::span<const Var> Formula::free_vars() const { return {node_->fv.data(), node_->fv.size()}; }
inline bool Formula::free(Var v) const {
  return std::binary_search(node_->fv.begin(), node_->fv.end(), v);
}
inline unsigned Formula::depth() const { return node_->depth; }
inline std::size_t Formula::hash() const { return node_->hash; }

// Ackermann order of codes.
bool formula_less(const Formula& a, const Formula& b);

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};
struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const { return formula_less(a, b); }
};

// Primitive constructors.
Formula mem(Term a, Term b);
Formula eq(Term a, Term b);
Formula pred(Var symbol, Term arg);
Formula prov(Var symbol, Term arg, Var v, Formula quoted);
Formula neg(Formula a);
Formula disj(Formula a, Formula b);
Formula exists(Var v, Formula a);

// Sugar, desugared into the primitives.
Formula conj(Formula a, Formula b);
Formula imp(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula forall(Var v, Formula a);
Formula ex_in(Var v, Term bound, Formula a);
Formula all_in(Var v, Term bound, Formula a);

// Predicate symbols with fixed meaning.
Var fin_symbol();

// Finite map from variables to HF sets, sorted by variable.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<Var, HFSet>> init);

  void set(Var v, HFSet x);
  std::optional<HFSet> get(Var v) const;
  bool has(Var v) const { return get(v).has_value(); }
  std::vector<Var> domain() const;
  const std::vector<std::pair<Var, HFSet>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  Assignment restrict(std::span<const Var> vars) const;
  // Domain equals vars (sorted).
  bool total_for(std::span<const Var> vars) const;
  std::string to_string() const;

  bool operator==(const Assignment& o) const { return entries_ == o.entries_; }
  bool operator<(const Assignment& o) const;
  std::size_t hash() const;

 private:
  std::vector<std::pair<Var, HFSet>> entries_;
};

// Replaces free occurrences of the assigned variables by constants. Throws
// Error when the assignment names a variable not free in f.
Formula close(const Formula& f, const Assignment& a);

// f[t/v]. Returns nullopt when a variable t would be captured.
std::optional<Formula> substitute(const Formula& f, Var v, const Term& t);

// Renames every bound variable that is in `avoid` to a fresh name.
Formula rename_bound(const Formula& f, const std::vector<Var>& avoid);

// Variables occurring anywhere (free, bound, or quoted), sorted.
std::vector<Var> all_vars(const Formula& f);
// A variable with prefix `base` that does not occur in `avoid`.
Var fresh_var(std::string_view base, const std::vector<Var>& avoid);

// Constants occurring in f.
std::vector<HFSet> constants(const Formula& f);

// Inverse of Formula::code().
std::optional<Formula> decode_formula(const HFSet& code);

}  // namespace tk

template <>
struct std::hash<tk::Var> {
  std::size_t operator()(const tk::Var& v) const noexcept { return v.hash(); }
};
template <>
struct std::hash<tk::Formula> {
  std::size_t operator()(const tk::Formula& f) const noexcept { return f.hash(); }
};

#endif  // TK_FORMULA_HPP_
