// Reference implementations used as test oracles. They share nothing with
// the library beyond the formula AST and HFSet values: stages are built by
// iterated power sets, assignments are string maps, and every clause is
// evaluated literally without short-circuiting.

#ifndef TK_TESTS_ORACLE_HPP_
#define TK_TESTS_ORACLE_HPP_

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tk/formula.hpp"
#include "tk/hfset.hpp"

namespace oracle {

using tk::Formula;
using tk::HFSet;
using tk::Kind;
using tk::Term;

using Env = std::map<std::string, HFSet>;

inline std::vector<HFSet> powerset(const std::vector<HFSet>& xs) {
  std::vector<HFSet> out;
  std::size_t n = xs.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<HFSet> el;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) el.push_back(xs[i]);
    out.push_back(HFSet::of(el));
  }
  return out;
}

// V_n by iterated power sets.
inline std::vector<HFSet> stage(unsigned n) {
  std::vector<HFSet> v;
  for (unsigned i = 0; i < n; ++i) v = powerset(v);
  return v;
}

inline unsigned rank(const HFSet& x) {
  unsigned r = 0;
  for (auto& y : x.elements()) r = std::max(r, rank(y) + 1);
  return r;
}

inline std::set<std::string> free_vars(const Formula& f) {
  auto term = [](const Term& t, std::set<std::string>& s) {
    if (t.is_var()) s.insert(t.var().name());
  };
  std::set<std::string> s;
  switch (f.kind()) {
    case Kind::Mem:
    case Kind::Eq:
      term(f.lhs(), s);
      term(f.rhs(), s);
      break;
    case Kind::Pred:
      term(f.rhs(), s);
      break;
    case Kind::Prov:
      term(f.lhs(), s);
      break;
    case Kind::Not:
      s = free_vars(f.sub());
      break;
    case Kind::Or: {
      s = free_vars(f.left());
      auto r = free_vars(f.right());
      s.insert(r.begin(), r.end());
      break;
    }
    case Kind::Exists:
      s = free_vars(f.sub());
      s.erase(f.var().name());
      break;
  }
  return s;
}

inline Env restrict(const Env& a, const std::set<std::string>& vars) {
  Env r;
  for (auto& v : vars) r.emplace(v, a.at(v));
  return r;
}

struct Model {
  std::vector<HFSet> domain;
  std::function<bool(const HFSet&, const HFSet&)> member;
  std::map<std::string, std::set<HFSet>> predicates;
};

inline Model standard(unsigned n) {
  return {stage(n), [](const HFSet& a, const HFSet& b) { return b.contains(a); }, {}};
}

inline HFSet value(const Term& t, const Env& a) {
  if (t.is_const()) return t.value();
  return a.at(t.var().name());
}

// The four satisfaction clauses, taken literally.
inline bool sat(const Model& m, const Formula& f, const Env& a) {
  switch (f.kind()) {
    case Kind::Mem:
      return m.member(value(f.lhs(), a), value(f.rhs(), a));
    case Kind::Eq:
      return value(f.lhs(), a) == value(f.rhs(), a);
    case Kind::Pred: {
      if (f.symbol().name() == "fin") return true;
      return m.predicates.at(f.symbol().name()).count(value(f.rhs(), a)) > 0;
    }
    case Kind::Prov:
      throw std::logic_error("oracle does not ground Prov");
    case Kind::Not:
      return !sat(m, f.sub(), restrict(a, free_vars(f.sub())));
    case Kind::Or: {
      bool l = sat(m, f.left(), restrict(a, free_vars(f.left())));
      bool r = sat(m, f.right(), restrict(a, free_vars(f.right())));
      return l || r;
    }
    case Kind::Exists: {
      bool any = false;
      auto fv = free_vars(f.sub());
      for (auto& x : m.domain) {
        Env b = restrict(a, free_vars(f));
        if (fv.count(f.var().name())) b[f.var().name()] = x;
        if (sat(m, f.sub(), b)) any = true;
      }
      return any;
    }
  }
  return false;
}

// Calls fn for every map from vars into the domain.
inline void assignments(const std::vector<HFSet>& domain, const std::set<std::string>& vars,
                        const std::function<void(const Env&)>& fn) {
  std::vector<std::string> vs(vars.begin(), vars.end());
  std::function<void(std::size_t, Env&)> rec = [&](std::size_t i, Env& e) {
    if (i == vs.size()) {
      fn(e);
      return;
    }
    for (auto& x : domain) {
      e[vs[i]] = x;
      rec(i + 1, e);
    }
    e.erase(vs[i]);
  };
  Env e;
  rec(0, e);
}

inline tk::Assignment to_assignment(const Env& e) {
  tk::Assignment a;
  for (auto& [k, v] : e) a.set(tk::Var(k), v);
  return a;
}

}  // namespace oracle

#endif  // TK_TESTS_ORACLE_HPP_
