#include "tk/eval.hpp"

#include <stdexcept>
#include <deque>
#include <optional>
#include <vector>

#include "tk/enumerate.hpp"
#include "tk/error.hpp"
#include "tk/parse.hpp"
#include "tk/syntax.hpp"

namespace tk {

namespace {

class Evaluator {
 public:
  Evaluator(const Structure& m, const EvalOptions& opt) : m_(m), opt_(opt) {}

  void bind(Var v, Elem e) {
    vars_.push_back(v);
    vals_.push_back(e);
  }

  bool eval(const Formula& f) {
    if (++steps_ > opt_.budget)
      throw BudgetExceeded("evaluation budget of " + std::to_string(opt_.budget) + " steps exceeded");
    switch (f.kind()) {
      case Kind::Mem:
        return m_.in(resolve(f.lhs()), resolve(f.rhs()));
      case Kind::Eq:
        return resolve(f.lhs()) == resolve(f.rhs());
      case Kind::Pred:
        return pred(f);
      case Kind::Prov:
        return prov(f);
      case Kind::Not:
        return !eval(f.sub());
      case Kind::Or: {
        bool l = eval(f.left());
        if (l && opt_.mode == EvalMode::Fast) return true;
        bool r = eval(f.right());
        return l || r;
      }
      case Kind::Exists: {
        if (opt_.memoize) return memo_exists(f);
        return exists(f);
      }
    }
    return false;
  }

 private:
  bool exists(const Formula& f) {
    bool any = false;
    std::size_t slot = vars_.size();
    bind(f.var(), 0);
    for (Elem e = 0; e < m_.size(); ++e) {
      vals_[slot] = e;
      if (eval(f.sub())) {
        any = true;
        if (opt_.mode == EvalMode::Fast) break;
      }
    }
    vars_.pop_back();
    vals_.pop_back();
    return any;
  }

  bool memo_exists(const Formula& f) {
    auto fv = f.free_vars();
    std::size_t n = m_.size();
    std::size_t cells = 1;
    for (std::size_t i = 0; i < fv.size(); ++i) {
      cells *= n;
      if (cells > (1u << 16)) return exists(f);
    }
    if (!memo_) memo_.emplace();
    std::vector<std::int8_t>* table = nullptr;
    for (auto& [node, t] : *memo_)
      if (node == f.node()) table = &t;
    if (!table) {
      memo_->emplace_back(f.node(), std::vector<std::int8_t>(cells, -1));
      table = &memo_->back().second;
    }
    std::size_t idx = 0;
    for (Var v : fv) idx = idx * n + resolve(Term(v));
    auto& cell = (*table)[idx];
    if (cell < 0) cell = exists(f) ? 1 : 0;
    return cell == 1;
  }

  Elem resolve(const Term& t) {
    if (t.is_var()) {
      for (std::size_t i = vars_.size(); i-- > 0;)
        if (vars_[i] == t.var()) return vals_[i];
      throw Error("unassigned variable " + t.var().name());
    }
    auto e = m_.find(t.value());
    if (!e) throw Error("constant #" + t.value().to_string() + " does not denote an element of " + m_.describe());
    return *e;
  }

  bool pred(const Formula& f) {
    Elem e = resolve(f.rhs());
    if (f.symbol() == fin_symbol()) return true;
    if (opt_.interp) {
      auto it = opt_.interp->predicates.find(f.symbol());
      if (it != opt_.interp->predicates.end()) return it->second.count(m_.label(e)) > 0;
    }
    throw Error("no interpretation for predicate " + f.symbol().name());
  }

  bool prov(const Formula& f) {
    if (!opt_.interp || !opt_.interp->prov)
      throw Error("Prov placeholder " + f.symbol().name() + " needs a grounding");
    Elem e = resolve(f.lhs());
    Formula q = f.sub();
    if (q.free(f.var())) q = close(q, Assignment{{f.var(), m_.label(e)}});
    return opt_.interp->prov(f.symbol(), q);
  }

  const Structure& m_;
  const EvalOptions& opt_;
  std::uint64_t steps_ = 0;
  boost::container::small_vector<Var, 16> vars_;
  boost::container::small_vector<Elem, 16> vals_;
  // Created on first use; deque keeps cell references stable.
  std::optional<std::deque<std::pair<const FormulaNode*, std::vector<std::int8_t>>>> memo_;
};

}  // namespace

bool sat(const Structure& m, const Formula& f, const Assignment& a, const EvalOptions& options) {
  if (!a.total_for(f.free_vars()))
    throw Error("assignment domain does not match the free variables of " + render(f));
  Evaluator ev(m, options);
  for (auto& [v, x] : a.entries()) {
    auto e = m.find(x);
    if (!e) throw Error("value " + x.to_string() + " of " + v.name() + " is not an element of " + m.describe());
    ev.bind(v, *e);
  }
  return ev.eval(f);
}

TruthClassView::TruthClassView(Structure m, unsigned depth_bound, bool with_constants,
                               const Interpretation* interp)
    : m_(std::move(m)), k_(depth_bound), constants_(with_constants), interp_(interp) {
  if (depth_bound < 1) throw Error("diagram depth bound must be at least 1");
}

bool TruthClassView::in_family(const Formula& s) const {
  if (!s.sentence() || s.depth() > k_) return false;
  if (!interp_ && !lset_only(s)) return false;
  auto cs = constants(s);
  if (!constants_ && !cs.empty()) return false;
  for (auto& c : cs)
    if (!m_.find(c)) return false;
  return true;
}

bool TruthClassView::holds(const Formula& s) const {
  if (!in_family(s)) return false;
  EvalOptions opt;
  opt.interp = interp_;
  return sat(m_, s, {}, opt);
}

TruthClassView diagram(const Structure& m, unsigned depth_bound, bool with_constants) {
  return TruthClassView(m, depth_bound, with_constants);
}

bool reflects(unsigned N, unsigned a, const Formula& f) {
  if (a < 1 || a > N) throw Error("reflection needs 1 <= a <= N");
  if (N > max_stage()) throw Error("stage " + std::to_string(N) + " exceeds the cap");
  if (!constants(f).empty()) throw Error("reflection formulas must be constant-free");
  Structure vn = Structure::stage(N);
  Structure va = Structure::stage(a);
  Var x = fresh_var("X", all_vars(f));
  Formula rel = relativize(f, x);
  // V_a as an element of V_N: the set of all codes below tower(a).
  HFSet va_set = HFSet::from_code((BigNat(1) << tower(a)) - 1);
  bool all = true;
  for_each_assignment(va, f.free_vars(), [&](const Assignment& alpha) {
    bool outer = sat(vn, f, alpha);
    bool inner = sat(va, f, alpha);
    if (a < N) {
      Assignment ext = alpha;
      if (rel.free(x)) ext.set(x, va_set);
      if (sat(vn, rel, ext) != inner)
        throw std::logic_error("relativization disagrees with substructure evaluation for " + render(f));
    }
    if (outer != inner) all = false;
  });
  return all;
}

std::optional<unsigned> least_reflecting(unsigned N, const Formula& f, unsigned a0) {
  for (unsigned a = a0 + 1; a <= N; ++a)
    if (reflects(N, a, f)) return a;
  return std::nullopt;
}

}  // namespace tk
