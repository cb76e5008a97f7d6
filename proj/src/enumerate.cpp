#include "tk/enumerate.hpp"

#include <unordered_set>

namespace tk {

FormulaPool::FormulaPool(PoolSpec spec, unsigned levels) : spec_(std::move(spec)) {
  for (unsigned d = 0; d < levels; ++d) {
    std::vector<Formula> next;
    build_level([&](const Formula& f) { next.push_back(f); });
    levels_.push_back(std::move(next));
  }
}

std::vector<Term> FormulaPool::terms() const {
  std::vector<Term> ts;
  for (auto& v : spec_.vars) ts.emplace_back(v);
  for (auto& c : spec_.constants) ts.emplace_back(c);
  return ts;
}

std::vector<Formula> FormulaPool::up_to(unsigned d) const {
  std::vector<Formula> out;
  for (unsigned i = 1; i <= d && i <= levels(); ++i)
    out.insert(out.end(), level(i).begin(), level(i).end());
  return out;
}

void FormulaPool::build_level(const std::function<void(const Formula&)>& fn) const {
  auto ts = terms();
  if (levels_.empty()) {
    for (auto& a : ts)
      for (auto& b : ts) {
        if (spec_.mem) fn(mem(a, b));
        if (spec_.eq) fn(eq(a, b));
      }
    for (auto& p : spec_.predicates)
      for (auto& a : ts) fn(pred(p, a));
    return;
  }
  const auto& top = levels_.back();
  for (auto& f : top) fn(neg(f));
  // Disjunctions with at least one side on the top level.
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    for (auto& a : levels_[i]) {
      if (i + 1 == levels_.size()) {
        for (std::size_t j = 0; j < levels_.size(); ++j)
          for (auto& b : levels_[j]) fn(disj(a, b));
      } else {
        for (auto& b : top) fn(disj(a, b));
      }
    }
  }
  for (auto& v : spec_.vars) {
    for (auto& f : top) {
      if (!spec_.bounded) {
        fn(exists(v, f));
        continue;
      }
      for (auto& t : ts) {
        if (t.is_var() && t.var() == v) continue;
        fn(ex_in(v, t, f));
      }
    }
  }
}

void FormulaPool::for_each_next(const std::function<void(const Formula&)>& fn) const {
  build_level(fn);
}

std::uint64_t FormulaPool::count_next() const {
  std::uint64_t below = 0;
  for (std::size_t i = 0; i + 1 < levels_.size(); ++i) below += levels_[i].size();
  std::uint64_t top = levels_.empty() ? 0 : levels_.back().size();
  std::uint64_t nt = spec_.vars.size() + spec_.constants.size();
  if (levels_.empty())
    return nt * nt * ((spec_.mem ? 1 : 0) + (spec_.eq ? 1 : 0)) + spec_.predicates.size() * nt;
  std::uint64_t all = below + top;
  std::uint64_t q = spec_.bounded ? spec_.vars.size() * (nt - 1) : spec_.vars.size();
  return top + (all * all - below * below) + q * top;
}

void for_each_assignment(const Structure& m, std::span<const Var> vars,
                         const std::function<void(const Assignment&)>& fn) {
  if (vars.empty()) {
    fn(Assignment{});
    return;
  }
  if (m.size() == 0) return;
  std::vector<Elem> idx(vars.size(), 0);
  Assignment a;
  for (auto& v : vars) a.set(v, m.label(0));
  for (;;) {
    fn(a);
    std::size_t k = vars.size();
    while (k > 0) {
      --k;
      if (++idx[k] < m.size()) {
        a.set(vars[k], m.label(idx[k]));
        break;
      }
      idx[k] = 0;
      a.set(vars[k], m.label(0));
      if (k == 0) return;
    }
  }
}

std::vector<Formula> closures(const Structure& m, const std::vector<Formula>& fs) {
  std::vector<Formula> out;
  std::unordered_set<Formula> seen;
  for (auto& f : fs)
    for_each_assignment(m, f.free_vars(), [&](const Assignment& a) {
      Formula s = close(f, a);
      if (seen.insert(s).second) out.push_back(s);
    });
  return out;
}

}  // namespace tk
