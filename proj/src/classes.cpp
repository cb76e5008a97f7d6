#include "tk/classes.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "tk/enumerate.hpp"
#include "tk/error.hpp"
#include "tk/parse.hpp"
#include "tk/syntax.hpp"

namespace tk {

bool EntryLess::operator()(const Entry& a, const Entry& b) const {
  if (a.first != b.first) return formula_less(a.first, b.first);
  return a.second < b.second;
}

ExplicitTruth::ExplicitTruth(const TruthClass& t) : t_(&t) {
  for (auto& s : shaped_sentences(t.m, t.family)) shaped_.insert(s);
}

std::vector<Entry> sorted_entries(const SatClass& s) {
  std::vector<Entry> out(s.entries.begin(), s.entries.end());
  std::sort(out.begin(), out.end(), EntryLess());
  return out;
}

std::vector<Formula> sorted_sentences(const TruthClass& t) {
  std::vector<Formula> out(t.sentences.begin(), t.sentences.end());
  std::sort(out.begin(), out.end(), formula_less);
  return out;
}

namespace {

class Collector {
 public:
  void add(unsigned clause, const Formula& f, const Assignment& a, std::string msg) {
    report.violations.push_back({clause, f, a, std::move(msg)});
  }
  Report done() {
    std::stable_sort(report.violations.begin(), report.violations.end(), [](const Violation& a, const Violation& b) {
      if (a.clause != b.clause) return a.clause < b.clause;
      if (a.formula != b.formula) return formula_less(a.formula, b.formula);
      return a.assignment < b.assignment;
    });
    return std::move(report);
  }
  Report report;
};

bool atom_holds(const Structure& m, const Formula& f, const Assignment& a) { return sat(m, f, a); }

bool constants_in(const Structure& m, const Formula& f) {
  for (auto& c : constants(f))
    if (!m.find(c)) return false;
  return true;
}

// Clause (1) on the family itself. Returns the members that are usable for
// the compositional checks.
std::vector<Formula> check_family(const Structure& m, const Family& fam, Collector& out) {
  std::vector<Formula> usable;
  for (auto& f : fam) {
    bool ok = true;
    if (!lset_only(f)) {
      out.add(1, f, {}, "family member is not an L_set formula");
      ok = false;
    } else if (!constants_in(m, f)) {
      out.add(1, f, {}, "family member has a constant outside " + m.describe());
      ok = false;
    }
    for (auto& g : f.immediate_subformulas())
      if (!fam.count(g)) {
        out.add(1, f, {}, "immediate subformula " + render(g) + " is not in the family");
        ok = false;
      }
    if (ok) usable.push_back(f);
  }
  return usable;
}

std::string verdict(bool in, bool want) {
  return std::string(in ? "member" : "non-member") + " but the clause requires " + (want ? "membership" : "non-membership");
}

}  // namespace

Report validate_class(const SatClass& c, std::uint64_t budget) {
  Collector out;
  const Structure& m = c.m;
  auto usable = check_family(m, c.family, out);
  for (auto& e : c.entries) {
    const auto& [f, a] = e;
    if (!c.family.count(f)) {
      out.add(1, f, a, "entry formula is not in the family");
      continue;
    }
    if (!a.total_for(f.free_vars())) {
      out.add(1, f, a, "assignment is not an assignment for the formula");
      continue;
    }
    bool inside = true;
    for (auto& [v, x] : a.entries()) inside = inside && m.find(x).has_value();
    if (!inside)
      out.add(1, f, a, "assignment takes a value outside " + m.describe());
  }
  auto in = [&](const Formula& f, const Assignment& a) { return c.entries.count({f, a}) > 0; };
  std::uint64_t probes = 0;
  for (auto& f : usable) {
    for_each_assignment(m, f.free_vars(), [&](const Assignment& a) {
      bool here = in(f, a);
      bool want = false;
      unsigned clause = 0;
      switch (f.kind()) {
        case Kind::Mem:
        case Kind::Eq:
          clause = 2;
          want = atom_holds(m, f, a);
          break;
        case Kind::Not:
          clause = 3;
          want = !in(f.sub(), a);
          break;
        case Kind::Or:
          clause = 4;
          want = in(f.left(), a.restrict(f.left().free_vars())) || in(f.right(), a.restrict(f.right().free_vars()));
          break;
        case Kind::Exists: {
          clause = 5;
          const Formula& body = f.sub();
          if (!body.free(f.var())) {
            want = in(body, a);
            break;
          }
          Assignment b = a;
          for (auto& x : m.labels()) {
            if (++probes > budget)
              throw BudgetExceeded("validation budget of " + std::to_string(budget) + " probes exceeded");
            b.set(f.var(), x);
            if (in(body, b)) {
              want = true;
              break;
            }
          }
          break;
        }
        default:
          return;
      }
      if (here != want) out.add(clause, f, a, "pair is a " + verdict(here, want));
    });
  }
  return out.done();
}

Report validate_class(const TruthClass& c, std::uint64_t budget) {
  Collector out;
  const Structure& m = c.m;
  auto usable = check_family(m, c.family, out);
  Family closed(usable.begin(), usable.end());
  auto shaped = shaped_sentences(m, closed);
  SentenceSet shaped_set(shaped.begin(), shaped.end());
  for (auto& s : c.sentences)
    if (!shaped_set.count(s)) out.add(1, s, {}, "member is not a sentence shaped by the family");
  auto in = [&](const Formula& s) { return c.sentences.count(s) > 0; };
  std::uint64_t probes = 0;
  for (auto& s : shaped) {
    bool here = in(s);
    bool want = false;
    unsigned clause = 0;
    switch (s.kind()) {
      case Kind::Mem:
      case Kind::Eq:
        clause = 2;
        want = atom_holds(m, s, {});
        break;
      case Kind::Not:
        clause = 3;
        want = !in(s.sub());
        break;
      case Kind::Or:
        clause = 4;
        want = in(s.left()) || in(s.right());
        break;
      case Kind::Exists:
        clause = 5;
        for (auto& x : m.labels()) {
          if (++probes > budget)
            throw BudgetExceeded("validation budget of " + std::to_string(budget) + " probes exceeded");
          if (in(instantiate(s, x))) {
            want = true;
            break;
          }
        }
        break;
      default:
        continue;
    }
    if (here != want) out.add(clause, s, {}, "sentence is a " + verdict(here, want));
  }
  return out.done();
}

std::vector<std::pair<Entry, Entry>> is_extensional(const SatClass& s) {
  std::map<std::string, std::vector<std::pair<Entry, bool>>> groups;
  for (auto& f : s.family) {
    if (!lset_only(f) || !constants_in(s.m, f)) continue;
    for_each_assignment(s.m, f.free_vars(), [&](const Assignment& a) {
      groups[sim_key(f, a)].push_back({{f, a}, s.contains(f, a)});
    });
  }
  std::vector<std::pair<Entry, Entry>> out;
  for (auto& [key, members] : groups) {
    const auto& [rep, bit] = members.front();
    for (std::size_t i = 1; i < members.size(); ++i)
      if (members[i].second != bit) out.push_back({rep, members[i].first});
  }
  return out;
}

namespace {

void require_valid(const Report& r, const char* what) {
  if (r.ok()) return;
  const Violation& v = r.violations.front();
  throw Error(std::string(what) + " violates clause (" + std::to_string(v.clause) + ") at " + render(v.formula) +
              (v.assignment.empty() ? "" : " " + v.assignment.to_string()) + ": " + v.message);
}

}  // namespace

TruthClass convert(const SatClass& s) {
  require_valid(validate_class(s), "satisfaction class");
  auto bad = is_extensional(s);
  if (!bad.empty())
    throw Error("satisfaction class is not extensional: " + render(bad[0].first.first) + " " +
                bad[0].first.second.to_string() + " vs " + render(bad[0].second.first) + " " +
                bad[0].second.second.to_string());
  TruthClass t{s.m, s.family, {}};
  for (auto& [f, a] : s.entries) t.sentences.insert(close(f, a));
  if (!validate_class(t).ok()) throw std::logic_error("converted truth class fails validation");
  return t;
}

SatClass convert(const TruthClass& t) {
  require_valid(validate_class(t), "truth class");
  SatClass s{t.m, t.family, {}};
  for (auto& f : t.family)
    for_each_assignment(t.m, f.free_vars(), [&](const Assignment& a) {
      if (t.contains(close(f, a))) s.entries.insert({f, a});
    });
  if (!validate_class(s).ok() || !is_extensional(s).empty())
    throw std::logic_error("converted satisfaction class fails validation");
  return s;
}

Family depth_family(unsigned k, const std::vector<Var>& vars) {
  if (k == 0) return {};
  PoolSpec spec;
  spec.vars = vars;
  FormulaPool pool(spec, k);
  auto all = pool.up_to(k);
  return Family(all.begin(), all.end());
}

Family subformula_closure(const std::vector<Formula>& fs) {
  Family out;
  for (auto& f : fs)
    for (auto& g : subformulas(f)) out.insert(g);
  return out;
}

std::vector<Formula> shaped_sentences(const Structure& m, const Family& fam) {
  std::vector<Formula> out;
  SentenceSet seen;
  for (auto& f : fam) {
    if (!constants_in(m, f)) continue;
    for_each_assignment(m, f.free_vars(), [&](const Assignment& a) {
      Formula s = close(f, a);
      if (seen.insert(s).second) out.push_back(s);
    });
  }
  return out;
}

SatClass induced_sat(const Structure& m, Family fam) {
  SatClass s{m, std::move(fam), {}};
  for (auto& f : s.family)
    for_each_assignment(m, f.free_vars(), [&](const Assignment& a) {
      if (sat(m, f, a)) s.entries.insert({f, a});
    });
  return s;
}

TruthClass induced_truth(const Structure& m, Family fam) {
  TruthClass t{m, std::move(fam), {}};
  for (auto& s : shaped_sentences(m, t.family))
    if (sat(m, s, {})) t.sentences.insert(s);
  return t;
}

TruthClass induced_truth(const Structure& m, unsigned k, const std::vector<Var>& vars) {
  return induced_truth(m, depth_family(k, vars));
}

SatClass restrict_class(const SatClass& s, const Family& fam) {
  SatClass out{s.m, fam, {}};
  for (auto& e : s.entries)
    if (fam.count(e.first)) out.entries.insert(e);
  return out;
}

TruthClass restrict_class(const TruthClass& t, const Family& fam) {
  TruthClass out{t.m, fam, {}};
  for (auto& s : shaped_sentences(t.m, fam))
    if (t.contains(s)) out.sentences.insert(s);
  return out;
}

void for_each_toggle(const SatClass& s, const std::function<void(const SatClass&, const Entry&)>& fn) {
  SatClass work = s;
  for (auto& f : s.family)
    for_each_assignment(s.m, f.free_vars(), [&](const Assignment& a) {
      Entry e{f, a};
      auto it = work.entries.find(e);
      if (it != work.entries.end()) {
        work.entries.erase(it);
        fn(work, e);
        work.entries.insert(e);
      } else {
        work.entries.insert(e);
        fn(work, e);
        work.entries.erase(e);
      }
    });
}

void for_each_toggle(const TruthClass& t, const std::function<void(const TruthClass&, const Formula&)>& fn) {
  TruthClass work = t;
  for (auto& s : shaped_sentences(t.m, t.family)) {
    auto it = work.sentences.find(s);
    if (it != work.sentences.end()) {
      work.sentences.erase(it);
      fn(work, s);
      work.sentences.insert(s);
    } else {
      work.sentences.insert(s);
      fn(work, s);
      work.sentences.erase(s);
    }
  }
}

Formula pathology_D(unsigned k, const Formula& f) {
  if (k == 0) throw Error("D(k, f) needs k >= 1");
  Formula d = disj(f, f);
  for (unsigned i = 1; i < k; ++i) d = disj(d, d);
  return d;
}

Coding ackermann_coding(const Structure& m, std::vector<Formula> pool) {
  std::sort(pool.begin(), pool.end(), formula_less);
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (pool.size() > m.size())
    throw Error("a pool of " + std::to_string(pool.size()) + " formulas cannot be coded injectively into " +
                m.describe());
  return [m, pool](const Formula& f) {
    auto it = std::lower_bound(pool.begin(), pool.end(), f, formula_less);
    if (it == pool.end() || *it != f) throw Error("formula outside the coded pool: " + render(f));
    return m.label(static_cast<Elem>(it - pool.begin()));
  };
}

Formula diagonal_formula(const Formula& s) {
  auto fv = s.free_vars();
  if (fv.size() != 2) throw Error("S must have exactly two free variables, got " + std::to_string(fv.size()));
  Var u = fv[0], w = fv[1];
  Formula body = rename_bound(s, {u, w});
  auto diag = substitute(body, w, Term(u));
  if (!diag) throw std::logic_error("capture while forming S(u,u)");
  return neg(*diag);
}

DiagonalWitness diagonal_refute(const Structure& m, const Formula& s, const Coding& coding) {
  Formula r_formula = diagonal_formula(s);
  Var u = s.free_vars()[0], w = s.free_vars()[1];
  HFSet r = coding(r_formula);
  if (!m.find(r)) throw Error("code " + r.to_string() + " is not an element of " + m.describe());
  DiagonalWitness out{s, r_formula, r, false, false};
  out.s_rr = sat(m, s, Assignment{{u, r}, {w, r}});
  out.r_r = sat(m, r_formula, Assignment{{u, r}});
  if (out.s_rr == out.r_r) throw std::logic_error("R(r) agrees with S(r,r) for " + render(s));
  return out;
}

}  // namespace tk
