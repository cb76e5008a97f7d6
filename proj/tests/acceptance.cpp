// Acceptance run: one line per criterion, PASS or FAIL, with the measured
// time next to the expected bound. Pass an id list to run a subset.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "support/oracle.hpp"
#include "support/random_formula.hpp"
#include "tk/classes.hpp"
#include "tk/enumerate.hpp"
#include "tk/eval.hpp"
#include "tk/hierarchy.hpp"
#include "tk/parse.hpp"
#include "tk/proof.hpp"
#include "tk/schemes.hpp"
#include "tk/syntax.hpp"

using namespace tk;

namespace {

const Var x("x"), y("y"), z("z"), P("P");

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double expected_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// First few mismatches, for the detail column.
struct Mismatches {
  std::size_t count = 0;
  std::string first;
  void add(const std::string& what) {
    if (count++ == 0) first = what;
  }
  std::string str() const { return count ? fmt(", %zu mismatches, first: %s", count, first.c_str()) : ""; }
};

std::vector<Formula> as_vector(const Family& f) { return {f.begin(), f.end()}; }

// Closed instances of the depth <= d formulas over {x}.
std::vector<Formula> sentence_pool(const Structure& m, unsigned d) {
  return closures(m, as_vector(depth_family(d, {x})));
}

// Truth tables over stage(3) for formulas in x, y: bit 4*ix + iy.
class TableOracle {
 public:
  explicit TableOracle(const Structure& m) : m_(m), om_(oracle::standard(3)) {}

  // Naive recursion on every assignment.
  std::uint16_t direct(const Formula& f) {
    std::uint16_t t = 0;
    for (unsigned ix = 0; ix < 4; ++ix)
      for (unsigned iy = 0; iy < 4; ++iy) {
        oracle::Env env{{"x", m_.label(ix)}, {"y", m_.label(iy)}};
        if (oracle::sat(om_, f, oracle::restrict(env, oracle::free_vars(f)))) t |= bit(ix, iy);
      }
    return t;
  }

  // The same clauses applied to the children's tables.
  std::uint16_t compose(const Formula& f) const {
    switch (f.kind()) {
      case Kind::Not:
        return static_cast<std::uint16_t>(~at(f.sub()));
      case Kind::Or:
        return at(f.left()) | at(f.right());
      case Kind::Exists: {
        std::uint16_t c = at(f.sub()), t = 0;
        for (unsigned ix = 0; ix < 4; ++ix)
          for (unsigned iy = 0; iy < 4; ++iy)
            for (unsigned e = 0; e < 4; ++e) {
              bool xv = f.var() == x, yv = f.var() == y;
              if (c & bit(xv ? e : ix, yv ? e : iy)) t |= bit(ix, iy);
            }
        return t;
      }
      default:
        throw std::logic_error("compose on an atom");
    }
  }

  void store(const Formula& f, std::uint16_t t) { tables_[f.node()] = t; }
  std::uint16_t at(const Formula& f) const { return tables_.at(f.node()); }
  static std::uint16_t bit(unsigned ix, unsigned iy) { return static_cast<std::uint16_t>(1u << (4 * ix + iy)); }

 private:
  const Structure& m_;
  oracle::Model om_;
  std::unordered_map<const FormulaNode*, std::uint16_t> tables_;
};

// Assignments for a free-variable set within {x, y}, with their table bit.
struct AssignmentSet {
  std::vector<std::pair<Assignment, std::uint16_t>> items[4];

  explicit AssignmentSet(const Structure& m) {
    for (unsigned mask = 0; mask < 4; ++mask)
      for (unsigned ix = 0; ix < 4; ++ix)
        for (unsigned iy = 0; iy < 4; ++iy) {
          if ((!(mask & 1) && ix) || (!(mask & 2) && iy)) continue;
          Assignment a;
          if (mask & 1) a.set(x, m.label(ix));
          if (mask & 2) a.set(y, m.label(iy));
          items[mask].emplace_back(a, TableOracle::bit(ix, iy));
        }
  }

  const auto& for_formula(const Formula& f) const {
    unsigned mask = (f.free(x) ? 1 : 0) | (f.free(y) ? 2 : 0);
    return items[mask];
  }
};

Outcome c1_evaluator() {
  Structure m = Structure::stage(3);
  FormulaPool pool(PoolSpec{{x, y}}, 3);
  TableOracle oracle(m);
  AssignmentSet as(m);
  EvalOptions full;
  full.mode = EvalMode::Oracle;
  Mismatches bad;
  std::uint64_t formulas = 0, checks = 0;
  auto check = [&](const Formula& f, std::uint16_t t, bool both_modes) {
    ++formulas;
    for (auto& [a, b] : as.for_formula(f)) {
      bool want = t & b;
      ++checks;
      if (sat(m, f, a) != want) bad.add(render(f) + " [" + a.to_string() + "]");
      if (both_modes && sat(m, f, a, full) != want) bad.add("oracle mode " + render(f));
    }
  };
  for (unsigned d = 1; d <= 3; ++d)
    for (auto& f : pool.level(d)) {
      std::uint16_t t = oracle.direct(f);
      if (d > 1 && oracle.compose(f) != t) bad.add("table composition " + render(f));
      oracle.store(f, t);
      check(f, t, true);
    }
  std::uint64_t n4 = 0;
  pool.for_each_next([&](const Formula& f) { check(f, oracle.compose(f), ++n4 % 101 == 0); });
  return {bad.count == 0, fmt("%llu formulas over {x,y} (depth 4: %llu), %llu evaluations%s",
                              (unsigned long long)formulas, (unsigned long long)n4, (unsigned long long)checks,
                              bad.str().c_str())};
}

Outcome c2_true_k() {
  Structure m = Structure::stage(3);
  FormulaPool pool(PoolSpec{{x, y}}, 3);
  Mismatches bad;
  std::uint64_t n = 0, calls = 0;
  auto check = [&](const Formula& s) {
    ++n;
    bool want = sat(m, s, {});
    for (unsigned k = std::max(1u, s.depth()); k <= 4; ++k) {
      ++calls;
      if (true_k(m, k, s) != want) bad.add(render(s) + fmt(" k=%u", k));
    }
  };
  for (auto& s : closures(m, pool.up_to(3))) check(s);
  pool.for_each_next([&](const Formula& f) {
    if (f.sentence()) check(f);
  });
  return {bad.count == 0, fmt("%llu sentences, %llu true_k calls%s", (unsigned long long)n,
                              (unsigned long long)calls, bad.str().c_str())};
}

bool same(const SatClass& a, const SatClass& b) { return a.family == b.family && a.entries == b.entries; }
bool same(const TruthClass& a, const TruthClass& b) { return a.family == b.family && a.sentences == b.sentences; }

Outcome c3_round_trips() {
  Mismatches bad;
  std::size_t trips = 0;
  auto trip = [&](const SatClass& s, const TruthClass& t, const std::string& what) {
    trips += 2;
    if (!same(convert(convert(s)), s)) bad.add("S(T(S)) " + what);
    if (!same(convert(convert(t)), t)) bad.add("T(S(T)) " + what);
  };
  Family fam = depth_family(3, {x, y});
  std::vector<Formula> members(fam.begin(), fam.end());
  std::mt19937_64 rng(20240601);
  for (unsigned n : {2u, 3u}) {
    Structure m = Structure::stage(n);
    SatClass s = induced_sat(m, fam);
    TruthClass t = induced_truth(m, fam);
    trip(s, t, fmt("stage %u depth 3", n));
    for (int i = 0; i < 50; ++i) {
      std::vector<Formula> picks;
      std::size_t k = 1 + rng() % 6;
      for (std::size_t j = 0; j < k; ++j) picks.push_back(members[rng() % members.size()]);
      Family sub = subformula_closure(picks);
      trip(restrict_class(s, sub), restrict_class(t, sub), fmt("stage %u restriction %d", n, i));
    }
  }
  return {bad.count == 0, fmt("%zu round trips (2 induced, 100 seeded restrictions per direction)%s", trips,
                              bad.str().c_str())};
}

Outcome c4_mutations() {
  Structure m = Structure::stage(2);
  Family fam = depth_family(2, {x, y});
  std::size_t toggles = 0, detected = 0;
  Mismatches missed;
  SatClass s = induced_sat(m, fam);
  if (!validate_class(s).ok()) missed.add("induced sat class does not validate");
  for_each_toggle(s, [&](const SatClass& c, const Entry& e) {
    ++toggles;
    if (!validate_class(c).ok())
      ++detected;
    else
      missed.add(render(e.first) + " [" + e.second.to_string() + "]");
  });
  TruthClass t = induced_truth(m, fam);
  if (!validate_class(t).ok()) missed.add("induced truth class does not validate");
  for_each_toggle(t, [&](const TruthClass& c, const Formula& f) {
    ++toggles;
    if (!validate_class(c).ok())
      ++detected;
    else
      missed.add(render(f));
  });
  return {missed.count == 0 && toggles > 0,
          fmt("%zu/%zu single-entry toggles detected%s", detected, toggles, missed.str().c_str())};
}

Outcome c5_properties() {
  std::string detail;
  bool pass = true;
  for (unsigned n : {2u, 3u}) {
    Structure m = Structure::stage(n);
    TruthClassView t = diagram(m, 1000, true);
    auto pool = sentence_pool(m, 2);
    std::size_t seqs = 0, violations = 0;
    for (auto p : {TruthProperty::DCOut, TruthProperty::DCIn, TruthProperty::PI, TruthProperty::SPI}) {
      auto r = check_truth_property(t, p, pool, 4);
      seqs = r.checked;
      violations += r.violations.size();
      if (!r.ok()) detail += " " + to_string(p) + " violated on " + render(r.violations[0].sequence[0]);
    }
    GRefConfig cfg;
    cfg.mode = GRefMode::Prop;
    cfg.budget = 10'000;
    // Implications between pool sentences give modus ponens something to do.
    std::vector<Formula> gpool = pool;
    for (auto& a : pool)
      for (auto& b : pool) gpool.push_back(imp(a, b));
    auto g = check_gref(t, gpool, cfg);
    violations += g.failures.size();
    pass = pass && violations == 0;
    detail += fmt("%sstage %u: %zu sentences, %zu sequences x 4 properties, GRef on %zu sentences: %zu proofs in %llu steps%s, "
                  "%zu violations",
                  detail.empty() ? "" : "; ", n, pool.size(), seqs, gpool.size(), g.proofs, (unsigned long long)g.steps,
                  g.exhausted ? " (budget reached)" : "", violations);
  }
  return {pass, detail};
}

Outcome c6_pathology() {
  Structure m = Structure::stage(3);
  testgen::Gen gen(66, {x, y}, m.labels());
  std::vector<Formula> seeds;
  while (seeds.size() < 20) {
    Formula f = gen.formula(3);
    if (f.sentence()) seeds.push_back(f);
  }
  Mismatches bad;
  unsigned truths = 0;
  for (auto& f : seeds) {
    bool want = sat(m, f, {});
    truths += want;
    for (unsigned k = 1; k <= 20; ++k)
      if (sat(m, pathology_D(k, f), {}) != want) bad.add(render(f) + fmt(" k=%u", k));
  }
  return {bad.count == 0, fmt("20 sentences (%u true) x k=1..20%s", truths, bad.str().c_str())};
}

Outcome c7_diagonal() {
  Structure m = Structure::stage(3);
  oracle::Model om = oracle::standard(3);
  std::size_t binary = 0, cases = 0, refuted = 0;
  Mismatches bad;
  for (auto& s : depth_family(3, {x, y})) {
    if (s.free_vars().size() != 2) continue;
    ++binary;
    for (auto& a : m.labels()) {
      ++cases;
      Coding code = [&a](const Formula&) { return a; };
      auto w = diagonal_refute(m, s, code);
      bool s_rr = oracle::sat(om, s, {{"x", w.r}, {"y", w.r}});
      if (w.s_rr != w.r_r && w.s_rr == s_rr)
        ++refuted;
      else
        bad.add(render(s) + " r=" + a.to_string());
    }
  }
  return {bad.count == 0 && cases > 0,
          fmt("%zu binary S x %zu codings: %zu/%zu refuted%s", binary, m.size(), refuted, cases, bad.str().c_str())};
}

Outcome c8_reflection() {
  std::vector<Formula> fs;
  std::set<Formula, FormulaLess> seen;
  PoolSpec bounded{{x, y}};
  bounded.bounded = true;
  for (auto& f : FormulaPool(bounded, 3).up_to(3))
    if (seen.insert(f).second) fs.push_back(f);
  for (auto& f : depth_family(3, {x, y}))
    if (seen.insert(f).second) fs.push_back(f);
  std::size_t delta0 = 0, calls = 0;
  Mismatches bad;
  for (auto& f : fs) {
    if (!is_delta0(f)) continue;
    ++delta0;
    for (unsigned a = 1; a <= 4; ++a) {
      ++calls;
      if (!reflects(4, a, f)) bad.add(render(f) + fmt(" a=%u", a));
    }
  }
  Formula sigma = parse("(ex x (mem z x))");
  bool fails3 = !reflects(4, 3, sigma);
  bool holds4 = reflects(4, 4, sigma);
  return {bad.count == 0 && fails3 && holds4,
          fmt("%zu delta0 formulas, %zu reflects calls; ex x (z in x): a=3 %s, a=4 %s%s", delta0, calls,
              fails3 ? "fails" : "HOLDS", holds4 ? "holds" : "FAILS", bad.str().c_str())};
}

Outcome c9_schemes() {
  EvalOptions memo;
  memo.memoize = true;
  std::string detail;
  bool pass = true;
  for (auto tag : {SchemeTag::Sep, SchemeTag::Coll, SchemeTag::Repl, SchemeTag::Found}) {
    Family fam = depth_family(3, template_vars(tag));
    std::vector<SchemeInstance> inst;
    for (auto& f : fam) inst.push_back(gen_scheme(tag, f));
    std::string counts, example;
    for (unsigned n = 1; n <= 4; ++n) {
      Structure m = Structure::stage(n);
      std::size_t fails = 0;
      for (auto& i : inst)
        if (!sat(m, i.sentence, {}, memo) && fails++ == 0 && example.empty())
          example = fmt(" (e.g. %s at n=%u)", render(i.templ).c_str(), n);
      pass = pass && fails == 0;
      counts += fmt(" %zu", fails);
    }
    detail += fmt("; %s %zu templates, false at n=1..4:", to_string(tag).c_str(), fam.size()) + counts + example;
  }
  return {pass, detail.substr(2)};
}

Outcome c10_delta0fin() {
  Structure m = Structure::stage(3);
  PoolSpec spec{{x, y}};
  spec.predicates = {P};
  spec.bounded = true;
  auto fs = FormulaPool(spec, 3).up_to(3);
  std::mt19937_64 rng(1010);
  std::vector<Interpretation> interps(20);
  for (auto& in : interps) {
    auto& ext = in.predicates[P];
    for (auto& e : m.labels())
      if (rng() & 1) ext.insert(e);
  }
  Mismatches bad;
  std::uint64_t checks = 0;
  std::size_t delta0 = 0;
  for (auto& f : fs) {
    if (!is_delta0(f)) {
      bad.add("not delta0: " + render(f));
      continue;
    }
    ++delta0;
    Formula g = delta0fin(f);
    for (auto& in : interps) {
      EvalOptions opt;
      opt.interp = &in;
      for_each_assignment(m, f.free_vars(), [&](const Assignment& a) {
        ++checks;
        if (sat(m, f, a, opt) != sat(m, g, a, opt)) bad.add(render(f) + " [" + a.to_string() + "]");
      });
    }
  }
  return {bad.count == 0, fmt("%zu delta0 formulas in L(P) x 20 extensions of P, %llu evaluations%s", delta0,
                              (unsigned long long)checks, bad.str().c_str())};
}

Outcome c11_theta_psi() {
  Structure m = Structure::stage(3);
  auto pool = sentence_pool(m, 2);
  std::unordered_map<Formula, bool> truth;
  for (auto& s : pool) truth[s] = sat(m, s, {});
  std::size_t seqs = 0;
  Mismatches bad;
  for_each_sequence(pool, 3, [&](const std::vector<Formula>& s) {
    ++seqs;
    Formula th = theta_s(s);
    if (th.free_vars().size() != 1 || th.free_vars()[0] != x) bad.add("theta_s not unary in x");
    for (auto& e : m.labels()) {
      bool got = sat(m, th, Assignment{{x, e}});
      auto i = as_numeral(e);
      bool want = i && *i < s.size() && truth[s[*i]];
      if (got != want) bad.add("theta " + render(th) + " at " + e.to_string());
    }
    auto psi = psi_seq(s);
    if (psi.size() != s.size()) bad.add("psi length");
    // psi_0 fails when f_0 holds; psi_i (i > 0) fails exactly when f_i
    // fails and every earlier f_j holds.
    bool all = true, earlier_hold = true;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      bool v = sat(m, psi[i], {});
      bool want = i == 0 ? !truth[s[0]] : truth[s[i]] || !earlier_hold;
      if (v != want) bad.add(fmt("psi_%zu on ", i) + render(s[i]));
      earlier_hold = earlier_hold && truth[s[i]];
      all = all && v;
    }
    if (all != !truth[s[0]]) bad.add("psi conjunction vs not f0 on " + render(s[0]));
  });
  return {bad.count == 0, fmt("%zu sentences, %zu sequences%s", pool.size(), seqs, bad.str().c_str())};
}

Outcome c12_soundness() {
  Structure m = Structure::stage(3);
  auto pool = sentence_pool(m, 2);
  std::vector<Formula> truths;
  for (auto& s : pool)
    if (sat(m, s, {})) truths.push_back(s);
  FormulaPool quantified(PoolSpec{{x, y}}, 2);
  std::vector<Formula> goals = pool;
  for (auto& f : quantified.up_to(2)) {
    if (f.free_vars().size() == 1) {
      goals.push_back(forall(f.free_vars()[0], f));
      goals.push_back(exists(f.free_vars()[0], f));
    } else if (f.sentence()) {
      goals.push_back(f);
    }
  }
  std::mt19937_64 rng(1212);
  std::size_t calls = 0, proofs = 0, lines = 0;
  Mismatches bad;
  for (int round = 0; round < 600; ++round) {
    std::vector<Formula> prem;
    for (std::size_t k = rng() % 4; k > 0; --k) prem.push_back(truths[rng() % truths.size()]);
    Formula goal = goals[rng() % goals.size()];
    switch (rng() % 6) {
      case 4:
        goal = disj(goal, neg(goal));
        break;
      case 5:
        if (!prem.empty()) goal = disj(goal, prem[0]);
        break;
      case 1:
        goal = disj(goal, goals[rng() % goals.size()]);
        break;
      case 2:
        goal = imp(goals[rng() % goals.size()], goal);
        break;
      case 3:
        if (!prem.empty()) goal = imp(prem[0], goal);
        break;
    }
    ++calls;
    auto p = prove(prem, goal);
    if (!p) continue;
    ++proofs;
    lines += p->lines.size();
    auto c = check_proof(*p, prem);
    if (!c.ok) bad.add(fmt("check failed at line %u: ", c.line) + c.message);
    if (p->conclusion() != goal) bad.add("wrong conclusion for " + render(goal));
    if (!sat(m, p->conclusion(), {})) bad.add("false conclusion " + render(goal));
  }
  return {bad.count == 0 && proofs > 0,
          fmt("%zu prove calls, %zu proofs (%zu lines) checked and true%s", calls, proofs, lines, bad.str().c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all = {
      {1, "evaluator vs naive recursion", 120, c1_evaluator},
      {2, "True_k equals sat", 120, c2_true_k},
      {3, "class round trips", 60, c3_round_trips},
      {4, "mutation detection", 60, c4_mutations},
      {5, "DC/PI/SPI and GRef on the standard class", 180, c5_properties},
      {6, "pathological disjunctions", 10, c6_pathology},
      {7, "diagonal refuter", 120, c7_diagonal},
      {8, "delta0 reflection", 120, c8_reflection},
      {9, "schemes in finite stages", 180, c9_schemes},
      {10, "delta0fin faithfulness", 60, c10_delta0fin},
      {11, "theta_s and psi sequences", 60, c11_theta_psi},
      {12, "proof soundness", 60, c12_soundness},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  int failed = 0;
  for (auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s %2d %-42s %.1fs (expected < %.0fs%s) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, s,
                c.expected_s, s > c.expected_s ? ", slower" : "", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d failed\n", failed);
  return failed ? 1 : 0;
}
