#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "tk/parse.hpp"
#include "tk/proof.hpp"

namespace tk {

namespace {

struct BudgetExhausted {};

bool as_imp(const Formula& f, Formula* a, Formula* b) {
  if (f.kind() != Kind::Or || f.left().kind() != Kind::Not) return false;
  *a = f.left().sub();
  *b = f.right();
  return true;
}

bool as_forall(const Formula& f, Var* x, Formula* body) {
  if (f.kind() != Kind::Not || f.sub().kind() != Kind::Exists || f.sub().sub().kind() != Kind::Not) return false;
  *x = f.sub().var();
  *body = f.sub().sub().sub();
  return true;
}

// Derivations under hypotheses, as a DAG. Hypotheses are shared by formula;
// discharge() applies the deduction theorem to a node.
class Builder {
 public:
  explicit Builder(std::uint64_t limit) : limit_(limit) {}

  std::uint64_t spent() const { return steps_; }
  void charge(std::uint64_t n = 1) {
    steps_ += n;
    if (steps_ > limit_) throw BudgetExhausted{};
  }

  const Formula& f(int n) const { return nodes_[n].f; }

  int hyp(const Formula& g) {
    if (auto it = hyps_.find(g); it != hyps_.end()) return it->second;
    int n = add({g, R::Hyp});
    hyps_.emplace(g, n);
    return n;
  }
  int ax(const char* schema, const Formula& g) {
    if (auto it = axioms_.find(g); it != axioms_.end()) return it->second;
    Node nd{g, R::Ax};
    nd.schema = schema;
    int n = add(std::move(nd));
    axioms_.emplace(g, n);
    return n;
  }
  int prem(const Formula& g) {
    if (auto it = prems_.find(g); it != prems_.end()) return it->second;
    int n = add({g, R::Prem});
    prems_.emplace(g, n);
    return n;
  }
  int mp(int a, int b) {
    Formula x, y;
    if (!as_imp(f(b), &x, &y) || !(x == f(a))) throw std::logic_error("prover: ill-formed modus ponens");
    Node nd{y, R::MP};
    nd.a = a;
    nd.b = b;
    return add(std::move(nd));
  }
  int gen(int a, Var v) {
    Node nd{forall(v, f(a)), R::Gen};
    nd.a = a;
    nd.v = v;
    return add(std::move(nd));
  }

  int identity(const Formula& a) {
    return cached(identity_, a, [&] {
      Formula aa = imp(a, a);
      int s1 = ax("A2", imp(imp(a, imp(aa, a)), imp(imp(a, aa), aa)));
      int s2 = ax("A1", imp(a, imp(aa, a)));
      int s3 = mp(s2, s1);
      int s4 = ax("A1", imp(a, aa));
      return mp(s4, s3);
    });
  }

  // |- a -> f(n), with the hypothesis a removed from the dependencies.
  int discharge(const Formula& a, int n) {
    auto h = hyps_.find(a);
    if (h == hyps_.end() || !depends(n, h->second)) return mp(n, ax("A1", imp(f(n), imp(a, f(n)))));
    int hid = h->second;
    if (auto it = discharged_.find({hid, n}); it != discharged_.end()) return it->second;
    const Node nd = nodes_[n];
    int r;
    if (n == hid) {
      r = identity(a);
    } else if (nd.r == R::MP) {
      int d1 = discharge(a, nd.a);
      int d2 = discharge(a, nd.b);
      const Formula& d = f(nd.a);
      int a2 = ax("A2", imp(imp(a, imp(d, nd.f)), imp(imp(a, d), imp(a, nd.f))));
      r = mp(d1, mp(d2, a2));
    } else {
      throw std::logic_error("prover: cannot discharge through generalization");
    }
    discharged_.emplace(std::pair{hid, n}, r);
    return r;
  }

  // ~~b -> b
  int dne(const Formula& b) {
    return cached(dne_, b, [&] {
      Formula nb = neg(b), nnb = neg(nb);
      int h = hyp(nnb);
      int s1 = mp(h, ax("A1", imp(nnb, imp(nb, nnb))));
      int s2 = mp(s1, ax("A3", imp(imp(nb, nnb), imp(imp(nb, nb), b))));
      return discharge(nnb, mp(identity(nb), s2));
    });
  }

  // b -> ~~b
  int dni(const Formula& b) {
    return cached(dni_, b, [&] {
      Formula nb = neg(b), nnb = neg(nb), n3 = neg(nnb);
      int h = hyp(b);
      int s1 = mp(h, ax("A1", imp(b, imp(n3, b))));
      int a3 = ax("A3", imp(imp(n3, nb), imp(imp(n3, b), nnb)));
      return discharge(b, mp(s1, mp(dne(nb), a3)));
    });
  }

  // ~a -> (a -> b)
  int exfalso(const Formula& a, const Formula& b) {
    auto key = disj(a, b);
    return cached(exfalso_, key, [&] {
      Formula na = neg(a), nb = neg(b);
      int h1 = hyp(na);
      int h2 = hyp(a);
      int s1 = mp(h1, ax("A1", imp(na, imp(nb, na))));
      int s2 = mp(h2, ax("A1", imp(a, imp(nb, a))));
      int a3 = ax("A3", imp(imp(nb, na), imp(imp(nb, a), b)));
      int r = mp(s2, mp(s1, a3));
      return discharge(na, discharge(a, r));
    });
  }

  // (a -> ~a) -> ~a
  int self_neg(const Formula& a) {
    return cached(self_neg_, a, [&] {
      Formula na = neg(a), nna = neg(na);
      int h = hyp(imp(a, na));
      int h2 = hyp(nna);
      int x = mp(mp(h2, dne(a)), h);
      int d = discharge(nna, x);
      int a3 = ax("A3", imp(imp(nna, na), imp(imp(nna, a), na)));
      int r = mp(dne(a), mp(d, a3));
      return discharge(imp(a, na), r);
    });
  }

  // From p -> phi and ~p -> phi, phi.
  int cases(const Formula& p, const Formula& phi, int d1, int d2) {
    Formula nphi = neg(phi), np = neg(p);
    int hp = hyp(p);
    int c = mp(hp, d1);
    int t = mp(hyp(nphi), exfalso(phi, np));
    int dp = discharge(p, mp(c, t));
    int np2 = mp(dp, self_neg(p));
    int dd = discharge(nphi, mp(np2, d2));
    int a3 = ax("A3", imp(imp(nphi, nphi), imp(imp(nphi, phi), phi)));
    return mp(dd, mp(identity(nphi), a3));
  }

  // Proof of g or ~g from the literal hypotheses of val.
  int kalmar(const Formula& g, const std::unordered_map<Formula, bool>& val) {
    charge();
    switch (g.kind()) {
      case Kind::Not: {
        const Formula& s = g.sub();
        int n = kalmar(s, val);
        if (value(s, val)) return mp(n, dni(s));
        return n;
      }
      case Kind::Or: {
        const Formula& s = g.left();
        const Formula& c = g.right();
        bool vs = value(s, val), vc = value(c, val);
        if (vs || vc) {
          int t;
          if (vc) {
            t = mp(kalmar(c, val), ax("A1", imp(c, imp(neg(s), c))));
          } else {
            int nn = mp(kalmar(s, val), dni(s));
            t = mp(nn, exfalso(neg(s), c));
          }
          return mp(t, ax("O2", imp(f(t), g)));
        }
        int ns = kalmar(s, val);
        int nc = kalmar(c, val);
        int h = hyp(g);
        int t = mp(h, ax("O1", imp(g, disj(neg(neg(s)), c))));
        int cc = mp(ns, t);
        int r = mp(cc, mp(nc, exfalso(c, neg(g))));
        return mp(discharge(g, r), self_neg(g));
      }
      default:
        return hyp(val.at(g) ? g : neg(g));
    }
  }

  // Proof of the tautology phi, splitting on atoms[k..].
  int tautology(const Formula& phi, const std::vector<Formula>& atoms, std::size_t k,
                std::unordered_map<Formula, bool>& val) {
    if (k == atoms.size()) return kalmar(phi, val);
    const Formula& p = atoms[k];
    val[p] = true;
    int d1 = discharge(p, tautology(phi, atoms, k + 1, val));
    val[p] = false;
    int d2 = discharge(neg(p), tautology(phi, atoms, k + 1, val));
    return cases(p, phi, d1, d2);
  }

  Proof extract(int goal) const {
    Proof out;
    std::unordered_map<int, unsigned> line;
    std::vector<std::pair<int, bool>> stack{{goal, false}};
    while (!stack.empty()) {
      auto [n, expanded] = stack.back();
      stack.pop_back();
      if (line.count(n)) continue;
      const Node& nd = nodes_[n];
      if (!expanded) {
        stack.push_back({n, true});
        if (nd.r == R::MP) {
          stack.push_back({nd.b, false});
          stack.push_back({nd.a, false});
        } else if (nd.r == R::Gen) {
          stack.push_back({nd.a, false});
        }
        continue;
      }
      Justification j;
      switch (nd.r) {
        case R::Hyp:
          throw std::logic_error("prover: undischarged hypothesis " + render(nd.f));
        case R::Prem:
          j = Justification::premise();
          break;
        case R::Ax:
          j = Justification::axiom(nd.schema);
          break;
        case R::MP:
          j = Justification::mp(line.at(nd.a), line.at(nd.b));
          break;
        case R::Gen:
          j = Justification::gen(line.at(nd.a), nd.v);
          break;
      }
      out.lines.push_back({nd.f, j});
      line.emplace(n, static_cast<unsigned>(out.lines.size()));
    }
    return out;
  }

  static bool value(const Formula& g, const std::unordered_map<Formula, bool>& val) {
    if (g.kind() == Kind::Not) return !value(g.sub(), val);
    if (g.kind() == Kind::Or) return value(g.left(), val) || value(g.right(), val);
    return val.at(g);
  }

 private:
  enum class R { Hyp, Ax, Prem, MP, Gen };
  struct Node {
    Node(Formula g, R kind) : f(std::move(g)), r(kind) {}
    Formula f;
    R r;
    std::string schema;
    int a = -1;
    int b = -1;
    Var v;
  };

  int add(Node nd) {
    charge();
    nodes_.push_back(std::move(nd));
    return static_cast<int>(nodes_.size()) - 1;
  }

  bool depends(int n, int hid) {
    if (n == hid) return true;
    const Node& nd = nodes_[n];
    if (nd.r != R::MP && nd.r != R::Gen) return false;
    if (auto it = depends_.find({hid, n}); it != depends_.end()) return it->second;
    bool r = depends(nd.a, hid) || (nd.r == R::MP && depends(nd.b, hid));
    depends_.emplace(std::pair{hid, n}, r);
    return r;
  }

  template <class F>
  int cached(std::unordered_map<Formula, int>& cache, const Formula& key, F make) {
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    int n = make();
    cache.emplace(key, n);
    return n;
  }

  std::uint64_t limit_;
  std::uint64_t steps_ = 0;
  std::vector<Node> nodes_;
  std::unordered_map<Formula, int> hyps_, axioms_, prems_;
  std::unordered_map<Formula, int> identity_, dne_, dni_, exfalso_, self_neg_;
  std::map<std::pair<int, int>, int> discharged_;
  std::map<std::pair<int, int>, bool> depends_;
};

struct Fact {
  Formula f;
  std::vector<Formula> atoms;
  // Empty for premises.
  const char* schema = nullptr;
};

class Prover {
 public:
  Prover(const std::vector<Formula>& premises, const ProveOptions& options) : opt_(options) {
    for (const auto& p : premises) {
      if (!premise_set_.insert(p).second) continue;
      facts_.push_back({p, prop_atoms(p)});
    }
  }

  std::uint64_t spent() const { return spent_; }

  std::optional<Proof> run(const Formula& goal, std::uint64_t budget) {
    Builder b(budget);
    std::optional<Proof> out;
    try {
      out = search(b, goal);
    } catch (const BudgetExhausted&) {
      out.reset();
    }
    spent_ += b.spent();
    if (out) {
      auto check = check_proof(*out, [&](const Formula& f) { return premise_set_.count(f) > 0; });
      if (!check.ok)
        throw std::logic_error("prover emitted an invalid proof (line " + std::to_string(check.line) + ": " + check.message + ")");
    }
    return out;
  }

 private:
  std::optional<Proof> search(Builder& b, const Formula& goal) {
    b.charge();
    if (premise_set_.count(goal)) return Proof{{{goal, Justification::premise()}}};
    if (int n = prop(b, goal, facts_); n >= 0) return b.extract(n);
    if (!opt_.quantifiers) return std::nullopt;

    std::vector<Term> terms;
    for (const auto& c : constants(goal)) terms.emplace_back(c);
    for (Var v : goal.free_vars()) terms.emplace_back(v);
    auto facts = facts_;
    for (const auto& p : facts_) {
      Var x;
      Formula body;
      if (!as_forall(p.f, &x, &body)) continue;
      for (const auto& t : terms) {
        auto inst = substitute(body, x, t);
        if (!inst) continue;
        Formula q = imp(neg(*inst), exists(x, neg(body)));
        facts.push_back({q, prop_atoms(q), "Q1"});
      }
    }
    if (facts.size() > facts_.size())
      if (int n = prop(b, goal, facts); n >= 0) return b.extract(n);

    if (goal.kind() == Kind::Exists) {
      Var x = goal.var();
      std::vector<Term> witnesses;
      for (const auto& c : constants(goal)) witnesses.emplace_back(c);
      for (const auto& p : facts_)
        for (const auto& c : constants(p.f)) {
          Term t(c);
          if (std::find(witnesses.begin(), witnesses.end(), t) == witnesses.end()) witnesses.push_back(t);
        }
      for (Var v : goal.free_vars()) witnesses.emplace_back(v);
      for (const auto& t : witnesses) {
        auto inst = substitute(goal.sub(), x, t);
        if (!inst) continue;
        if (int n = prop(b, *inst, facts); n >= 0) return b.extract(b.mp(n, b.ax("Q1", imp(*inst, goal))));
      }
    }

    Var x;
    Formula body;
    if (as_forall(goal, &x, &body)) {
      std::vector<Fact> usable;
      for (const auto& f : facts)
        if (f.schema || !f.f.free(x)) usable.push_back(f);
      if (int n = prop(b, body, usable); n >= 0) return b.extract(b.gen(n, x));
    }
    return std::nullopt;
  }

  // Propositional consequence of a few relevant facts; -1 when none found.
  int prop(Builder& b, const Formula& goal, const std::vector<Fact>& facts) {
    constexpr std::size_t kMaxFacts = 6;
    std::unordered_set<Formula> seen;
    for (const auto& a : prop_atoms(goal)) seen.insert(a);
    if (seen.size() > opt_.max_atoms) return -1;
    std::vector<const Fact*> chosen;
    std::vector<char> used(facts.size(), 0);
    bool grew = true;
    while (grew && chosen.size() < kMaxFacts) {
      grew = false;
      for (std::size_t i = 0; i < facts.size() && chosen.size() < kMaxFacts; ++i) {
        if (used[i]) continue;
        const auto& fa = facts[i];
        bool touches = std::any_of(fa.atoms.begin(), fa.atoms.end(), [&](const Formula& a) { return seen.count(a); });
        if (!touches) continue;
        std::size_t fresh = 0;
        for (const auto& a : fa.atoms) fresh += seen.count(a) == 0;
        if (seen.size() + fresh > opt_.max_atoms) continue;
        used[i] = 1;
        chosen.push_back(&fa);
        for (const auto& a : fa.atoms) seen.insert(a);
        grew = true;
      }
    }
    auto chain = [&](const std::vector<const Fact*>& fs) {
      Formula t = goal;
      for (auto it = fs.rbegin(); it != fs.rend(); ++it) t = imp((*it)->f, t);
      return t;
    };
    auto taut = [&](const std::vector<const Fact*>& fs) {
      b.charge();
      auto r = is_tautology(chain(fs), opt_.max_atoms);
      return r && *r;
    };
    if (!taut(chosen)) return -1;
    for (std::size_t i = chosen.size(); i-- > 0;) {
      auto fewer = chosen;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
      if (taut(fewer)) chosen = std::move(fewer);
    }
    Formula tau = chain(chosen);
    std::unordered_map<Formula, bool> val;
    int n = b.tautology(tau, prop_atoms(tau), 0, val);
    for (const Fact* fa : chosen) n = b.mp(fa->schema ? b.ax(fa->schema, fa->f) : b.prem(fa->f), n);
    return n;
  }

  ProveOptions opt_;
  std::unordered_set<Formula> premise_set_;
  std::vector<Fact> facts_;
  std::uint64_t spent_ = 0;
};

}  // namespace

std::optional<Proof> prove(const std::vector<Formula>& premises, const Formula& goal, const ProveOptions& options) {
  Prover p(premises, options);
  return p.run(goal, options.budget);
}

GRefReport check_gref(const TruthPredicate& t, const std::vector<Formula>& pool, const GRefConfig& config) {
  GRefReport report;
  auto in_t = [&](const Formula& s) { return s.sentence() && t.in_family(s) && t.holds(s); };
  auto in_scope = [&](const Formula& s) { return config.mode != GRefMode::DepthBounded || s.depth() <= config.depth_x; };

  std::vector<Formula> premises;
  std::unordered_set<Formula> premise_set;
  for (const auto& s : pool)
    if (in_t(s) && premise_set.insert(s).second) premises.push_back(s);
  if (config.mode == GRefMode::DepthBounded)
    for (const auto& z : config.extra)
      if (premise_set.insert(z).second) premises.push_back(z);

  auto spend = [&](std::uint64_t n) {
    report.steps += n;
    if (report.steps >= config.budget) report.exhausted = true;
    return !report.exhausted;
  };

  // Modus ponens between two premises.
  for (const auto& c : premises) {
    Formula a, b;
    if (!as_imp(c, &a, &b) || !premise_set.count(a)) continue;
    if (!spend(1)) return report;
    if (!in_scope(b)) continue;
    ++report.proofs;
    if (!in_t(b)) {
      Proof p{{{a, Justification::premise()}, {c, Justification::premise()}, {b, Justification::mp(1, 2)}}};
      report.failures.push_back({b, std::move(p)});
    }
  }

  ProveOptions opt;
  opt.quantifiers = config.mode != GRefMode::Prop;
  Prover prover(premises, opt);
  std::unordered_set<Formula> tried;
  for (const auto& g : pool) {
    if (!g.sentence() || premise_set.count(g) || !in_scope(g) || !tried.insert(g).second) continue;
    if (in_t(g)) continue;
    std::uint64_t before = prover.spent();
    auto proof = prover.run(g, config.budget - report.steps);
    bool more = spend(std::max<std::uint64_t>(1, prover.spent() - before));
    if (proof) {
      ++report.proofs;
      report.failures.push_back({g, std::move(*proof)});
    }
    if (!more) break;
  }
  return report;
}

}  // namespace tk
