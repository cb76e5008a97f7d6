#include "tk/hierarchy.hpp"

#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "tk/error.hpp"
#include "tk/parse.hpp"

namespace tk {

namespace {

void require_sentence_over(const Structure& m, const Formula& s) {
  if (!s.sentence()) throw Error("not a sentence: " + render(s));
  if (!lset_only(s)) throw Error("not an L_set sentence: " + render(s));
  for (auto& c : constants(s))
    if (!m.find(c)) throw Error("constant #" + c.to_string() + " does not denote an element of " + m.describe());
}

bool atomic_true(const Formula& f) {
  const HFSet& y = f.lhs().value();
  const HFSet& z = f.rhs().value();
  return f.kind() == Kind::Eq ? y == z : z.contains(y);
}

class TrueK {
 public:
  explicit TrueK(const Structure& m) : m_(m) {}

  bool run(unsigned k, const Formula& f) {
    // Never look at a formula outside Depth_k.
    if (f.depth() > k) throw std::logic_error("True_k consulted a formula outside its depth class");
    if (k == 1) return true_1(f);
    if (f.depth() == 1) return true_1(f);
    unsigned r = f.depth() - 1;
    switch (f.kind()) {
      case Kind::Not:
        return !run(r, f.sub());
      case Kind::Or:
        return run(r, f.left()) || run(r, f.right());
      case Kind::Exists:
        for (auto& v : m_.labels())
          if (run(r, instantiate(f, v))) return true;
        return false;
      default:
        return false;
    }
  }

 private:
  static bool true_1(const Formula& f) {
    if (f.kind() != Kind::Mem && f.kind() != Kind::Eq) return false;
    return atomic_true(f);
  }

  const Structure& m_;
};

}  // namespace

bool true_k(const Structure& m, unsigned k, const Formula& s) {
  require_sentence_over(m, s);
  if (s.depth() > k)
    throw Error("depth " + std::to_string(s.depth()) + " exceeds k = " + std::to_string(k));
  return TrueK(m).run(k, s);
}

bool true_sigma(const Structure& m, unsigned n, const Formula& s) {
  LevyClass c = levy_class(s);
  bool ok = c.kind == LevyClass::Kind::Delta0 ||
            ((c.kind == LevyClass::Kind::Sigma || c.kind == LevyClass::Kind::Pi) && c.n <= n);
  if (!ok) throw Error("sentence is " + c.to_string() + ", not within Sigma" + std::to_string(n));
  return true_k(m, s.depth(), s);
}

// ---------------------------------------------------------------------------
// Materializer

namespace {

using Op = MetaFormula::Op;

MetaFormula rel(std::string name, std::vector<std::string> args) {
  MetaFormula f;
  f.op = Op::Rel;
  f.name = std::move(name);
  f.args = std::move(args);
  return f;
}

MetaFormula node(Op op, std::vector<MetaFormula> subs, std::string name = {}) {
  MetaFormula f;
  f.op = op;
  f.name = std::move(name);
  f.subs = std::move(subs);
  return f;
}

MetaFormula obj_atom(Op op, std::string a, std::string b) {
  MetaFormula f;
  f.op = op;
  f.args = {std::move(a), std::move(b)};
  return f;
}

MetaFormula or_all(std::vector<MetaFormula> fs) {
  MetaFormula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = node(Op::Or, {acc, fs[i]});
  return acc;
}

class Materializer {
 public:
  MetaFormula true_k(unsigned k, const std::string& phi) {
    if (k == 1) return true_1(phi);
    std::vector<MetaFormula> cases;
    cases.push_back(node(Op::And, {rel("depth=", {phi, "1"}), true_1(phi)}));
    for (unsigned r = 1; r < k; ++r) {
      MetaFormula body = or_all({neg_r(r, phi), disj_r(r, phi), exist_r(r, phi)});
      cases.push_back(node(Op::And, {rel("depth=", {phi, std::to_string(r + 1)}), body}));
    }
    return or_all(std::move(cases));
  }

 private:
  std::string fresh(const std::string& base) { return base + std::to_string(counter_++); }

  MetaFormula true_1(const std::string& phi) {
    std::string y = fresh("y"), z = fresh("z");
    MetaFormula e = node(Op::And, {rel("code-eq", {phi, y, z}), obj_atom(Op::Eq, y, z)});
    MetaFormula m = node(Op::And, {rel("code-mem", {phi, y, z}), obj_atom(Op::Mem, y, z)});
    return node(Op::ExObj, {node(Op::ExObj, {node(Op::Or, {e, m})}, z)}, y);
  }

  MetaFormula neg_r(unsigned r, const std::string& phi) {
    std::string psi = fresh("psi");
    return node(Op::ExSyn,
                {node(Op::And, {rel("code-neg", {phi, psi}), node(Op::Not, {true_k(r, psi)})})}, psi);
  }

  MetaFormula disj_r(unsigned r, const std::string& phi) {
    std::string a = fresh("psi"), b = fresh("psi");
    MetaFormula body = node(Op::And, {rel("code-or", {phi, a, b}), node(Op::Or, {true_k(r, a), true_k(r, b)})});
    return node(Op::ExSyn, {node(Op::ExSyn, {body}, b)}, a);
  }

  MetaFormula exist_r(unsigned r, const std::string& phi) {
    std::string v = fresh("v"), theta = fresh("theta");
    MetaFormula body = node(Op::And, {rel("code-inst", {phi, v, theta}), true_k(r, theta)});
    return node(Op::ExObj, {node(Op::ExSyn, {body}, theta)}, v);
  }

  unsigned counter_ = 1;
};

class MetaEval {
 public:
  MetaEval(const Structure& m, const Formula& s) : m_(m), universe_(instance_closure(m, s)) {
    syn_["phi0"] = s;
  }

  bool eval(const MetaFormula& f) {
    switch (f.op) {
      case Op::Rel:
        return relation(f);
      case Op::Mem:
        return obj(f.args[1]).contains(obj(f.args[0]));
      case Op::Eq:
        return obj(f.args[0]) == obj(f.args[1]);
      case Op::Not:
        return !eval(f.subs[0]);
      case Op::Or:
        return eval(f.subs[0]) || eval(f.subs[1]);
      case Op::And:
        return eval(f.subs[0]) && eval(f.subs[1]);
      case Op::ExSyn:
        for (auto& u : universe_) {
          syn_[f.name] = u;
          if (eval(f.subs[0])) return true;
        }
        return false;
      case Op::ExObj:
        for (auto& u : m_.labels()) {
          obj_[f.name] = u;
          if (eval(f.subs[0])) return true;
        }
        return false;
    }
    return false;
  }

 private:
  const Formula& syn(const std::string& n) { return syn_.at(n); }
  const HFSet& obj(const std::string& n) { return obj_.at(n); }

  static bool is_const_atom(const Formula& f, Kind k) {
    return f.kind() == k && f.lhs().is_const() && f.rhs().is_const();
  }

  bool relation(const MetaFormula& f) {
    const std::string& r = f.name;
    const Formula& phi = syn(f.args[0]);
    if (r == "depth=") return phi.depth() == std::stoul(f.args[1]);
    if (r == "code-eq" || r == "code-mem") {
      Kind k = r == "code-eq" ? Kind::Eq : Kind::Mem;
      return is_const_atom(phi, k) && phi.lhs().value() == obj(f.args[1]) && phi.rhs().value() == obj(f.args[2]);
    }
    if (r == "code-neg") return phi.kind() == Kind::Not && phi.sub() == syn(f.args[1]);
    if (r == "code-or")
      return phi.kind() == Kind::Or && phi.left() == syn(f.args[1]) && phi.right() == syn(f.args[2]);
    if (r == "code-inst") return phi.kind() == Kind::Exists && instantiate(phi, obj(f.args[1])) == syn(f.args[2]);
    throw Error("unknown relation " + r);
  }

  const Structure& m_;
  std::vector<Formula> universe_;
  std::unordered_map<std::string, Formula> syn_;
  std::unordered_map<std::string, HFSet> obj_;
};

}  // namespace

std::string MetaFormula::to_string() const {
  auto join = [](const std::vector<std::string>& xs) {
    std::string out;
    for (auto& x : xs) out += " " + x;
    return out;
  };
  switch (op) {
    case Op::Rel:
      return "(" + name + join(args) + ")";
    case Op::Mem:
      return "(mem" + join(args) + ")";
    case Op::Eq:
      return "(eq" + join(args) + ")";
    case Op::Not:
      return "(not " + subs[0].to_string() + ")";
    case Op::Or:
      return "(or " + subs[0].to_string() + " " + subs[1].to_string() + ")";
    case Op::And:
      return "(and " + subs[0].to_string() + " " + subs[1].to_string() + ")";
    case Op::ExSyn:
      return "(ex-syn " + name + " " + subs[0].to_string() + ")";
    case Op::ExObj:
      return "(ex " + name + " " + subs[0].to_string() + ")";
  }
  return {};
}

std::size_t MetaFormula::size() const {
  std::size_t n = 1;
  for (auto& s : subs) n += s.size();
  return n;
}

MetaFormula materialize_true(unsigned k) {
  if (k < 1 || k > 3) throw Error("True_k can only be materialized for 1 <= k <= 3");
  return Materializer().true_k(k, "phi0");
}

std::vector<Formula> instance_closure(const Structure& m, const Formula& s) {
  std::vector<Formula> out;
  std::unordered_set<Formula> seen;
  std::vector<Formula> stack{s};
  while (!stack.empty()) {
    Formula f = stack.back();
    stack.pop_back();
    if (!seen.insert(f).second) continue;
    out.push_back(f);
    switch (f.kind()) {
      case Kind::Not:
        stack.push_back(f.sub());
        break;
      case Kind::Or:
        stack.push_back(f.right());
        stack.push_back(f.left());
        break;
      case Kind::Exists:
        for (std::size_t i = m.size(); i-- > 0;) stack.push_back(instantiate(f, m.label(static_cast<Elem>(i))));
        break;
      default:
        break;
    }
  }
  return out;
}

bool eval_materialized(const Structure& m, const MetaFormula& f, const Formula& s) {
  require_sentence_over(m, s);
  return MetaEval(m, s).eval(f);
}

// ---------------------------------------------------------------------------

namespace {

// Checks the compositional clauses of a truth class restricted to the
// sentences in `domain` of depth <= p.
bool compositional_on(const Structure& m, const std::vector<Formula>& domain,
                      const std::unordered_set<Formula>& t, unsigned p) {
  auto in = [&](const Formula& f) { return t.count(f) > 0; };
  for (auto& f : domain) {
    if (f.depth() > p) continue;
    bool want;
    switch (f.kind()) {
      case Kind::Mem:
      case Kind::Eq:
        want = atomic_true(f);
        break;
      case Kind::Not:
        want = !in(f.sub());
        break;
      case Kind::Or:
        want = in(f.left()) || in(f.right());
        break;
      case Kind::Exists:
        want = false;
        for (auto& v : m.labels())
          if (in(instantiate(f, v))) {
            want = true;
            break;
          }
        break;
      default:
        return false;
    }
    if (want != in(f)) return false;
  }
  return true;
}

}  // namespace

MostowskiResult mostowski_probe(const Structure& m, const Formula& s) {
  require_sentence_over(m, s);
  auto domain = instance_closure(m, s);
  // Every member of the closure has depth <= depth(s), so the search settles
  // at the first probe unless the induced class is not compositional.
  for (unsigned p = s.depth(); p <= s.depth() + 1; ++p) {
    std::unordered_set<Formula> t;
    for (auto& f : domain)
      if (f.depth() <= p && sat(m, f, {})) t.insert(f);
    if (compositional_on(m, domain, t, p)) return {t.count(s) > 0, p};
  }
  throw std::logic_error("no Depth_p truth class found for " + render(s));
}

bool mostowski_truth(const Structure& m, const Formula& s) { return mostowski_probe(m, s).value; }

HFSet piecewise_code(const TruthPredicate& t, const HFSet& s) {
  std::vector<HFSet> keep;
  for (auto& c : s.elements()) {
    auto f = decode_formula(c);
    if (!f || !f->sentence()) throw Error("element " + c.to_string() + " is not a sentence code");
    if (t.in_family(*f) && t.holds(*f)) keep.push_back(c);
  }
  return HFSet::of(keep);
}

}  // namespace tk
