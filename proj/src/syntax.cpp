#include "tk/syntax.hpp"

#include <algorithm>
#include <unordered_set>

#include "tk/error.hpp"
#include "tk/parse.hpp"

namespace tk {

std::string LevyClass::to_string() const {
  switch (kind) {
    case Kind::Delta0:
      return "Delta0";
    case Kind::Sigma:
      return "Sigma" + std::to_string(n);
    case Kind::Pi:
      return "Pi" + std::to_string(n);
    case Kind::Unclassified:
      break;
  }
  return "unclassified";
}

bool match_bounded_exists(const Formula& f, Term* bound, Formula* body) {
  if (f.kind() != Kind::Exists) return false;
  const Formula& n = f.sub();
  if (n.kind() != Kind::Not || n.sub().kind() != Kind::Or) return false;
  const Formula& l = n.sub().left();
  const Formula& r = n.sub().right();
  if (l.kind() != Kind::Not || r.kind() != Kind::Not) return false;
  const Formula& m = l.sub();
  if (m.kind() != Kind::Mem || !m.lhs().is_var() || m.lhs().var() != f.var()) return false;
  if (m.rhs().is_var() && m.rhs().var() == f.var()) return false;
  if (bound) *bound = m.rhs();
  if (body) *body = r.sub();
  return true;
}

bool is_delta0(const Formula& f) {
  switch (f.kind()) {
    case Kind::Not:
      return is_delta0(f.sub());
    case Kind::Or:
      return is_delta0(f.left()) && is_delta0(f.right());
    case Kind::Exists: {
      Formula body;
      if (!match_bounded_exists(f, nullptr, &body)) return false;
      return is_delta0(body);
    }
    default:
      return true;
  }
}

LevyClass levy_class(const Formula& f) {
  using K = LevyClass::Kind;
  if (is_delta0(f)) return {K::Delta0, 0};
  if (f.kind() == Kind::Exists) {
    Formula body = f;
    while (body.kind() == Kind::Exists && !is_delta0(body)) body = body.sub();
    LevyClass c = levy_class(body);
    switch (c.kind) {
      case K::Delta0:
        return {K::Sigma, 1};
      case K::Sigma:
        return c;
      case K::Pi:
        return {K::Sigma, c.n + 1};
      case K::Unclassified:
        return c;
    }
  }
  if (f.kind() == Kind::Not) {
    LevyClass c = levy_class(f.sub());
    if (c.kind == K::Sigma) return {K::Pi, c.n};
    if (c.kind == K::Pi) return {K::Sigma, c.n};
  }
  return {K::Unclassified, 0};
}

bool lset_only(const Formula& f) {
  switch (f.kind()) {
    case Kind::Mem:
    case Kind::Eq:
      return true;
    case Kind::Pred:
    case Kind::Prov:
      return false;
    case Kind::Not:
    case Kind::Exists:
      return lset_only(f.sub());
    case Kind::Or:
      return lset_only(f.left()) && lset_only(f.right());
  }
  return false;
}

Analysis analyze(const Formula& f) {
  Analysis a;
  a.free_vars.assign(f.free_vars().begin(), f.free_vars().end());
  a.depth = f.depth();
  a.immediate_subformulas = f.immediate_subformulas();
  a.levy = levy_class(f);
  a.sentence = f.sentence();
  return a;
}

Formula instantiate(const Formula& ex, const HFSet& v) {
  if (ex.kind() != Kind::Exists) throw Error("not an existential formula: " + render(ex));
  const Formula& body = ex.sub();
  if (!body.free(ex.var())) return body;
  return close(body, Assignment{{ex.var(), v}});
}

Formula ecl(const Formula& f) {
  Formula out = f;
  const auto& fv = f.free_vars();
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) out = exists(*it, out);
  return out;
}

Formula becl(const Formula& f, Var x) {
  auto vars = all_vars(f);
  if (std::binary_search(vars.begin(), vars.end(), x))
    throw Error("bound variable " + x.name() + " occurs in the formula");
  Formula out = f;
  const auto& fv = f.free_vars();
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) out = ex_in(*it, x, out);
  return out;
}

Formula big_or(const std::vector<Formula>& fs) {
  if (fs.empty()) throw Error("big_or of an empty sequence");
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

Formula big_and(const std::vector<Formula>& fs) {
  if (fs.empty()) throw Error("big_and of an empty sequence");
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

namespace {

Formula relativize_rec(const Formula& f, Var x) {
  switch (f.kind()) {
    case Kind::Not:
      return neg(relativize_rec(f.sub(), x));
    case Kind::Or:
      return disj(relativize_rec(f.left(), x), relativize_rec(f.right(), x));
    case Kind::Exists:
      return ex_in(f.var(), x, relativize_rec(f.sub(), x));
    default:
      return f;
  }
}

struct Walker {
  const Assignment* a0;
  const Assignment* a1;
  std::vector<Var> b0, b1;

  static int binder(const std::vector<Var>& b, Var v) {
    for (std::size_t i = b.size(); i-- > 0;)
      if (b[i] == v) return static_cast<int>(i);
    return -1;
  }

  bool term(const Term& s, const Term& t) {
    if (s.is_const() || t.is_const()) return s == t;
    int i = binder(b0, s.var());
    int j = binder(b1, t.var());
    if (i != j) return false;
    if (i >= 0) return true;
    return *a0->get(s.var()) == *a1->get(t.var());
  }

  bool walk(const Formula& f, const Formula& g) {
    if (f.kind() != g.kind()) return false;
    switch (f.kind()) {
      case Kind::Mem:
      case Kind::Eq:
        return term(f.lhs(), g.lhs()) && term(f.rhs(), g.rhs());
      case Kind::Pred:
        return f.symbol() == g.symbol() && term(f.rhs(), g.rhs());
      case Kind::Prov:
        return f.symbol() == g.symbol() && f.var() == g.var() && f.sub() == g.sub() &&
               term(f.lhs(), g.lhs());
      case Kind::Not:
        return walk(f.sub(), g.sub());
      case Kind::Or:
        return walk(f.left(), g.left()) && walk(f.right(), g.right());
      case Kind::Exists: {
        b0.push_back(f.var());
        b1.push_back(g.var());
        bool ok = walk(f.sub(), g.sub());
        b0.pop_back();
        b1.pop_back();
        return ok;
      }
    }
    return false;
  }
};

void require_total(const Formula& f, const Assignment& a) {
  if (!a.total_for(f.free_vars()))
    throw Error("assignment is not total for " + render(f));
}

void key_rec(const Formula& f, const Assignment& a, std::vector<Var>& bound, std::string& out) {
  auto term = [&](const Term& t) {
    if (t.is_const()) {
      out += "c" + t.value().to_string();
      return;
    }
    for (std::size_t i = bound.size(); i-- > 0;) {
      if (bound[i] == t.var()) {
        out += "b" + std::to_string(i);
        return;
      }
    }
    out += "f" + a.get(t.var())->to_string();
  };
  switch (f.kind()) {
    case Kind::Mem:
    case Kind::Eq:
      out += f.kind() == Kind::Mem ? "(m " : "(e ";
      term(f.lhs());
      out += ' ';
      term(f.rhs());
      out += ')';
      return;
    case Kind::Pred:
      out += "(p " + f.symbol().name() + " ";
      term(f.rhs());
      out += ')';
      return;
    case Kind::Prov:
      out += "(P " + f.symbol().name() + " " + f.var().name() + " " + render(f.sub()) + " ";
      term(f.lhs());
      out += ')';
      return;
    case Kind::Not:
      out += "(n ";
      key_rec(f.sub(), a, bound, out);
      out += ')';
      return;
    case Kind::Or:
      out += "(o ";
      key_rec(f.left(), a, bound, out);
      out += ' ';
      key_rec(f.right(), a, bound, out);
      out += ')';
      return;
    case Kind::Exists:
      out += "(x ";
      bound.push_back(f.var());
      key_rec(f.sub(), a, bound, out);
      bound.pop_back();
      out += ')';
      return;
  }
}

}  // namespace

Formula relativize(const Formula& f, Var x) {
  auto vars = all_vars(f);
  if (std::binary_search(vars.begin(), vars.end(), x))
    throw Error("relativizing variable " + x.name() + " occurs in the formula");
  return relativize_rec(f, x);
}

bool sim_equiv(const Formula& f0, const Assignment& a0, const Formula& f1, const Assignment& a1) {
  require_total(f0, a0);
  require_total(f1, a1);
  Walker w{&a0, &a1, {}, {}};
  return w.walk(f0, f1);
}

std::string sim_key(const Formula& f, const Assignment& a) {
  require_total(f, a);
  std::vector<Var> bound;
  std::string out;
  key_rec(f, a, bound, out);
  return out;
}

std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  std::unordered_set<Formula> seen;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (!seen.insert(g).second) continue;
    out.push_back(g);
    for (auto& h : g.immediate_subformulas()) stack.push_back(h);
  }
  return out;
}

}  // namespace tk
