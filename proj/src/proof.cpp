#include "tk/proof.hpp"

#include <unordered_map>
#include <unordered_set>

#include "tk/parse.hpp"

namespace tk {

namespace {

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

// Reads off the term standing at the first free occurrence of x in b.
bool find_instance_term(const Formula& b, const Formula& bt, Var x, std::optional<Term>& t) {
  if (b.kind() != bt.kind()) return false;
  auto term = [&](const Term& s, const Term& st) {
    if (s.is_var() && s.var() == x && !t) t = st;
  };
  switch (b.kind()) {
    case Kind::Mem:
    case Kind::Eq:
      term(b.lhs(), bt.lhs());
      term(b.rhs(), bt.rhs());
      return true;
    case Kind::Pred:
      term(b.rhs(), bt.rhs());
      return true;
    case Kind::Prov:
      term(b.lhs(), bt.lhs());
      return true;
    case Kind::Not:
      return find_instance_term(b.sub(), bt.sub(), x, t);
    case Kind::Or:
      return find_instance_term(b.left(), bt.left(), x, t) && find_instance_term(b.right(), bt.right(), x, t);
    case Kind::Exists:
      if (b.var() == x) return true;
      return find_instance_term(b.sub(), bt.sub(), x, t);
  }
  return false;
}

bool replaced(const Term& r, const Term& r2, const Term& s, const Term& t) { return r2 == r || (r == s && r2 == t); }

bool eq_substitution(const Formula& f) {
  Formula e, rest, r, r2;
  if (!as_imp(f, &e, &rest) || e.kind() != Kind::Eq || !as_imp(rest, &r, &r2)) return false;
  if (!r.atomic() || r.kind() != r2.kind()) return false;
  const Term& s = e.lhs();
  const Term& t = e.rhs();
  switch (r.kind()) {
    case Kind::Mem:
    case Kind::Eq:
      return replaced(r.lhs(), r2.lhs(), s, t) && replaced(r.rhs(), r2.rhs(), s, t);
    case Kind::Pred:
      return r.symbol() == r2.symbol() && replaced(r.rhs(), r2.rhs(), s, t);
    default:
      return false;
  }
}

bool exists_intro(const Formula& f) {
  Formula bt, ex;
  if (!as_imp(f, &bt, &ex) || ex.kind() != Kind::Exists) return false;
  Var x = ex.var();
  const Formula& b = ex.sub();
  if (!b.free(x)) return bt == b;
  std::optional<Term> t;
  if (!find_instance_term(b, bt, x, t) || !t) return false;
  auto inst = substitute(b, x, *t);
  return inst && *inst == bt;
}

bool forall_distribution(const Formula& f) {
  Formula l, r, ab, a, b;
  Var x;
  if (!as_imp(f, &l, &r) || !as_forall(l, &x, &ab) || !as_imp(ab, &a, &b)) return false;
  return !a.free(x) && r == imp(a, forall(x, b));
}

}  // namespace

std::string Justification::to_string() const {
  switch (kind) {
    case Kind::Premise:
      return "premise";
    case Kind::Axiom:
      return "axiom " + schema;
    case Kind::MP:
      return "mp " + std::to_string(i) + " " + std::to_string(j);
    case Kind::Gen:
      return "gen " + std::to_string(i) + " " + var.name();
  }
  return "?";
}

bool is_axiom(const std::string& schema, const Formula& f) {
  Formula a, r, b, c, l;
  if (schema == "A1") {
    Formula a2;
    return as_imp(f, &a, &r) && as_imp(r, &b, &a2) && a2 == a;
  }
  if (schema == "A2") {
    Formula bc, ab, ac;
    if (!as_imp(f, &l, &r) || !as_imp(l, &a, &bc) || !as_imp(bc, &b, &c)) return false;
    return r == imp(imp(a, b), imp(a, c));
  }
  if (schema == "A3") {
    Formula nb, na;
    if (!as_imp(f, &l, &r) || !as_imp(l, &nb, &na)) return false;
    if (nb.kind() != Kind::Not || na.kind() != Kind::Not) return false;
    return r == imp(imp(nb, na.sub()), nb.sub());
  }
  if (schema == "O1") {
    if (!as_imp(f, &l, &r) || l.kind() != Kind::Or) return false;
    return r == disj(neg(neg(l.left())), l.right());
  }
  if (schema == "O2") {
    if (!as_imp(f, &l, &r) || r.kind() != Kind::Or) return false;
    return l == disj(neg(neg(r.left())), r.right());
  }
  if (schema == "E1") return f.kind() == Kind::Eq && f.lhs() == f.rhs();
  if (schema == "E2") return eq_substitution(f);
  if (schema == "Q1") return exists_intro(f);
  if (schema == "Q2") return forall_distribution(f);
  return false;
}

std::optional<std::string> axiom_schema(const Formula& f) {
  for (const char* s : {"A1", "A2", "A3", "O1", "O2", "E1", "E2", "Q1", "Q2"})
    if (is_axiom(s, f)) return std::string(s);
  return std::nullopt;
}

ProofCheck check_proof(const Proof& p, const PremiseSet& premises) {
  if (p.lines.empty()) return {false, 0, "empty proof"};
  auto fail = [](unsigned k, std::string msg) { return ProofCheck{false, k, std::move(msg)}; };
  for (unsigned k = 1; k <= p.lines.size(); ++k) {
    const auto& [f, j] = p.lines[k - 1];
    if (!f.valid()) return fail(k, "missing formula");
    switch (j.kind) {
      case Justification::Kind::Premise:
        if (!premises(f)) return fail(k, "not a premise: " + render(f));
        break;
      case Justification::Kind::Axiom:
        if (!is_axiom(j.schema, f)) return fail(k, "not an instance of " + j.schema);
        break;
      case Justification::Kind::MP: {
        if (j.i < 1 || j.i >= k || j.j < 1 || j.j >= k) return fail(k, "modus ponens must cite earlier lines");
        Formula a, b;
        const Formula& imp_line = p.lines[j.j - 1].formula;
        if (!as_imp(imp_line, &a, &b)) return fail(k, "line " + std::to_string(j.j) + " is not an implication");
        if (!(a == p.lines[j.i - 1].formula)) return fail(k, "antecedent does not match line " + std::to_string(j.i));
        if (!(b == f)) return fail(k, "consequent does not match the line");
        break;
      }
      case Justification::Kind::Gen: {
        if (j.i < 1 || j.i >= k) return fail(k, "generalization must cite an earlier line");
        if (!j.var.valid()) return fail(k, "generalization without a variable");
        if (!(f == forall(j.var, p.lines[j.i - 1].formula))) return fail(k, "not the generalization of line " + std::to_string(j.i));
        // Premises line i depends on.
        std::vector<char> seen(k, 0);
        std::vector<unsigned> stack{j.i};
        while (!stack.empty()) {
          unsigned d = stack.back();
          stack.pop_back();
          if (seen[d]) continue;
          seen[d] = 1;
          const auto& dl = p.lines[d - 1];
          switch (dl.just.kind) {
            case Justification::Kind::Premise:
              if (dl.formula.free(j.var))
                return fail(k, "eigenvariable " + j.var.name() + " is free in premise line " + std::to_string(d));
              break;
            case Justification::Kind::MP:
              stack.push_back(dl.just.i);
              stack.push_back(dl.just.j);
              break;
            case Justification::Kind::Gen:
              stack.push_back(dl.just.i);
              break;
            default:
              break;
          }
        }
        break;
      }
    }
  }
  return {};
}

ProofCheck check_proof(const Proof& p, const std::vector<Formula>& premises) {
  std::unordered_set<Formula> set(premises.begin(), premises.end());
  return check_proof(p, [&](const Formula& f) { return set.count(f) > 0; });
}

std::vector<Formula> prop_atoms(const Formula& f) {
  std::vector<Formula> out;
  std::unordered_set<Formula> seen;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (g.kind() == Kind::Not) {
      stack.push_back(g.sub());
    } else if (g.kind() == Kind::Or) {
      stack.push_back(g.right());
      stack.push_back(g.left());
    } else if (seen.insert(g).second) {
      out.push_back(g);
    }
  }
  std::sort(out.begin(), out.end(), formula_less);
  return out;
}

std::optional<bool> is_tautology(const Formula& f, unsigned max_atoms) {
  auto atoms = prop_atoms(f);
  if (atoms.size() > max_atoms) return std::nullopt;
  std::unordered_map<Formula, bool> val;
  std::function<bool(const Formula&)> ev = [&](const Formula& g) -> bool {
    if (g.kind() == Kind::Not) return !ev(g.sub());
    if (g.kind() == Kind::Or) return ev(g.left()) || ev(g.right());
    return val.at(g);
  };
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms.size()); ++mask) {
    for (std::size_t i = 0; i < atoms.size(); ++i) val[atoms[i]] = (mask >> i) & 1;
    if (!ev(f)) return false;
  }
  return true;
}

}  // namespace tk
