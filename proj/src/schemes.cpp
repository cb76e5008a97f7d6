#include "tk/schemes.hpp"

#include <algorithm>
#include <array>

#include "tk/error.hpp"
#include "tk/parse.hpp"
#include "tk/syntax.hpp"

namespace tk {

namespace {

const Var kV("v"), kX("x"), kY("y");

constexpr std::array<std::pair<SchemeTag, const char*>, 11> kSchemeNames{{
    {SchemeTag::Sep, "Sep"},
    {SchemeTag::Coll, "Coll"},
    {SchemeTag::Repl, "Repl"},
    {SchemeTag::Ind, "Ind"},
    {SchemeTag::Found, "Found"},
    {SchemeTag::REF, "REF"},
    {SchemeTag::CON, "CON"},
    {SchemeTag::IntSep, "IntSep"},
    {SchemeTag::IntColl, "IntColl"},
    {SchemeTag::IntRepl, "IntRepl"},
    {SchemeTag::IntInd, "IntInd"},
}};

constexpr std::array<std::pair<TruthProperty, const char*>, 4> kPropertyNames{{
    {TruthProperty::DCOut, "DC_out"},
    {TruthProperty::DCIn, "DC_in"},
    {TruthProperty::PI, "PI"},
    {TruthProperty::SPI, "SPI"},
}};

std::vector<Var> avoid_list(const Formula& f, std::initializer_list<Var> extra) {
  std::vector<Var> out = all_vars(f);
  out.insert(out.end(), extra);
  return out;
}

// f[t/v] after moving every bound variable of f out of the way of t.
Formula subst(const Formula& f, Var v, Var t) {
  if (!f.free(v)) return f;
  auto r = substitute(rename_bound(f, {t}), v, Term(t));
  if (!r) throw Error("variable capture while substituting " + t.name() + " for " + v.name());
  return *r;
}

void require_vars(const Formula& f, const std::vector<Var>& allowed, SchemeTag tag) {
  for (Var v : f.free_vars())
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
      throw Error("arity mismatch: " + to_string(tag) + " template " + render(f) + " has free variable " + v.name());
}

Formula exists_unique(Var y, const Formula& f, Var y2) {
  return exists(y, conj(f, forall(y2, imp(subst(f, y, y2), eq(y2, y)))));
}

// s = x u {x}
Formula successor(Var s, Var x, const std::vector<Var>& avoid) {
  Var w = fresh_var("w", avoid);
  return forall(w, iff(mem(w, s), disj(mem(w, x), eq(w, x))));
}

}  // namespace

std::string to_string(SchemeTag t) {
  for (auto& [tag, name] : kSchemeNames)
    if (tag == t) return name;
  return "?";
}

std::optional<SchemeTag> scheme_from_string(const std::string& s) {
  for (auto& [tag, name] : kSchemeNames)
    if (s == name) return tag;
  return std::nullopt;
}

std::string to_string(TruthProperty p) {
  for (auto& [prop, name] : kPropertyNames)
    if (prop == p) return name;
  return "?";
}

std::optional<TruthProperty> property_from_string(const std::string& s) {
  for (auto& [prop, name] : kPropertyNames)
    if (s == name) return prop;
  return std::nullopt;
}

std::vector<Var> template_vars(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::Coll:
    case SchemeTag::Repl:
    case SchemeTag::IntColl:
    case SchemeTag::IntRepl:
      return {kV, kX, kY};
    case SchemeTag::REF:
    case SchemeTag::CON:
      return {kX};
    default:
      return {kV, kX};
  }
}

Formula nat_formula(Var x) {
  std::vector<Var> avoid{x};
  Var y = fresh_var("y", avoid);
  avoid.push_back(y);
  Var z = fresh_var("z", avoid);
  avoid.push_back(z);
  Var w = fresh_var("w", avoid);
  Formula transitive = all_in(y, x, all_in(z, y, mem(z, x)));
  Formula elements_transitive = all_in(y, x, all_in(z, y, all_in(w, z, mem(w, y))));
  return conj(transitive, elements_transitive);
}

SchemeInstance gen_scheme(SchemeTag tag, const Formula& f) {
  SchemeInstance out{tag, f, Formula(), std::nullopt, false};
  require_vars(f, template_vars(tag), tag);
  std::vector<Var> avoid = avoid_list(f, {kV, kX, kY});
  Var a = fresh_var("a", avoid);
  avoid.push_back(a);
  Var b = fresh_var("b", avoid);
  avoid.push_back(b);
  Formula body;
  switch (tag) {
    case SchemeTag::Sep:
      body = forall(a, exists(b, forall(kX, iff(mem(kX, b), conj(mem(kX, a), f)))));
      break;
    case SchemeTag::Repl: {
      Var y2 = fresh_var("y", avoid);
      Formula hyp = all_in(kX, a, exists_unique(kY, f, y2));
      Formula image = exists(b, forall(kY, iff(mem(kY, b), ex_in(kX, a, f))));
      body = forall(a, imp(hyp, image));
      break;
    }
    case SchemeTag::Coll: {
      Formula hyp = all_in(kX, a, exists(kY, f));
      Formula coll = exists(b, all_in(kX, a, ex_in(kY, b, f)));
      body = forall(a, imp(hyp, coll));
      break;
    }
    case SchemeTag::Found: {
      Formula minimal = conj(f, all_in(kY, kX, neg(subst(f, kX, kY))));
      body = imp(exists(kX, f), exists(kX, minimal));
      break;
    }
    case SchemeTag::Ind: {
      Var z = fresh_var("z", avoid);
      avoid.push_back(z);
      Var s = fresh_var("s", avoid);
      avoid.push_back(s);
      Var w = fresh_var("w", avoid);
      Formula empty = neg(exists(w, mem(w, z)));
      avoid.push_back(w);
      Formula base = forall(z, imp(empty, subst(f, kX, z)));
      Formula step = forall(kX, imp(nat_formula(kX), imp(f, forall(s, imp(successor(s, kX, avoid), subst(f, kX, s))))));
      body = imp(conj(base, step), forall(kX, imp(nat_formula(kX), f)));
      out.finite_omega = true;
      break;
    }
    default:
      throw Error(to_string(tag) + " is not a set-theoretic scheme");
  }
  out.sentence = forall(kV, body);
  return out;
}

Formula delta0fin(const Formula& f) {
  switch (f.kind()) {
    case Kind::Mem:
    case Kind::Eq:
    case Kind::Pred:
      return f;
    case Kind::Prov:
      throw Error("Prov atoms are outside L_set(P)");
    case Kind::Not:
      return neg(delta0fin(f.sub()));
    case Kind::Or:
      return disj(delta0fin(f.left()), delta0fin(f.right()));
    case Kind::Exists: {
      Term bound(Var{});
      Formula body;
      if (!match_bounded_exists(f, &bound, &body)) throw Error("not a Delta0 formula: " + render(f));
      return ex_in(f.var(), bound, conj(pred(fin_symbol(), bound), delta0fin(body)));
    }
  }
  return f;
}

SchemeTag base_scheme(SchemeTag t) {
  switch (t) {
    case SchemeTag::IntSep:
      return SchemeTag::Sep;
    case SchemeTag::IntColl:
      return SchemeTag::Coll;
    case SchemeTag::IntRepl:
      return SchemeTag::Repl;
    case SchemeTag::IntInd:
      return SchemeTag::Ind;
    default:
      throw Error(to_string(t) + " is not an internal scheme");
  }
}

std::vector<Formula> internal_templates(SchemeTag tag, unsigned bound) {
  Family fam = depth_family(bound, template_vars(base_scheme(tag)));
  return {fam.begin(), fam.end()};
}

InternalReport check_internal(const TruthPredicate& t, SchemeTag tag, unsigned bound) {
  InternalReport rep{tag, 0, {}};
  SchemeTag base = base_scheme(tag);
  for (auto& f : internal_templates(tag, bound)) {
    Formula s = gen_scheme(base, f).sentence;
    ++rep.checked;
    if (!t.in_family(s))
      rep.failures.push_back({f, s, "outside family"});
    else if (!t.holds(s))
      rep.failures.push_back({f, s, "not in T"});
  }
  return rep;
}

std::optional<std::string> property_failure(const TruthPredicate& t, TruthProperty p,
                                            const std::vector<Formula>& seq) {
  if (seq.empty()) throw Error("property check on an empty sequence");
  std::optional<std::string> outside;
  auto T = [&](const Formula& s) {
    if (!t.in_family(s)) {
      if (!outside) outside = "outside family: " + render(s);
      return false;
    }
    return t.holds(s);
  };
  auto result = [&](bool ok, std::string msg) -> std::optional<std::string> {
    if (outside) return outside;
    if (ok) return std::nullopt;
    return msg;
  };
  std::size_t k = seq.size() - 1;
  switch (p) {
    case TruthProperty::DCOut:
    case TruthProperty::DCIn: {
      bool whole = T(big_or(seq));
      bool some = false;
      for (auto& s : seq) some = T(s) || some;
      if (p == TruthProperty::DCOut) return result(!whole || some, "disjunction in T but no disjunct is");
      return result(!some || whole, "a disjunct is in T but the disjunction is not");
    }
    case TruthProperty::PI: {
      bool hyp = T(seq[0]);
      for (std::size_t i = 0; i < k; ++i) hyp = T(imp(seq[i], seq[i + 1])) && hyp;
      return result(!hyp || T(seq[k]), "chain hypotheses in T but the last sentence is not");
    }
    case TruthProperty::SPI: {
      bool hyp = T(seq[0]);
      for (std::size_t j = 1; j <= k; ++j) {
        std::vector<Formula> prefix(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(j));
        hyp = T(imp(big_and(prefix), seq[j])) && hyp;
      }
      return result(!hyp || T(seq[k]), "strong chain hypotheses in T but the last sentence is not");
    }
  }
  return std::nullopt;
}

PropertyReport check_truth_property(const TruthPredicate& t, TruthProperty p,
                                    const std::vector<std::vector<Formula>>& seqs) {
  PropertyReport rep{p, 0, {}};
  for (auto& s : seqs) {
    ++rep.checked;
    if (auto msg = property_failure(t, p, s)) rep.violations.push_back({s, *msg});
  }
  return rep;
}

void for_each_sequence(const std::vector<Formula>& pool, unsigned max_len,
                       const std::function<void(const std::vector<Formula>&)>& fn) {
  if (pool.empty()) return;
  for (unsigned len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> idx(len, 0);
    std::vector<Formula> seq(len, pool[0]);
    bool done = false;
    while (!done) {
      fn(seq);
      done = true;
      for (std::size_t i = len; i-- > 0;) {
        if (++idx[i] < pool.size()) {
          seq[i] = pool[idx[i]];
          done = false;
          break;
        }
        idx[i] = 0;
        seq[i] = pool[0];
      }
    }
  }
}

PropertyReport check_truth_property(const TruthPredicate& t, TruthProperty p, const std::vector<Formula>& pool,
                                    unsigned max_len) {
  PropertyReport rep{p, 0, {}};
  for_each_sequence(pool, max_len, [&](const std::vector<Formula>& s) {
    ++rep.checked;
    if (auto msg = property_failure(t, p, s)) rep.violations.push_back({s, *msg});
  });
  return rep;
}

std::vector<Formula> psi_seq(const std::vector<Formula>& fs) {
  if (fs.empty()) throw Error("psi sequence of an empty sequence");
  std::vector<Formula> out{neg(fs[0])};
  std::vector<Formula> negs{neg(fs[0])};
  for (std::size_t i = 1; i < fs.size(); ++i) {
    out.push_back(imp(neg(fs[i]), big_or(negs)));
    negs.push_back(neg(fs[i]));
  }
  return out;
}

Formula theta_s(const std::vector<Formula>& s, Var x) {
  if (s.empty()) throw Error("theta_s of an empty sequence");
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i].sentence()) throw Error("theta_s needs sentences, got " + render(s[i]));
    parts.push_back(conj(eq(x, Term(numeral(static_cast<unsigned>(i)))), s[i]));
  }
  return big_or(parts);
}

Var prov_symbol(const std::string& base, unsigned n, unsigned iter) {
  std::string name = "Prov_" + base + "_True" + std::to_string(n);
  if (iter > 0) name += "_iter" + std::to_string(iter);
  return Var(name);
}

SchemeInstance gen_ref(const std::string& base, unsigned n, const Formula& f, RefKind kind, unsigned iter) {
  if (n < 1) throw Error("REF/CON need n >= 1");
  if (base.empty()) throw Error("REF/CON need a base theory name");
  if (f.free_vars().size() > 1) throw Error("arity mismatch: " + render(f) + " is not unary");
  Var x = f.free_vars().empty() ? fresh_var("x", all_vars(f)) : f.free_vars()[0];
  Var sym = prov_symbol(base, n, iter);
  SchemeTag tag = kind == RefKind::REF ? SchemeTag::REF : SchemeTag::CON;
  Formula body = kind == RefKind::REF ? imp(prov(sym, x, x, f), f) : imp(f, neg(prov(sym, x, x, neg(f))));
  return SchemeInstance{tag, f, forall(x, body), RefMeta{base, n, iter}, false};
}

}  // namespace tk
