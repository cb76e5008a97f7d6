#include "tk/formula.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "tk/error.hpp"

namespace tk {

struct IdentRec {
  std::string name;
  std::optional<std::uint64_t> index;
};

namespace {

std::optional<std::uint64_t> parse_v_index(std::string_view s) {
  if (s.size() < 2 || s[0] != 'v' || s.size() > 19) return std::nullopt;
  if (s[1] == '0' && s.size() > 2) return std::nullopt;
  std::uint64_t n = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    n = n * 10 + static_cast<std::uint64_t>(s[i] - '0');
  }
  return n;
}

const IdentRec* intern_ident(std::string_view name) {
  static std::mutex mu;
  static auto* table = new std::unordered_map<std::string, std::unique_ptr<IdentRec>>;
  std::lock_guard<std::mutex> lock(mu);
  auto it = table->find(std::string(name));
  if (it != table->end()) return it->second.get();
  auto rec = std::make_unique<IdentRec>(IdentRec{std::string(name), parse_v_index(name)});
  const IdentRec* p = rec.get();
  table->emplace(std::string(name), std::move(rec));
  return p;
}

}  // namespace

Var::Var(std::string_view name) : rec_(intern_ident(name)) {}

Var Var::v(unsigned i) { return Var("v" + std::to_string(i)); }

const std::string& Var::name() const {
  static const std::string empty;
  return rec_ ? rec_->name : empty;
}

std::optional<std::uint64_t> Var::index() const {
  return rec_ ? rec_->index : std::nullopt;
}

std::strong_ordering Var::operator<=>(const Var& o) const {
  if (rec_ == o.rec_) return std::strong_ordering::equal;
  if (!rec_) return std::strong_ordering::less;
  if (!o.rec_) return std::strong_ordering::greater;
  if (rec_->index && o.rec_->index) return *rec_->index <=> *o.rec_->index;
  if (rec_->index) return std::strong_ordering::less;
  if (o.rec_->index) return std::strong_ordering::greater;
  return rec_->name <=> o.rec_->name;
}

namespace {

std::size_t combine(std::size_t h, std::size_t x) {
  h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

void add_term_var(VarList& fv, const Term& t) {
  if (t.is_var() && std::find(fv.begin(), fv.end(), t.var()) == fv.end()) fv.push_back(t.var());
}

}  // namespace

struct FormulaBuilder {
  static Formula make(std::shared_ptr<FormulaNode> n) {
    std::size_t h = static_cast<std::size_t>(n->kind) * 0x100000001b3ull;
    switch (n->kind) {
      case Kind::Mem:
      case Kind::Eq:
        add_term_var(n->fv, n->t1);
        add_term_var(n->fv, n->t2);
        std::sort(n->fv.begin(), n->fv.end());
        h = combine(combine(h, n->t1.hash()), n->t2.hash());
        break;
      case Kind::Pred:
        add_term_var(n->fv, n->t1);
        h = combine(combine(h, n->sym.hash()), n->t1.hash());
        break;
      case Kind::Prov:
        add_term_var(n->fv, n->t1);
        h = combine(combine(combine(combine(h, n->sym.hash()), n->t1.hash()), n->v.hash()),
                    n->a.hash());
        break;
      case Kind::Not:
        n->fv.assign(n->a.free_vars().begin(), n->a.free_vars().end());
        n->depth = n->a.depth() + 1;
        h = combine(h, n->a.hash());
        break;
      case Kind::Or: {
        auto l = n->a.free_vars();
        auto r = n->b.free_vars();
        n->fv.reserve(l.size() + r.size());
        std::set_union(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(n->fv));
        n->depth = std::max(n->a.depth(), n->b.depth()) + 1;
        h = combine(combine(h, n->a.hash()), n->b.hash());
        break;
      }
      case Kind::Exists:
        for (auto& x : n->a.free_vars())
          if (x != n->v) n->fv.push_back(x);
        n->depth = n->a.depth() + 1;
        h = combine(combine(h, n->v.hash()), n->a.hash());
        break;
    }
    n->hash = h;
    return Formula(std::move(n));
  }
};


std::vector<Formula> Formula::immediate_subformulas() const {
  switch (node_->kind) {
    case Kind::Not:
    case Kind::Exists:
      return {node_->a};
    case Kind::Or:
      return {node_->a, node_->b};
    default:
      return {};
  }
}

bool Formula::operator==(const Formula& o) const {
  const FormulaNode* x = node_.get();
  const FormulaNode* y = o.node_.get();
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->hash != y->hash || x->kind != y->kind || x->depth != y->depth) return false;
  switch (x->kind) {
    case Kind::Mem:
    case Kind::Eq:
      return x->t1 == y->t1 && x->t2 == y->t2;
    case Kind::Pred:
      return x->sym == y->sym && x->t1 == y->t1;
    case Kind::Prov:
      return x->sym == y->sym && x->t1 == y->t1 && x->v == y->v && x->a == y->a;
    case Kind::Not:
      return x->a == y->a;
    case Kind::Or:
      return x->a == y->a && x->b == y->b;
    case Kind::Exists:
      return x->v == y->v && x->a == y->a;
  }
  return false;
}

namespace {

std::shared_ptr<FormulaNode> node(Kind k) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  return n;
}

void require(const Formula& f) {
  if (!f.valid()) throw Error("empty formula");
}

}  // namespace

Formula mem(Term a, Term b) {
  auto n = node(Kind::Mem);
  n->t1 = std::move(a);
  n->t2 = std::move(b);
  return FormulaBuilder::make(std::move(n));
}

Formula eq(Term a, Term b) {
  auto n = node(Kind::Eq);
  n->t1 = std::move(a);
  n->t2 = std::move(b);
  return FormulaBuilder::make(std::move(n));
}

Formula pred(Var symbol, Term arg) {
  auto n = node(Kind::Pred);
  n->sym = symbol;
  n->t1 = std::move(arg);
  return FormulaBuilder::make(std::move(n));
}

Formula prov(Var symbol, Term arg, Var v, Formula quoted) {
  require(quoted);
  for (auto& x : quoted.free_vars())
    if (x != v) throw Error("quoted formula has free variable " + x.name() + " besides " + v.name());
  auto n = node(Kind::Prov);
  n->sym = symbol;
  n->t1 = std::move(arg);
  n->v = v;
  n->a = std::move(quoted);
  return FormulaBuilder::make(std::move(n));
}

Formula neg(Formula a) {
  require(a);
  auto n = node(Kind::Not);
  n->a = std::move(a);
  return FormulaBuilder::make(std::move(n));
}

Formula disj(Formula a, Formula b) {
  require(a);
  require(b);
  auto n = node(Kind::Or);
  n->a = std::move(a);
  n->b = std::move(b);
  return FormulaBuilder::make(std::move(n));
}

Formula exists(Var v, Formula a) {
  require(a);
  auto n = node(Kind::Exists);
  n->v = v;
  n->a = std::move(a);
  return FormulaBuilder::make(std::move(n));
}

Formula conj(Formula a, Formula b) { return neg(disj(neg(std::move(a)), neg(std::move(b)))); }
Formula imp(Formula a, Formula b) { return disj(neg(std::move(a)), std::move(b)); }
Formula iff(Formula a, Formula b) { return conj(imp(a, b), imp(b, a)); }
Formula forall(Var v, Formula a) { return neg(exists(v, neg(std::move(a)))); }

Formula ex_in(Var v, Term bound, Formula a) {
  if (bound.is_var() && bound.var() == v) throw Error("bounded quantifier binds its own bound");
  return exists(v, conj(mem(v, std::move(bound)), std::move(a)));
}

Formula all_in(Var v, Term bound, Formula a) {
  return neg(ex_in(v, std::move(bound), neg(std::move(a))));
}

Var fin_symbol() {
  static const Var fin("fin");
  return fin;
}

// Coding ----------------------------------------------------------------

namespace {

BigNat name_number(const std::string& name) {
  BigNat n = 0;
  for (unsigned char c : name) n = n * 256 + (c + 1);
  return n;
}

std::optional<std::string> number_name(BigNat n) {
  std::string s;
  while (n > 0) {
    BigNat d = n % 256;
    if (d == 0) d = 256;
    s.push_back(static_cast<char>(static_cast<unsigned>(d) - 1));
    n = (n - d) / 256;
  }
  std::reverse(s.begin(), s.end());
  if (s.empty()) return std::nullopt;
  return s;
}

HFSet nat(std::uint64_t n) { return HFSet::from_code(n); }

HFSet var_number(Var v) {
  if (auto i = v.index()) return HFSet::from_code(BigNat(*i) * 2);
  return HFSet::from_code(name_number(v.name()) * 2 + 1);
}

HFSet term_code(const Term& t) {
  if (t.is_var()) return kuratowski(nat(0), var_number(t.var()));
  return kuratowski(nat(1), t.value());
}

HFSet compute_code(const Formula& f) {
  switch (f.kind()) {
    case Kind::Mem:
      return tuple({nat(2), term_code(f.lhs()), term_code(f.rhs())});
    case Kind::Eq:
      return tuple({nat(3), term_code(f.lhs()), term_code(f.rhs())});
    case Kind::Not:
      return kuratowski(nat(4), f.sub().code());
    case Kind::Or:
      return tuple({nat(5), f.left().code(), f.right().code()});
    case Kind::Exists:
      return tuple({nat(6), term_code(f.var()), f.sub().code()});
    case Kind::Pred:
      return tuple({nat(7), HFSet::from_code(name_number(f.symbol().name())), term_code(f.rhs())});
    case Kind::Prov:
      return tuple({nat(8), HFSet::from_code(name_number(f.symbol().name())), term_code(f.lhs()),
                    term_code(f.var()), f.sub().code()});
  }
  return HFSet();
}

std::optional<BigNat> as_number(const HFSet& x) {
  try {
    return x.code(4096);
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

std::optional<Var> decode_var(const HFSet& n) {
  auto num = as_number(n);
  if (!num) return std::nullopt;
  if (*num % 2 == 0) {
    BigNat i = *num / 2;
    if (i > BigNat(1000000000)) return std::nullopt;
    return Var::v(static_cast<unsigned>(i));
  }
  auto name = number_name((*num - 1) / 2);
  if (!name) return std::nullopt;
  Var v(*name);
  if (v.index()) return std::nullopt;
  return v;
}

std::optional<Term> decode_term(const HFSet& x) {
  auto p = unpair(x);
  if (!p) return std::nullopt;
  auto tag = p->first.small_code();
  if (tag == 0u) {
    auto v = decode_var(p->second);
    if (!v) return std::nullopt;
    return Term(*v);
  }
  if (tag == 1u) return Term(p->second);
  return std::nullopt;
}

std::optional<Var> decode_symbol(const HFSet& x) {
  auto num = as_number(x);
  if (!num) return std::nullopt;
  auto name = number_name(*num);
  if (!name) return std::nullopt;
  return Var(*name);
}

}  // namespace

const HFSet& Formula::code() const {
  std::call_once(node_->code_once, [this] { node_->code = compute_code(*this); });
  return node_->code;
}

bool formula_less(const Formula& a, const Formula& b) { return a.code() < b.code(); }

std::optional<Formula> decode_formula(const HFSet& code) {
  auto p = unpair(code);
  if (!p) return std::nullopt;
  auto tag = p->first.small_code();
  if (!tag) return std::nullopt;
  const HFSet& rest = p->second;
  switch (*tag) {
    case 2:
    case 3: {
      auto parts = untuple(rest, 2);
      if (!parts) return std::nullopt;
      auto a = decode_term((*parts)[0]);
      auto b = decode_term((*parts)[1]);
      if (!a || !b) return std::nullopt;
      return *tag == 2 ? mem(*a, *b) : eq(*a, *b);
    }
    case 4: {
      auto a = decode_formula(rest);
      if (!a) return std::nullopt;
      return neg(*a);
    }
    case 5: {
      auto parts = untuple(rest, 2);
      if (!parts) return std::nullopt;
      auto a = decode_formula((*parts)[0]);
      auto b = decode_formula((*parts)[1]);
      if (!a || !b) return std::nullopt;
      return disj(*a, *b);
    }
    case 6: {
      auto parts = untuple(rest, 2);
      if (!parts) return std::nullopt;
      auto v = decode_term((*parts)[0]);
      auto a = decode_formula((*parts)[1]);
      if (!v || !v->is_var() || !a) return std::nullopt;
      return exists(v->var(), *a);
    }
    case 7: {
      auto parts = untuple(rest, 2);
      if (!parts) return std::nullopt;
      auto s = decode_symbol((*parts)[0]);
      auto t = decode_term((*parts)[1]);
      if (!s || !t) return std::nullopt;
      return pred(*s, *t);
    }
    case 8: {
      auto parts = untuple(rest, 4);
      if (!parts) return std::nullopt;
      auto s = decode_symbol((*parts)[0]);
      auto t = decode_term((*parts)[1]);
      auto v = decode_term((*parts)[2]);
      auto a = decode_formula((*parts)[3]);
      if (!s || !t || !v || !v->is_var() || !a) return std::nullopt;
      try {
        return prov(*s, *t, v->var(), *a);
      } catch (const Error&) {
        return std::nullopt;
      }
    }
    default:
      return std::nullopt;
  }
}

// Assignments -------------------------------------------------------------

Assignment::Assignment(std::initializer_list<std::pair<Var, HFSet>> init) {
  for (auto& [v, x] : init) set(v, x);
}

void Assignment::set(Var v, HFSet x) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const auto& e, const Var& k) { return e.first < k; });
  if (it != entries_.end() && it->first == v)
    it->second = std::move(x);
  else
    entries_.insert(it, {v, std::move(x)});
}

std::optional<HFSet> Assignment::get(Var v) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const auto& e, const Var& k) { return e.first < k; });
  if (it != entries_.end() && it->first == v) return it->second;
  return std::nullopt;
}

std::vector<Var> Assignment::domain() const {
  std::vector<Var> d;
  for (auto& e : entries_) d.push_back(e.first);
  return d;
}

bool Assignment::total_for(std::span<const Var> vars) const {
  if (vars.size() != entries_.size()) return false;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] != entries_[i].first) return false;
  return true;
}

Assignment Assignment::restrict(std::span<const Var> vars) const {
  Assignment r;
  for (auto& e : entries_)
    if (std::find(vars.begin(), vars.end(), e.first) != vars.end()) r.entries_.push_back(e);
  return r;
}

std::string Assignment::to_string() const {
  std::string s;
  for (auto& [v, x] : entries_) {
    if (!s.empty()) s += ' ';
    s += v.name() + "=" + x.to_string();
  }
  return s;
}

bool Assignment::operator<(const Assignment& o) const {
  return std::lexicographical_compare(
      entries_.begin(), entries_.end(), o.entries_.begin(), o.entries_.end(),
      [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
      });
}

std::size_t Assignment::hash() const {
  std::size_t h = entries_.size();
  for (auto& [v, x] : entries_) h = combine(combine(h, v.hash()), x.hash());
  return h;
}

// Substitution ------------------------------------------------------------

namespace {

Term subst_term(const Term& t, Var v, const Term& r) {
  return t.is_var() && t.var() == v ? r : t;
}

// Returns nullopt on capture.
std::optional<Formula> subst(const Formula& f, Var v, const Term& r) {
  if (!f.free(v)) return f;
  switch (f.kind()) {
    case Kind::Mem:
      return mem(subst_term(f.lhs(), v, r), subst_term(f.rhs(), v, r));
    case Kind::Eq:
      return eq(subst_term(f.lhs(), v, r), subst_term(f.rhs(), v, r));
    case Kind::Pred:
      return pred(f.symbol(), subst_term(f.rhs(), v, r));
    case Kind::Prov:
      return prov(f.symbol(), subst_term(f.lhs(), v, r), f.var(), f.sub());
    case Kind::Not: {
      auto a = subst(f.sub(), v, r);
      if (!a) return std::nullopt;
      return neg(*a);
    }
    case Kind::Or: {
      auto a = subst(f.left(), v, r);
      auto b = subst(f.right(), v, r);
      if (!a || !b) return std::nullopt;
      return disj(*a, *b);
    }
    case Kind::Exists: {
      if (r.is_var() && r.var() == f.var()) return std::nullopt;
      auto a = subst(f.sub(), v, r);
      if (!a) return std::nullopt;
      return exists(f.var(), *a);
    }
  }
  return std::nullopt;
}

void collect_vars(const Formula& f, std::vector<Var>& out) {
  auto term = [&](const Term& t) {
    if (t.is_var()) out.push_back(t.var());
  };
  switch (f.kind()) {
    case Kind::Mem:
    case Kind::Eq:
      term(f.lhs());
      term(f.rhs());
      break;
    case Kind::Pred:
      term(f.rhs());
      break;
    case Kind::Prov:
      term(f.lhs());
      out.push_back(f.var());
      collect_vars(f.sub(), out);
      break;
    case Kind::Not:
      collect_vars(f.sub(), out);
      break;
    case Kind::Or:
      collect_vars(f.left(), out);
      collect_vars(f.right(), out);
      break;
    case Kind::Exists:
      out.push_back(f.var());
      collect_vars(f.sub(), out);
      break;
  }
}

void collect_constants(const Formula& f, std::vector<HFSet>& out) {
  auto term = [&](const Term& t) {
    if (t.is_const()) out.push_back(t.value());
  };
  switch (f.kind()) {
    case Kind::Mem:
    case Kind::Eq:
      term(f.lhs());
      term(f.rhs());
      break;
    case Kind::Pred:
    case Kind::Prov:
      term(f.lhs());
      break;
    case Kind::Not:
    case Kind::Exists:
      collect_constants(f.sub(), out);
      break;
    case Kind::Or:
      collect_constants(f.left(), out);
      collect_constants(f.right(), out);
      break;
  }
}

Formula rename_rec(const Formula& f, const std::vector<Var>& avoid, std::vector<Var>& used) {
  switch (f.kind()) {
    case Kind::Not:
      return neg(rename_rec(f.sub(), avoid, used));
    case Kind::Or:
      return disj(rename_rec(f.left(), avoid, used), rename_rec(f.right(), avoid, used));
    case Kind::Exists: {
      Formula body = rename_rec(f.sub(), avoid, used);
      Var v = f.var();
      if (std::find(avoid.begin(), avoid.end(), v) == avoid.end()) return exists(v, body);
      Var w = fresh_var(v.name(), used);
      used.push_back(w);
      auto renamed = subst(body, v, Term(w));
      return exists(w, *renamed);
    }
    default:
      return f;
  }
}

}  // namespace

Formula close(const Formula& f, const Assignment& a) {
  Formula out = f;
  for (auto& [v, x] : a.entries()) {
    if (!f.free(v)) throw Error("variable " + v.name() + " is not free in the formula");
    out = *subst(out, v, Term(x));
  }
  return out;
}

std::optional<Formula> substitute(const Formula& f, Var v, const Term& t) {
  return subst(f, v, t);
}

std::vector<Var> all_vars(const Formula& f) {
  std::vector<Var> out;
  collect_vars(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Var fresh_var(std::string_view base, const std::vector<Var>& avoid) {
  std::string b(base);
  // Strip a trailing counter so repeated renaming does not grow names.
  while (b.size() > 1 && std::isdigit(static_cast<unsigned char>(b.back())) && b[0] != 'v') b.pop_back();
  auto taken = [&](const Var& v) { return std::find(avoid.begin(), avoid.end(), v) != avoid.end(); };
  Var cand(b);
  if (!taken(cand)) return cand;
  for (unsigned i = 1;; ++i) {
    Var c(b + std::to_string(i));
    if (!taken(c)) return c;
  }
}

std::vector<HFSet> constants(const Formula& f) {
  std::vector<HFSet> out;
  collect_constants(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Formula rename_bound(const Formula& f, const std::vector<Var>& avoid) {
  std::vector<Var> used = all_vars(f);
  used.insert(used.end(), avoid.begin(), avoid.end());
  return rename_rec(f, avoid, used);
}

}  // namespace tk
