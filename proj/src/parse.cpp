#include "tk/parse.hpp"

#include <cctype>
#include <vector>

#include "tk/error.hpp"

namespace tk {

namespace {

struct SExpr {
  bool list = false;
  std::string atom;
  std::size_t offset = 0;  // 1-based
  std::vector<SExpr> items;
};

bool atom_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '+' ||
         c == '#' || c == '\'' || c == '.' || c == '*' || c == '@' || c == '$';
}

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  SExpr read() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_ + 1);
    char c = s_[pos_];
    if (c == '(') {
      SExpr e;
      e.list = true;
      e.offset = pos_ + 1;
      ++pos_;
      for (;;) {
        skip();
        if (pos_ >= s_.size()) throw ParseError("unbalanced expression", pos_ + 1);
        if (s_[pos_] == ')') {
          ++pos_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == ')') throw ParseError("unexpected ')'", pos_ + 1);
    if (!atom_char(c)) throw ParseError(std::string("unexpected character '") + c + "'", pos_ + 1);
    SExpr e;
    e.offset = pos_ + 1;
    while (pos_ < s_.size() && atom_char(s_[pos_])) e.atom.push_back(s_[pos_++]);
    return e;
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

Var to_var(const SExpr& e) {
  if (e.list) throw ParseError("expected a variable", e.offset);
  char c = e.atom[0];
  if (c == '#' || std::isdigit(static_cast<unsigned char>(c)))
    throw ParseError("expected a variable, got '" + e.atom + "'", e.offset);
  return Var(e.atom);
}

Term to_term(const SExpr& e) {
  if (e.list) throw ParseError("expected a term", e.offset);
  if (e.atom[0] == '#') {
    std::string digits = e.atom.substr(1);
    bool ok = !digits.empty() && digits.size() < 4000;
    for (char c : digits) ok = ok && std::isdigit(static_cast<unsigned char>(c));
    if (!ok) throw ParseError("malformed constant literal '" + e.atom + "'", e.offset);
    return Term(HFSet::from_code(BigNat(digits)));
  }
  return Term(to_var(e));
}

Formula to_formula(const SExpr& e) {
  if (!e.list) throw ParseError("expected a formula, got '" + e.atom + "'", e.offset);
  if (e.items.empty()) throw ParseError("empty form", e.offset);
  const SExpr& head = e.items[0];
  if (head.list) throw ParseError("form name expected", head.offset);
  const std::string& op = head.atom;
  std::size_t n = e.items.size() - 1;
  auto arity = [&](std::size_t k) {
    if (n != k)
      throw ParseError("'" + op + "' takes " + std::to_string(k) + " arguments, got " +
                           std::to_string(n),
                       e.offset);
  };
  auto at_least = [&](std::size_t k) {
    if (n < k) throw ParseError("'" + op + "' takes at least " + std::to_string(k) + " arguments", e.offset);
  };
  auto f = [&](std::size_t i) { return to_formula(e.items[i]); };

  if (op == "mem" || op == "eq") {
    arity(2);
    Term a = to_term(e.items[1]);
    Term b = to_term(e.items[2]);
    return op == "mem" ? mem(a, b) : eq(a, b);
  }
  if (op == "not") {
    arity(1);
    return neg(f(1));
  }
  if (op == "or" || op == "and") {
    at_least(2);
    Formula acc = f(1);
    for (std::size_t i = 2; i <= n; ++i) acc = op == "or" ? disj(acc, f(i)) : conj(acc, f(i));
    return acc;
  }
  if (op == "imp" || op == "iff") {
    arity(2);
    return op == "imp" ? imp(f(1), f(2)) : iff(f(1), f(2));
  }
  if (op == "ex" || op == "all") {
    arity(2);
    Var v = to_var(e.items[1]);
    return op == "ex" ? exists(v, f(2)) : forall(v, f(2));
  }
  if (op == "ex-in" || op == "all-in") {
    arity(3);
    Var v = to_var(e.items[1]);
    Term t = to_term(e.items[2]);
    if (t.is_var() && t.var() == v)
      throw ParseError("bounded quantifier binds its own bound", e.items[2].offset);
    return op == "ex-in" ? ex_in(v, t, f(3)) : all_in(v, t, f(3));
  }
  if (op == "pred") {
    arity(2);
    return pred(to_var(e.items[1]), to_term(e.items[2]));
  }
  if (op == "prov") {
    arity(4);
    try {
      return prov(to_var(e.items[1]), to_term(e.items[2]), to_var(e.items[3]), f(4));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(err.what(), e.offset);
    }
  }
  throw ParseError("unknown form '" + op + "'", head.offset);
}

}  // namespace

Formula parse_prefix(std::string_view text, std::size_t& consumed) {
  Reader r(text);
  SExpr e = r.read();
  Formula f = to_formula(e);
  consumed = r.pos();
  return f;
}

Formula parse(std::string_view text) {
  Reader r(text);
  SExpr e = r.read();
  r.skip();
  if (r.pos() != text.size()) throw ParseError("trailing input", r.pos() + 1);
  return to_formula(e);
}

std::string render(const Term& t) {
  if (t.is_var()) return t.var().name();
  return "#" + t.value().code().str();
}

namespace {

void render_to(const Formula& f, std::string& out, bool sugar);

void bin(std::string& out, const char* op, const Formula& a, const Formula& b, bool sugar) {
  out += '(';
  out += op;
  out += ' ';
  render_to(a, out, sugar);
  out += ' ';
  render_to(b, out, sugar);
  out += ')';
}

// Exists(v, Not(Or(Not(Mem(v,t)), Not(G)))) with t != v.
bool bounded_shape(const Formula& f, Term* bound, Formula* body) {
  if (f.kind() != Kind::Exists) return false;
  const Formula& n = f.sub();
  if (n.kind() != Kind::Not || n.sub().kind() != Kind::Or) return false;
  const Formula& l = n.sub().left();
  const Formula& r = n.sub().right();
  if (l.kind() != Kind::Not || r.kind() != Kind::Not) return false;
  const Formula& m = l.sub();
  if (m.kind() != Kind::Mem || !m.lhs().is_var() || m.lhs().var() != f.var()) return false;
  if (m.rhs().is_var() && m.rhs().var() == f.var()) return false;
  *bound = m.rhs();
  *body = r.sub();
  return true;
}

void render_to(const Formula& f, std::string& out, bool sugar) {
  switch (f.kind()) {
    case Kind::Mem:
    case Kind::Eq:
      out += f.kind() == Kind::Mem ? "(mem " : "(eq ";
      out += render(f.lhs());
      out += ' ';
      out += render(f.rhs());
      out += ')';
      return;
    case Kind::Pred:
      out += "(pred " + f.symbol().name() + " " + render(f.rhs()) + ")";
      return;
    case Kind::Prov:
      out += "(prov " + f.symbol().name() + " " + render(f.lhs()) + " " + f.var().name() + " ";
      render_to(f.sub(), out, sugar);
      out += ')';
      return;
    case Kind::Not: {
      const Formula& a = f.sub();
      if (sugar) {
        if (a.kind() == Kind::Or && a.left().kind() == Kind::Not && a.right().kind() == Kind::Not) {
          bin(out, "and", a.left().sub(), a.right().sub(), sugar);
          return;
        }
        Term t(Var{});
        Formula body;
        if (bounded_shape(a, &t, &body) && body.kind() == Kind::Not) {
          out += "(all-in " + a.var().name() + " " + render(t) + " ";
          render_to(body.sub(), out, sugar);
          out += ')';
          return;
        }
        if (a.kind() == Kind::Exists && a.sub().kind() == Kind::Not) {
          out += "(all " + a.var().name() + " ";
          render_to(a.sub().sub(), out, sugar);
          out += ')';
          return;
        }
      }
      out += "(not ";
      render_to(a, out, sugar);
      out += ')';
      return;
    }
    case Kind::Or:
      if (sugar && f.left().kind() == Kind::Not)
        bin(out, "imp", f.left().sub(), f.right(), sugar);
      else
        bin(out, "or", f.left(), f.right(), sugar);
      return;
    case Kind::Exists: {
      Term t(Var{});
      Formula body;
      if (sugar && bounded_shape(f, &t, &body)) {
        out += "(ex-in " + f.var().name() + " " + render(t) + " ";
        render_to(body, out, sugar);
        out += ')';
        return;
      }
      out += "(ex " + f.var().name() + " ";
      render_to(f.sub(), out, sugar);
      out += ')';
      return;
    }
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_to(f, out, false);
  return out;
}

std::string render_sugared(const Formula& f) {
  std::string out;
  render_to(f, out, true);
  return out;
}

}  // namespace tk
