#include "tk/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "tk/error.hpp"
#include "tk/parse.hpp"

namespace tk {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// '#' followed by anything but a digit starts a comment; #<digits> is a
// constant.
std::string_view strip_comment(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == '#' && (i + 1 == s.size() || !std::isdigit(static_cast<unsigned char>(s[i + 1]))))
      return trim(s.substr(0, i));
  return trim(s);
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw Error("line " + std::to_string(line) + ": " + msg);
}

// Splits "keyword rest".
std::pair<std::string_view, std::string_view> head(std::string_view s) {
  std::size_t sp = s.find_first_of(" \t");
  if (sp == std::string_view::npos) return {s, {}};
  return {s.substr(0, sp), trim(s.substr(sp))};
}

BigNat parse_code(std::string_view s, std::size_t line) {
  if (!s.empty() && s.front() == '#') s.remove_prefix(1);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos)
    fail(line, "bad Ackermann code '" + std::string(s) + "'");
  return BigNat(std::string(s));
}

unsigned parse_unsigned(std::string_view s, std::size_t line) {
  if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string_view::npos)
    fail(line, "expected a number, got '" + std::string(s) + "'");
  return static_cast<unsigned>(std::stoul(std::string(s)));
}

Formula parse_at(std::string_view s, std::size_t line) {
  try {
    return parse(s);
  } catch (const ParseError& e) {
    fail(line, e.what());
  }
}

std::string code_str(const HFSet& x) { return x.code().str(); }

std::string assignment_str(const Assignment& a) {
  std::string out;
  for (const auto& [v, x] : a.entries()) out += " " + v.name() + "=" + code_str(x);
  return out;
}

std::string structure_header(const Structure& m, const std::string& ref) {
  if (auto n = m.stage_index()) return "stage " + std::to_string(*n);
  if (ref.empty()) throw Error("a non-standard structure needs a file reference");
  return ref;
}

}  // namespace

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Digraph parse_digraph(std::string_view text) {
  Digraph g;
  std::map<std::string, std::uint64_t> index;
  auto lines = lines_of(text);
  for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
    auto l = strip_comment(lines[ln - 1]);
    if (l.empty()) continue;
    auto w = words(l);
    if (w[0] == "stage" && w.size() == 2) {
      if (g.stage || !g.ids.empty()) fail(ln, "stage must be the only declaration");
      g.stage = parse_unsigned(w[1], ln);
    } else if (w[0] == "element" && w.size() == 2) {
      if (g.stage) fail(ln, "stage must be the only declaration");
      if (!index.emplace(w[1], g.ids.size()).second) fail(ln, "duplicate element " + w[1]);
      g.ids.push_back(w[1]);
    } else if (w[0] == "edge" && w.size() == 3) {
      auto a = index.find(w[1]), b = index.find(w[2]);
      if (a == index.end() || b == index.end()) fail(ln, "edge between undeclared elements");
      g.edges.emplace_back(a->second, b->second);
    } else {
      fail(ln, "expected stage, element or edge");
    }
  }
  return g;
}

Structure parse_structure(std::string_view text) {
  auto [stage, ids, edges] = parse_digraph(text);
  if (stage) return Structure::stage(*stage);
  if (ids.empty()) throw Error("structure declares no elements");

  std::vector<HFSet> labels;
  bool coded = std::all_of(ids.begin(), ids.end(), [](const std::string& s) { return s[0] == '#'; });
  if (coded) {
    for (const auto& id : ids) labels.push_back(HFSet::from_code(parse_code(id, 0)));
  } else {
    std::vector<std::uint64_t> nodes(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) nodes[i] = i;
    auto c = collapse(nodes, edges);
    for (std::size_t i = 0; i < ids.size(); ++i) labels.push_back(c.at(i));
  }
  std::vector<std::pair<HFSet, HFSet>> label_edges;
  for (auto [a, b] : edges) label_edges.emplace_back(labels[a], labels[b]);
  return Structure::make(std::move(labels), label_edges);
}

Structure load_structure(const std::filesystem::path& p) { return parse_structure(read_file(p)); }

std::string write_structure(const Structure& m) {
  if (auto n = m.stage_index()) return "stage " + std::to_string(*n) + "\n";
  std::string out;
  for (const auto& l : m.labels()) out += "element #" + code_str(l) + "\n";
  for (auto [a, b] : m.edges()) out += "edge #" + code_str(m.label(a)) + " #" + code_str(m.label(b)) + "\n";
  return out;
}

AnyClass parse_class(std::string_view text, const std::filesystem::path& base_dir) {
  auto lines = lines_of(text);
  std::optional<bool> truth;
  Structure m;
  Family family;
  std::vector<std::pair<Formula, Assignment>> entries;
  for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
    auto l = strip_comment(lines[ln - 1]);
    if (l.empty()) continue;
    auto [kw, rest] = head(l);
    if (!truth) {
      auto w = words(l);
      if (w.size() < 4 || w[0] != "class" || (w[1] != "sat" && w[1] != "truth") || w[2] != "over")
        fail(ln, "expected `class sat|truth over <structure>`");
      truth = w[1] == "truth";
      if (w[3] == "stage") {
        if (w.size() != 5) fail(ln, "expected `stage <n>`");
        m = Structure::stage(parse_unsigned(w[4], ln));
      } else {
        if (w.size() != 4) fail(ln, "unexpected text after the structure reference");
        m = load_structure(base_dir / w[3]);
      }
      continue;
    }
    if (kw == "family") {
      family.insert(parse_at(rest, ln));
    } else if (kw == "entry") {
      std::size_t used = 0;
      Formula f;
      try {
        f = parse_prefix(rest, used);
      } catch (const ParseError& e) {
        fail(ln, e.what());
      }
      Assignment a;
      for (const auto& w : words(rest.substr(used))) {
        auto eq = w.find('=');
        if (eq == std::string::npos || eq == 0) fail(ln, "expected <var>=<code>, got '" + w + "'");
        a.set(Var(w.substr(0, eq)), HFSet::from_code(parse_code(std::string_view(w).substr(eq + 1), ln)));
      }
      if (*truth && !a.empty()) fail(ln, "truth class entries take no assignment");
      entries.emplace_back(f, a);
    } else {
      fail(ln, "expected family or entry");
    }
  }
  if (!truth) throw Error("missing class header");
  if (*truth) {
    TruthClass t{m, family, {}};
    for (auto& [f, a] : entries) {
      (void)a;
      t.sentences.insert(f);
    }
    return t;
  }
  SatClass s{m, family, {}};
  for (auto& e : entries) s.entries.insert(e);
  return s;
}

AnyClass load_class(const std::filesystem::path& p) { return parse_class(read_file(p), p.parent_path()); }

std::string write_class(const SatClass& s, const std::string& structure_ref) {
  std::string out = "class sat over " + structure_header(s.m, structure_ref) + "\n";
  for (const auto& f : s.family) out += "family " + render_sugared(f) + "\n";
  for (const auto& [f, a] : sorted_entries(s)) out += "entry " + render_sugared(f) + assignment_str(a) + "\n";
  return out;
}

std::string write_class(const TruthClass& t, const std::string& structure_ref) {
  std::string out = "class truth over " + structure_header(t.m, structure_ref) + "\n";
  for (const auto& f : t.family) out += "family " + render_sugared(f) + "\n";
  for (const auto& s : sorted_sentences(t)) out += "entry " + render_sugared(s) + "\n";
  return out;
}

std::vector<Formula> Theory::sentences() const {
  std::vector<Formula> out;
  for (const auto& l : lines) out.push_back(l.sentence);
  return out;
}

Theory parse_theory(std::string_view text) {
  Theory t;
  bool seen_header = false;
  auto lines = lines_of(text);
  for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
    auto l = strip_comment(lines[ln - 1]);
    if (l.empty()) continue;
    if (!seen_header) {
      auto [kw, rest] = head(l);
      if (kw != "theory" || rest.empty() || words(rest).size() != 1) fail(ln, "expected `theory <name>`");
      t.name = std::string(rest);
      seen_header = true;
      continue;
    }
    TheoryLine tl;
    std::string_view body = l;
    if (auto at = l.find("@ref"); at != std::string_view::npos) {
      body = trim(l.substr(0, at));
      RefMeta meta;
      bool has_base = false;
      for (const auto& w : words(l.substr(at + 4))) {
        auto eq = w.find('=');
        if (eq == std::string::npos) fail(ln, "expected key=value in @ref, got '" + w + "'");
        std::string key = w.substr(0, eq), val = w.substr(eq + 1);
        if (key == "base") {
          meta.base = val;
          has_base = !val.empty();
        } else if (key == "n") {
          meta.n = parse_unsigned(val, ln);
        } else if (key == "iter") {
          meta.iter = parse_unsigned(val, ln);
        } else {
          fail(ln, "unknown @ref key '" + key + "'");
        }
      }
      if (!has_base) fail(ln, "@ref needs base=<name>");
      tl.ref = meta;
    }
    tl.sentence = parse_at(body, ln);
    if (!tl.sentence.sentence()) fail(ln, "not a sentence: " + render(tl.sentence));
    t.lines.push_back(std::move(tl));
  }
  if (!seen_header) throw Error("missing theory header");
  return t;
}

Theory load_theory(const std::filesystem::path& p) { return parse_theory(read_file(p)); }

std::string write_theory(const Theory& t) {
  std::string out = "theory " + t.name + "\n";
  for (const auto& l : t.lines) {
    out += render_sugared(l.sentence);
    if (l.ref)
      out += " @ref base=" + l.ref->base + " n=" + std::to_string(l.ref->n) + " iter=" + std::to_string(l.ref->iter);
    out += "\n";
  }
  return out;
}

Proof parse_proof(std::string_view text) {
  Proof p;
  bool seen_header = false;
  auto lines = lines_of(text);
  for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
    auto l = strip_comment(lines[ln - 1]);
    if (l.empty()) continue;
    if (!seen_header) {
      if (l != "proof") fail(ln, "expected `proof`");
      seen_header = true;
      continue;
    }
    auto colon = l.find(':');
    auto semi = l.rfind(';');
    if (colon == std::string_view::npos || semi == std::string_view::npos || semi < colon)
      fail(ln, "expected `<n>: <formula> ; <justification>`");
    unsigned n = parse_unsigned(trim(l.substr(0, colon)), ln);
    if (n != p.lines.size() + 1) fail(ln, "proof lines must be numbered consecutively from 1");
    Formula f = parse_at(trim(l.substr(colon + 1, semi - colon - 1)), ln);
    auto w = words(l.substr(semi + 1));
    Justification j;
    if (w.size() == 1 && w[0] == "premise") {
      j = Justification::premise();
    } else if (w.size() == 2 && w[0] == "axiom") {
      j = Justification::axiom(w[1]);
    } else if (w.size() == 3 && w[0] == "mp") {
      j = Justification::mp(parse_unsigned(w[1], ln), parse_unsigned(w[2], ln));
    } else if (w.size() == 3 && w[0] == "gen") {
      j = Justification::gen(parse_unsigned(w[1], ln), Var(w[2]));
    } else {
      fail(ln, "bad justification");
    }
    p.lines.push_back({f, j});
  }
  if (!seen_header) throw Error("missing proof header");
  return p;
}

Proof load_proof(const std::filesystem::path& p) { return parse_proof(read_file(p)); }

std::string write_proof(const Proof& p) {
  std::string out = "proof\n";
  for (std::size_t i = 0; i < p.lines.size(); ++i)
    out += std::to_string(i + 1) + ": " + render_sugared(p.lines[i].formula) + " ; " + p.lines[i].just.to_string() + "\n";
  return out;
}

}  // namespace tk
