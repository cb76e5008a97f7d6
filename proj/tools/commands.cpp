#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <set>

#include <json.hpp>

#include "tk/classes.hpp"
#include "tk/enumerate.hpp"
#include "tk/eval.hpp"
#include "tk/hierarchy.hpp"
#include "tk/io.hpp"
#include "tk/parse.hpp"
#include "tk/proof.hpp"
#include "tk/schemes.hpp"

namespace tkcli {

using json = nlohmann::ordered_json;
using namespace tk;

namespace {

class Report {
 public:
  void record(json j) { records_.push_back(std::move(j)); }
  void line(const std::string& s) { summary_ += s + "\n"; }

  void finish(const RunConfig& c, std::ostream& out) const {
    std::string lines;
    for (const auto& r : records_) lines += r.dump() + "\n";
    if (c.json)
      out << lines;
    else
      out << summary_;
    if (!c.out.empty()) {
      std::ofstream f(c.out, std::ios::binary);
      if (!f) throw ConfigError("cannot write " + c.out);
      f << lines;
    }
  }

 private:
  std::vector<json> records_;
  std::string summary_;
};

std::string code_of(const HFSet& x) { return x.code().str(); }

json assignment_json(const Assignment& a) {
  json j = json::object();
  for (const auto& [v, x] : a.entries()) j[v.name()] = code_of(x);
  return j;
}

std::string assignment_text(const Assignment& a) {
  if (a.empty()) return "";
  std::string s = " [";
  bool first = true;
  for (const auto& [v, x] : a.entries()) {
    s += (first ? "" : " ") + v.name() + "=" + code_of(x);
    first = false;
  }
  return s + "]";
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

Structure structure_of(const RunConfig& c) {
  if (!c.structure.empty()) {
    if (c.stage) throw ConfigError("give either --stage or --structure, not both");
    return load_structure(c.structure);
  }
  if (c.stage) return Structure::stage(*c.stage);
  throw ConfigError("missing --stage or --structure");
}

bool has_structure(const RunConfig& c) { return c.stage || !c.structure.empty(); }

Formula formula_of(const RunConfig& c) {
  if (c.formula.empty()) throw ConfigError("missing --formula");
  try {
    return parse(c.formula);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("--formula: ") + e.what());
  }
}

std::vector<Var> vars_of(const RunConfig& c) {
  std::vector<Var> vs;
  for (const auto& v : c.vars) vs.emplace_back(v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

AnyClass class_of(const RunConfig& c) {
  if (c.class_path.empty()) throw ConfigError("missing --class");
  AnyClass cls = load_class(c.class_path);
  if (has_structure(c)) {
    Structure m = structure_of(c);
    std::visit([&](auto& k) { k.m = m; }, cls);
  }
  return cls;
}

// The truth predicate under test: an explicit class file, or the elementary
// diagram of the structure.
struct TruthSource {
  std::optional<TruthClass> cls;
  std::unique_ptr<TruthPredicate> view;
  Structure m;
};

TruthSource truth_of(const RunConfig& c) {
  TruthSource s;
  if (!c.class_path.empty()) {
    AnyClass cls = class_of(c);
    if (auto* t = std::get_if<TruthClass>(&cls))
      s.cls = std::move(*t);
    else
      s.cls = convert(std::get<SatClass>(cls));
    s.m = s.cls->m;
    s.view = std::make_unique<ExplicitTruth>(*s.cls);
  } else {
    s.m = structure_of(c);
    s.view = std::make_unique<TruthClassView>(diagram(s.m, 1000, true));
  }
  return s;
}

std::vector<Formula> sentence_pool(const RunConfig& c, const Structure& m) {
  Family fam = depth_family(c.depth.value_or(1), vars_of(c));
  return closures(m, std::vector<Formula>(fam.begin(), fam.end()));
}

Assignment parse_assign(const std::vector<std::string>& items) {
  Assignment a;
  for (const auto& it : items) {
    auto eq = it.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == it.size() ||
        it.find_first_not_of("0123456789", eq + 1) != std::string::npos)
      throw ConfigError("--assign expects <var>=<ack-code>, got '" + it + "'");
    a.set(Var(it.substr(0, eq)), HFSet::from_code(BigNat(it.substr(eq + 1))));
  }
  return a;
}

const char* kind_name(const Formula& f) {
  switch (f.kind()) {
    case Kind::Not:
      return "not";
    case Kind::Or:
      return "or";
    case Kind::Exists:
      return "ex";
    default:
      return "atom";
  }
}

int cmd_eval(const RunConfig& c, Report& r) {
  Structure m = structure_of(c);
  Formula f = formula_of(c);
  Assignment a = parse_assign(c.assign);
  EvalOptions o;
  if (c.budget) o.budget = *c.budget;
  bool v = sat(m, f, a, o);
  r.record({{"command", "eval"}, {"structure", m.describe()}, {"formula", render(f)}, {"assignment", assignment_json(a)}, {"value", v}});
  r.line(bool_text(v));
  return 0;
}

int cmd_diagram(const RunConfig& c, std::ostream& out) {
  Structure m = structure_of(c);
  TruthClass t = induced_truth(m, c.depth.value_or(1), vars_of(c));
  std::string text = write_class(t, c.structure);
  if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + c.out);
    f << text;
    out << "wrote " << t.sentences.size() << " sentences to " << c.out << "\n";
  }
  return 0;
}

int cmd_validate(const RunConfig& c, Report& r) {
  AnyClass cls = class_of(c);
  std::uint64_t budget = c.budget.value_or(kDefaultBudget);
  tk::Report rep = std::visit([&](const auto& k) { return validate_class(k, budget); }, cls);
  for (const auto& v : rep.violations) {
    r.record({{"clause", v.clause}, {"formula", render(v.formula)}, {"assignment", assignment_json(v.assignment)}, {"message", v.message}});
    r.line("clause (" + std::to_string(v.clause) + "): " + render_sugared(v.formula) + assignment_text(v.assignment) + ": " + v.message);
  }
  if (auto* s = std::get_if<SatClass>(&cls)) {
    auto pairs = is_extensional(*s);
    for (const auto& [e0, e1] : pairs)
      r.record({{"kind", "non-extensional"},
                {"formula", render(e0.first)}, {"assignment", assignment_json(e0.second)},
                {"other_formula", render(e1.first)}, {"other_assignment", assignment_json(e1.second)}});
    r.line("non-extensional pairs: " + std::to_string(pairs.size()));
  }
  r.line("violations: " + std::to_string(rep.violations.size()));
  return rep.ok() ? 0 : 1;
}

int cmd_convert(const RunConfig& c, std::ostream& out) {
  AnyClass cls = class_of(c);
  std::string text;
  if (auto* s = std::get_if<SatClass>(&cls))
    text = write_class(convert(*s), c.structure);
  else
    text = write_class(convert(std::get<TruthClass>(cls)), c.structure);
  if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + c.out);
    f << text;
  }
  return 0;
}

int cmd_reflect(const RunConfig& c, Report& r) {
  Formula f = formula_of(c);
  if (c.N == 0) throw ConfigError("--N must be at least 1");
  if (c.scan || c.a) {
    unsigned lo = c.scan ? 1 : *c.a, hi = c.scan ? c.N : *c.a;
    if (lo == 0 || hi > c.N) throw ConfigError("--a must lie in 1..N");
    for (unsigned a = lo; a <= hi; ++a) {
      bool v = reflects(c.N, a, f);
      r.record({{"N", c.N}, {"a", a}, {"formula", render(f)}, {"reflects", v}});
      r.line("a=" + std::to_string(a) + " " + bool_text(v));
    }
    return 0;
  }
  auto a = least_reflecting(c.N, f, 0);
  r.record({{"N", c.N}, {"formula", render(f)}, {"least", a ? json(*a) : json(nullptr)}});
  r.line(a ? "least a: " + std::to_string(*a) : "no a <= N reflects");
  return 0;
}

int cmd_true_k(const RunConfig& c, Report& r) {
  Structure m = structure_of(c);
  Formula f = formula_of(c);
  unsigned k = c.depth.value_or(f.depth());
  bool v = true_k(m, k, f);
  r.record({{"structure", m.describe()}, {"k", k}, {"formula", render(f)}, {"value", v}});
  r.line(bool_text(v));
  return 0;
}

SchemeTag scheme_of(const RunConfig& c) {
  auto tag = scheme_from_string(c.scheme);
  if (!tag) throw ConfigError("unknown --scheme '" + c.scheme + "'");
  return *tag;
}

int cmd_gen_scheme(const RunConfig& c, Report& r) {
  SchemeTag tag = scheme_of(c);
  auto inst = gen_scheme(tag, formula_of(c));
  r.record({{"scheme", to_string(tag)}, {"template", render(inst.templ)}, {"sentence", render(inst.sentence)},
            {"finite_omega", inst.finite_omega}});
  r.line(render_sugared(inst.sentence));
  return 0;
}

int cmd_gen_ref(const RunConfig& c, Report& r) {
  RefKind kind;
  if (c.kind == "REF")
    kind = RefKind::REF;
  else if (c.kind == "CON")
    kind = RefKind::CON;
  else
    throw ConfigError("--kind must be REF or CON");
  auto inst = gen_ref(c.base, c.n, formula_of(c), kind, c.iter);
  r.record({{"kind", c.kind}, {"base", c.base}, {"n", c.n}, {"iter", c.iter}, {"template", render(inst.templ)},
            {"sentence", render(inst.sentence)}});
  r.line(render_sugared(inst.sentence) + " @ref base=" + c.base + " n=" + std::to_string(c.n) +
         " iter=" + std::to_string(c.iter));
  return 0;
}

int cmd_check_internal(const RunConfig& c, Report& r) {
  SchemeTag tag = scheme_of(c);
  if (!to_string(tag).starts_with("Int")) {
    auto internal = scheme_from_string("Int" + to_string(tag));
    if (!internal) throw ConfigError("scheme " + c.scheme + " has no internal form");
    tag = *internal;
  }
  TruthSource t = truth_of(c);
  auto rep = check_internal(*t.view, tag, c.depth.value_or(2));
  for (const auto& f : rep.failures) {
    r.record({{"scheme", to_string(tag)}, {"template", render(f.templ)}, {"sentence", render(f.sentence)}, {"reason", f.reason}});
    r.line(f.reason + ": " + render_sugared(f.templ));
  }
  r.line(to_string(tag) + ": checked " + std::to_string(rep.checked) + ", failures " + std::to_string(rep.failures.size()));
  return rep.ok() ? 0 : 1;
}

int cmd_check_property(const RunConfig& c, Report& r) {
  std::vector<TruthProperty> props;
  if (c.property.empty()) {
    props = {TruthProperty::DCOut, TruthProperty::DCIn, TruthProperty::PI, TruthProperty::SPI};
  } else {
    auto p = property_from_string(c.property);
    if (!p) throw ConfigError("unknown --property '" + c.property + "'");
    props = {*p};
  }
  TruthSource t = truth_of(c);
  auto pool = sentence_pool(c, t.m);
  bool ok = true;
  for (auto p : props) {
    auto rep = check_truth_property(*t.view, p, pool, c.length);
    for (const auto& v : rep.violations) {
      json seq = json::array();
      std::string text;
      for (const auto& s : v.sequence) {
        seq.push_back(render(s));
        text += " " + render_sugared(s);
      }
      r.record({{"property", to_string(p)}, {"sequence", seq}, {"message", v.message}});
      r.line(to_string(p) + " violated by" + text + ": " + v.message);
    }
    r.line(to_string(p) + ": checked " + std::to_string(rep.checked) + ", violations " + std::to_string(rep.violations.size()));
    ok = ok && rep.ok();
  }
  return ok ? 0 : 1;
}

int cmd_check_gref(const RunConfig& c, Report& r) {
  GRefConfig cfg;
  if (c.mode == "prop")
    cfg.mode = GRefMode::Prop;
  else if (c.mode == "full")
    cfg.mode = GRefMode::Full;
  else if (c.mode == "depth")
    cfg.mode = GRefMode::DepthBounded;
  else
    throw ConfigError("--mode must be prop, full or depth");
  if (c.budget) cfg.budget = *c.budget;
  if (cfg.mode == GRefMode::DepthBounded) {
    if (!c.x) throw ConfigError("--mode depth needs --x");
    cfg.depth_x = *c.x;
    if (!c.theory.empty()) cfg.extra = load_theory(c.theory).sentences();
  }
  TruthSource t = truth_of(c);
  auto pool = sentence_pool(c, t.m);
  auto rep = check_gref(*t.view, pool, cfg);
  for (const auto& f : rep.failures) {
    r.record({{"conclusion", render(f.conclusion)}, {"proof", write_proof(f.proof)}});
    r.line("not in T: " + render_sugared(f.conclusion) + " (proof of " + std::to_string(f.proof.lines.size()) + " lines)");
  }
  r.record({{"steps", rep.steps}, {"proofs", rep.proofs}, {"exhausted", rep.exhausted}, {"failures", rep.failures.size()}});
  r.line("steps " + std::to_string(rep.steps) + ", proofs " + std::to_string(rep.proofs) + ", failures " +
         std::to_string(rep.failures.size()) + (rep.exhausted ? ", budget exhausted" : ""));
  return rep.ok() ? 0 : 1;
}

int cmd_diagonal(const RunConfig& c, Report& r) {
  Structure m = structure_of(c);
  Formula s = formula_of(c);
  std::vector<HFSet> codes;
  if (c.a) {
    HFSet x = HFSet::from_code(*c.a);
    if (!m.find(x)) throw ConfigError("--a is not an element of the structure");
    codes.push_back(x);
  } else {
    codes = m.labels();
  }
  std::size_t bad = 0;
  for (const auto& x : codes) {
    auto w = diagonal_refute(m, s, [&](const Formula&) { return x; });
    bool refuted = w.s_rr != w.r_r;
    bad += !refuted;
    r.record({{"r", code_of(w.r)}, {"R", render(w.r_formula)}, {"S(r,r)", w.s_rr}, {"R(r)", w.r_r}, {"refuted", refuted}});
    r.line("r=" + code_of(w.r) + " S(r,r)=" + bool_text(w.s_rr) + " R(r)=" + bool_text(w.r_r) +
           (refuted ? " refuted" : " NOT refuted"));
  }
  return bad ? 1 : 0;
}

int cmd_collapse(const RunConfig& c, Report& r) {
  if (c.structure.empty()) throw ConfigError("missing --structure");
  Digraph g = parse_digraph(read_file(c.structure));
  std::vector<std::pair<std::string, HFSet>> rows;
  try {
    if (g.stage) {
      Structure m = Structure::stage(*g.stage);
      auto labels = collapse(m);
      for (std::size_t i = 0; i < labels.size(); ++i) rows.emplace_back("#" + code_of(m.label(i)), labels[i]);
    } else {
      std::vector<std::uint64_t> nodes(g.ids.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = i;
      auto labels = collapse(nodes, g.edges);
      for (std::size_t i = 0; i < nodes.size(); ++i) rows.emplace_back(g.ids[i], labels.at(i));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    r.record({{"collapsible", false}, {"message", e.what()}});
    r.line(std::string("not collapsible: ") + e.what());
    return 1;
  }
  for (const auto& [id, x] : rows) {
    r.record({{"id", id}, {"code", code_of(x)}});
    r.line(id + " " + code_of(x));
  }
  return 0;
}

int cmd_fuzz(const RunConfig& c, Report& r) {
  std::variant<SatClass, TruthClass> base;
  if (!c.class_path.empty()) {
    base = class_of(c);
  } else {
    Structure m = structure_of(c);
    base = induced_sat(m, depth_family(c.depth.value_or(2), vars_of(c)));
  }
  std::uint64_t budget = c.budget.value_or(kDefaultBudget);

  // (direction, formula kind) -> per-clause counts, detected, total
  struct Row {
    std::array<std::size_t, 6> clause{};
    std::size_t detected = 0;
    std::size_t total = 0;
  };
  std::map<std::pair<std::string, std::string>, Row> matrix;
  std::size_t undetected = 0;

  auto sweep = [&](const auto& cls, auto&& contains) {
    std::size_t total = 0;
    for_each_toggle(cls, [&](const auto&, const auto&) { ++total; });
    std::vector<char> chosen(total, 1);
    if (c.samples > 0 && c.samples < total) {
      std::fill(chosen.begin(), chosen.end(), 0);
      std::vector<std::size_t> idx(total);
      for (std::size_t i = 0; i < total; ++i) idx[i] = i;
      std::mt19937_64 rng(c.seed);
      std::shuffle(idx.begin(), idx.end(), rng);
      for (std::size_t i = 0; i < c.samples; ++i) chosen[idx[i]] = 1;
    }
    std::size_t i = 0;
    for_each_toggle(cls, [&](const auto& mutant, const auto& entry) {
      if (!chosen[i++]) return;
      auto [f, a, removed] = contains(cls, entry);
      Row& row = matrix[{removed ? "removed" : "added", kind_name(f)}];
      ++row.total;
      auto rep = validate_class(mutant, budget);
      std::set<unsigned> fired;
      for (const auto& v : rep.violations) fired.insert(v.clause);
      for (unsigned k : fired)
        if (k < row.clause.size()) ++row.clause[k];
      if (!rep.ok()) {
        ++row.detected;
      } else {
        ++undetected;
        r.record({{"undetected", render(f)}, {"assignment", assignment_json(a)}, {"direction", removed ? "removed" : "added"}});
        r.line("undetected: " + std::string(removed ? "removed " : "added ") + render_sugared(f) + assignment_text(a));
      }
    });
  };
  if (auto* s = std::get_if<SatClass>(&base)) {
    sweep(*s, [](const SatClass& k, const Entry& e) { return std::tuple{e.first, e.second, k.contains(e.first, e.second)}; });
  } else {
    sweep(std::get<TruthClass>(base),
          [](const TruthClass& k, const Formula& f) { return std::tuple{f, Assignment{}, k.contains(f)}; });
  }

  r.line("direction kind total detected c1 c2 c3 c4 c5");
  for (const auto& [key, row] : matrix) {
    r.record({{"direction", key.first}, {"kind", key.second}, {"total", row.total}, {"detected", row.detected},
              {"clauses", {row.clause[1], row.clause[2], row.clause[3], row.clause[4], row.clause[5]}}});
    std::string s = key.first + " " + key.second + " " + std::to_string(row.total) + " " + std::to_string(row.detected);
    for (unsigned k = 1; k <= 5; ++k) s += " " + std::to_string(row.clause[k]);
    r.line(s);
  }
  r.line("undetected: " + std::to_string(undetected));
  return undetected ? 1 : 0;
}

}  // namespace

int dispatch(const RunConfig& c, std::ostream& out) {
  if (c.command == "diagram") return cmd_diagram(c, out);
  if (c.command == "convert-class") return cmd_convert(c, out);
  Report r;
  int status;
  if (c.command == "eval")
    status = cmd_eval(c, r);
  else if (c.command == "validate-class")
    status = cmd_validate(c, r);
  else if (c.command == "reflect")
    status = cmd_reflect(c, r);
  else if (c.command == "true-k")
    status = cmd_true_k(c, r);
  else if (c.command == "gen-scheme")
    status = cmd_gen_scheme(c, r);
  else if (c.command == "gen-ref")
    status = cmd_gen_ref(c, r);
  else if (c.command == "check-internal")
    status = cmd_check_internal(c, r);
  else if (c.command == "check-property")
    status = cmd_check_property(c, r);
  else if (c.command == "check-gref")
    status = cmd_check_gref(c, r);
  else if (c.command == "diagonal")
    status = cmd_diagonal(c, r);
  else if (c.command == "collapse")
    status = cmd_collapse(c, r);
  else if (c.command == "fuzz")
    status = cmd_fuzz(c, r);
  else
    throw ConfigError("unknown command '" + c.command + "'");
  r.finish(c, out);
  return status;
}

}  // namespace tkcli
