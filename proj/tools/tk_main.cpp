#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

struct Cmd {
  const char* name;
  const char* help;
};

constexpr Cmd kCommands[] = {
    {"eval", "evaluate a formula over a structure"},
    {"diagram", "write the depth-bounded elementary diagram as a truth class"},
    {"validate-class", "check a satisfaction or truth class against the compositional clauses"},
    {"convert-class", "convert between satisfaction and truth classes"},
    {"reflect", "test V_a reflection of a formula inside V_N"},
    {"true-k", "evaluate the True_k recursion on a sentence"},
    {"gen-scheme", "instantiate a scheme on a template"},
    {"gen-ref", "instantiate a reflection or consistency scheme"},
    {"check-internal", "check internal scheme instances against a truth predicate"},
    {"check-property", "check DC_out, DC_in, PI and SPI over sentence sequences"},
    {"check-gref", "check closure of a truth predicate under bounded proofs"},
    {"diagonal", "refute a binary formula as a truth definition"},
    {"collapse", "Mostowski collapse of a structure file"},
    {"fuzz", "single-entry mutation sweep with a detection matrix"},
};

void add_options(CLI::App* sub, tkcli::RunConfig& c) {
  sub->add_option("--stage", c.stage, "use V_n");
  sub->add_option("--structure", c.structure, "structure file");
  sub->add_option("--formula", c.formula, "formula s-expression");
  sub->add_option("--class", c.class_path, "class file");
  sub->add_option("--theory", c.theory, "theory file");
  sub->add_option("--depth", c.depth, "depth bound");
  sub->add_option("--budget", c.budget, "step budget");
  sub->add_option("--seed", c.seed, "seed for sampled sweeps");
  sub->add_option("--out", c.out, "report file (JSON lines)");
  sub->add_flag("--scan", c.scan, "reflect: tabulate every a");
  sub->add_flag("--json", c.json, "print JSON lines instead of the summary");
  sub->add_option("--N", c.N, "reflect: ambient stage");
  sub->add_option("--a", c.a, "reflect: stage to test; diagonal: code of r");
  sub->add_option("--assign", c.assign, "eval: <var>=<ack-code>");
  sub->add_option("--vars", c.vars, "variables of generated pools");
  sub->add_option("--scheme", c.scheme, "Sep Coll Repl Ind Found or Int*");
  sub->add_option("--property", c.property, "DC_out DC_in PI SPI (default all)");
  sub->add_option("--mode", c.mode, "check-gref: prop, full or depth");
  sub->add_option("--x", c.x, "check-gref depth mode: conclusion depth bound");
  sub->add_option("--kind", c.kind, "gen-ref: REF or CON");
  sub->add_option("--base", c.base, "gen-ref: base theory name");
  sub->add_option("--n", c.n, "gen-ref: truth level");
  sub->add_option("--iter", c.iter, "gen-ref: iteration");
  sub->add_option("--length", c.length, "check-property: longest sequence");
  sub->add_option("--samples", c.samples, "fuzz: number of sampled mutants (0 = all)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tk: finite truth classes, satisfaction and reflection over hereditarily finite sets"};
  app.require_subcommand(1);
  tkcli::RunConfig config;
  for (const auto& cmd : kCommands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    add_options(sub, config);
    sub->callback([&config, name = cmd.name] { config.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return tkcli::dispatch(config, std::cout);
  } catch (const tk::Error& e) {
    std::cerr << "tk: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tk: internal error: " << e.what() << "\n";
    return 2;
  }
}
