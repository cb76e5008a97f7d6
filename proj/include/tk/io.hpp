// Text formats for structures, classes, theories and proofs.
//
//   structure:  `stage <n>`, or `element <id>` / `edge <id> <id>` lines
//               (first member of second). Ids of the form #<code> name their
//               HF set; other ids are labelled by the Mostowski collapse.
//   class:      `class sat|truth over <structure-ref>`, `family <f>` lines,
//               `entry <f> [<var>=<code> ...]` lines. The structure-ref is
//               `stage <n>` or a structure file path (relative to the class
//               file).
//   theory:     `theory <name>`, one sentence per line, `#` comments,
//               optional trailing `@ref base=<name> n=<k> iter=<m>`.
//   proof:      `proof`, then `<n>: <f> ; <justification>` lines, where the
//               justification is `premise`, `axiom <id>`, `mp <i> <j>` or
//               `gen <i> <var>`.
// Parse errors are reported as Error with the 1-based line number.

#ifndef TK_IO_HPP_
#define TK_IO_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tk/classes.hpp"
#include "tk/proof.hpp"
#include "tk/schemes.hpp"
#include "tk/structure.hpp"

namespace tk {

std::string read_file(const std::filesystem::path& p);

// A structure file before labelling.
struct Digraph {
  std::optional<unsigned> stage;
  std::vector<std::string> ids;
  // (member, set) as indices into ids.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
};

Digraph parse_digraph(std::string_view text);
Structure parse_structure(std::string_view text);
Structure load_structure(const std::filesystem::path& p);
std::string write_structure(const Structure& m);

using AnyClass = std::variant<SatClass, TruthClass>;

AnyClass parse_class(std::string_view text, const std::filesystem::path& base_dir = ".");
AnyClass load_class(const std::filesystem::path& p);
// Entries in canonical order. The structure is written inline when it is a
// standard stage, otherwise as `structure_ref`.
std::string write_class(const SatClass& s, const std::string& structure_ref = "");
std::string write_class(const TruthClass& t, const std::string& structure_ref = "");

struct TheoryLine {
  Formula sentence;
  std::optional<RefMeta> ref;
};

struct Theory {
  std::string name;
  std::vector<TheoryLine> lines;
  std::vector<Formula> sentences() const;
};

Theory parse_theory(std::string_view text);
Theory load_theory(const std::filesystem::path& p);
std::string write_theory(const Theory& t);

Proof parse_proof(std::string_view text);
Proof load_proof(const std::filesystem::path& p);
std::string write_proof(const Proof& p);

}  // namespace tk

#endif  // TK_IO_HPP_
