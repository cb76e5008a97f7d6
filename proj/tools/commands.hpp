#ifndef TK_TOOLS_COMMANDS_HPP_
#define TK_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tk/error.hpp"

namespace tkcli {

struct RunConfig {
  std::string command;
  std::optional<unsigned> stage;
  std::string structure;
  std::string formula;
  std::string class_path;
  std::string theory;
  std::optional<unsigned> depth;
  std::optional<std::uint64_t> budget;
  std::uint64_t seed = 0;
  std::string out;
  bool scan = false;
  bool json = false;

  // Command-specific.
  unsigned N = 4;
  std::optional<unsigned> a;
  std::vector<std::string> assign;
  std::vector<std::string> vars{"x"};
  std::string scheme;
  std::string property;
  std::string mode = "prop";
  std::optional<unsigned> x;
  std::string kind = "REF";
  std::string base = "ZF";
  unsigned n = 1;
  unsigned iter = 0;
  unsigned length = 2;
  std::size_t samples = 0;
};

class ConfigError : public tk::Error {
 public:
  using tk::Error::Error;
};

// Runs one command. Returns 0 when nothing was violated, 1 otherwise; throws
// ConfigError / tk::Error on bad input.
int dispatch(const RunConfig& c, std::ostream& out);

}  // namespace tkcli

#endif  // TK_TOOLS_COMMANDS_HPP_
