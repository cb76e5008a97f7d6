// S-expression syntax for formulas.
//
//   (mem t t) (eq t t) (not F) (or F F ...) (ex v F)
//   (and F F ...) (imp F F) (iff F F) (all v F) (ex-in v t F) (all-in v t F)
//   (pred <symbol> t) (prov <symbol> t v F)
//
// Terms are identifiers or #<n>, the HF set with Ackermann code n. Sugar is
// expanded while parsing; render() prints the primitive forms only.

#ifndef TK_PARSE_HPP_
#define TK_PARSE_HPP_

#include <cstddef>
#include <string>
#include <string_view>

#include "tk/formula.hpp"

namespace tk {

// Throws ParseError with a 1-based character offset.
Formula parse(std::string_view text);

// Parses one formula at the start of `text` (after leading blanks) and
// stores the number of characters consumed.
Formula parse_prefix(std::string_view text, std::size_t& consumed);

std::string render(const Formula& f);
std::string render(const Term& t);

// Human-oriented rendering that folds not/or/ex patterns back into
// and, imp, all, ex-in and all-in. parse(render_sugared(f)) == f.
std::string render_sugared(const Formula& f);

}  // namespace tk

#endif  // TK_PARSE_HPP_
