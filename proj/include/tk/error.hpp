#ifndef TK_ERROR_HPP_
#define TK_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Thrown when an evaluation or search exceeds its step budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace tk

#endif  // TK_ERROR_HPP_
