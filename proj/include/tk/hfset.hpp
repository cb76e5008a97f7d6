// Hereditarily finite sets.
//
// Every HFSet is interned: two HFSet values are equal iff they point at the
// same node, so equality is O(1) and sets can be used directly as hash keys.
// Elements are kept sorted by Ackermann code, which is also the total order
// exposed through operator<=>.

#ifndef TK_HFSET_HPP_
#define TK_HFSET_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tk {

using BigNat = boost::multiprecision::cpp_int;

struct HFNode;

class HFSet {
 public:
  // The empty set.
  HFSet();

  // Canonicalizes (sorts, removes duplicates) and interns.
  static HFSet of(std::vector<HFSet> elements);

  // Inverse of code(): the set whose Ackermann code is n.
  static HFSet from_code(std::uint64_t n);
  static HFSet from_code(const BigNat& n);

  std::span<const HFSet> elements() const;
  std::size_t size() const { return elements().size(); }
  bool empty() const { return size() == 0; }
  bool contains(const HFSet& x) const;
  bool subset_of(const HFSet& other) const;

  // rank(x) = sup{rank(y)+1 : y in x}, rank(empty) = 0.
  unsigned rank() const;

  // Ackermann code when it fits in 64 bits.
  std::optional<std::uint64_t> small_code() const;

  // code(x) = sum over y in x of 2^code(y). Throws std::overflow_error when
  // the code would need more than `max_bits` bits.
  BigNat code(std::size_t max_bits = 1u << 20) const;

  std::size_t hash() const;

  // Ackermann order.
  std::strong_ordering operator<=>(const HFSet& other) const;
  bool operator==(const HFSet& other) const { return node_ == other.node_; }

  // Decimal Ackermann code, or a structural rendering {..} when the code is
  // too large to print.
  std::string to_string() const;

 private:
  explicit HFSet(const HFNode* node) : node_(node) {}
  const HFNode* node_;

  friend struct HFInterner;
};

// {{x},{x,y}}
HFSet kuratowski(const HFSet& x, const HFSet& y);
std::optional<std::pair<HFSet, HFSet>> unpair(const HFSet& p);

// Right-nested Kuratowski tuple: <a0, <a1, ... <a_{n-2}, a_{n-1}>>>.
// Requires at least two components.
HFSet tuple(const std::vector<HFSet>& components);
std::optional<std::vector<HFSet>> untuple(const HFSet& t, std::size_t arity);

// von Neumann numeral n = {0, ..., n-1}.
HFSet numeral(unsigned n);
std::optional<unsigned> as_numeral(const HFSet& x);

HFSet set_union(const HFSet& a, const HFSet& b);
HFSet singleton(const HFSet& x);

// Number of HF sets of rank < n: tower(0)=0, tower(k+1)=2^tower(k).
std::uint64_t tower(unsigned n);

}  // namespace tk

template <>
struct std::hash<tk::HFSet> {
  std::size_t operator()(const tk::HFSet& s) const noexcept { return s.hash(); }
};

#endif  // TK_HFSET_HPP_
