// Finite membership structures (M, E).
//
// Elements are identified with HF sets: element ids in files and the
// constants #n in formulas are Ackermann codes. In a standard stage E is true
// membership; in a general structure E is an arbitrary relation.

#ifndef TK_STRUCTURE_HPP_
#define TK_STRUCTURE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tk/hfset.hpp"

namespace tk {

// Index of an element inside a Structure; elements are numbered in Ackermann
// order of their labels.
using Elem = std::uint32_t;

inline constexpr unsigned kStageCap = 5;

// The stage cap in effect: kStageCap, lowered by TK_MAX_STAGE when set.
unsigned max_stage();

class Structure {
 public:
  Structure();

  // V_n with true membership. Throws Error when n exceeds max_stage().
  static Structure stage(unsigned n);

  // A general structure. Labels must be distinct; edges are (member, set).
  static Structure make(std::vector<HFSet> labels,
                        const std::vector<std::pair<HFSet, HFSet>>& edges);

  std::size_t size() const { return impl_->labels.size(); }
  const HFSet& label(Elem e) const { return impl_->labels[e]; }
  const std::vector<HFSet>& labels() const { return impl_->labels; }
  std::optional<Elem> find(const HFSet& x) const;

  bool in(Elem a, Elem b) const {
    if (impl_->standard) return a < 64 && ((std::uint64_t{b} >> a) & 1);
    return impl_->matrix[std::size_t{a} * impl_->labels.size() + b];
  }

  bool standard() const { return impl_->standard; }
  // Stage index for standard structures.
  std::optional<unsigned> stage_index() const;

  // Elements e with in(e, b), ascending.
  std::vector<Elem> members(Elem b) const;
  std::vector<std::pair<Elem, Elem>> edges() const;

  // "stage 3" or "structure(|M|=7)".
  std::string describe() const;

 private:
  struct Impl {
    std::vector<HFSet> labels;
    bool standard = false;
    unsigned stage = 0;
    std::vector<bool> matrix;
  };
  std::shared_ptr<const Impl> impl_;
};

// Mostowski collapse of a digraph given as (child, parent) edges: maps every
// node to {collapse(u) : u -> v}. Throws Error on a cycle or when two nodes
// have the same children.
std::map<std::uint64_t, HFSet> collapse(
    const std::vector<std::uint64_t>& nodes,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& edges);

// Collapse of a structure's membership relation, keyed by element index.
std::vector<HFSet> collapse(const Structure& m);

}  // namespace tk

#endif  // TK_STRUCTURE_HPP_
