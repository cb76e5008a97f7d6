#include "tk/hfset.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "tk/error.hpp"

namespace tk {

struct HFNode {
  std::vector<HFSet> elems;
  unsigned rank = 0;
  std::size_t hash = 0;
  bool small = true;
  std::uint64_t code = 0;
};

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<const HFNode*>& k) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto* p : k) h = (h ^ reinterpret_cast<std::uintptr_t>(p)) * 0x100000001b3ull;
    return h;
  }
};

std::size_t mix(std::size_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdull;
  h ^= h >> 33;
  return h;
}

constexpr std::uint64_t kCodeTable = 1u << 16;

}  // namespace

struct HFInterner {
  std::mutex mu;
  std::deque<HFNode> nodes;
  std::unordered_map<std::vector<const HFNode*>, const HFNode*, KeyHash> index;
  std::vector<HFSet> by_code;
  std::once_flag table_once;

  static HFInterner& get() {
    static HFInterner* in = new HFInterner;
    return *in;
  }

  // `elems` must already be sorted and duplicate free.
  HFSet intern(std::vector<HFSet> elems) {
    std::vector<const HFNode*> key;
    key.reserve(elems.size());
    for (auto& e : elems) key.push_back(e.node_);
    std::lock_guard<std::mutex> lock(mu);
    auto it = index.find(key);
    if (it != index.end()) return HFSet(it->second);
    HFNode& n = nodes.emplace_back();
    std::size_t h = 0x51ed27u + elems.size();
    for (auto& e : elems) {
      n.rank = std::max(n.rank, e.node_->rank + 1);
      h = mix(h * 31 + e.node_->hash);
      if (!e.node_->small || e.node_->code >= 64) {
        n.small = false;
      } else if (n.small) {
        n.code |= std::uint64_t{1} << e.node_->code;
      }
    }
    if (!n.small) n.code = 0;
    n.hash = h;
    n.elems = std::move(elems);
    index.emplace(std::move(key), &n);
    return HFSet(&n);
  }

  const HFNode* empty() {
    static const HFNode* e = intern({}).node_;
    return e;
  }

  const std::vector<HFSet>& table() {
    std::call_once(table_once, [this] {
      std::vector<HFSet> t;
      t.reserve(kCodeTable);
      for (std::uint64_t n = 0; n < kCodeTable; ++n) {
        std::vector<HFSet> el;
        for (unsigned b = 0; b < 16; ++b)
          if ((n >> b) & 1) el.push_back(t[b]);
        t.push_back(intern(std::move(el)));
      }
      by_code = std::move(t);
    });
    return by_code;
  }
};

HFSet::HFSet() : node_(HFInterner::get().empty()) {}

HFSet HFSet::of(std::vector<HFSet> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return HFInterner::get().intern(std::move(elements));
}

HFSet HFSet::from_code(std::uint64_t n) {
  auto& in = HFInterner::get();
  if (n < kCodeTable) return in.table()[n];
  std::vector<HFSet> el;
  for (unsigned b = 0; b < 64; ++b)
    if ((n >> b) & 1) el.push_back(from_code(std::uint64_t{b}));
  return in.intern(std::move(el));
}

HFSet HFSet::from_code(const BigNat& n) {
  if (n < 0) throw Error("negative Ackermann code");
  if (n <= std::numeric_limits<std::uint64_t>::max())
    return from_code(static_cast<std::uint64_t>(n));
  std::vector<HFSet> el;
  std::size_t top = boost::multiprecision::msb(n);
  for (std::size_t b = 0; b <= top; ++b)
    if (boost::multiprecision::bit_test(n, b)) el.push_back(from_code(std::uint64_t{b}));
  return HFInterner::get().intern(std::move(el));
}

std::span<const HFSet> HFSet::elements() const { return node_->elems; }

bool HFSet::contains(const HFSet& x) const {
  if (node_->small) return x.node_->small && x.node_->code < 64 && ((node_->code >> x.node_->code) & 1);
  return std::binary_search(node_->elems.begin(), node_->elems.end(), x);
}

bool HFSet::subset_of(const HFSet& other) const {
  if (node_->small && other.node_->small) return (node_->code & ~other.node_->code) == 0;
  return std::includes(other.node_->elems.begin(), other.node_->elems.end(),
                       node_->elems.begin(), node_->elems.end());
}

unsigned HFSet::rank() const { return node_->rank; }

std::optional<std::uint64_t> HFSet::small_code() const {
  if (node_->small) return node_->code;
  return std::nullopt;
}

BigNat HFSet::code(std::size_t max_bits) const {
  if (node_->small) return BigNat(node_->code);
  BigNat r = 0;
  for (auto& e : node_->elems) {
    BigNat c = e.code(max_bits);
    if (c >= max_bits) throw std::overflow_error("Ackermann code too large");
    boost::multiprecision::bit_set(r, static_cast<std::size_t>(c));
  }
  return r;
}

std::size_t HFSet::hash() const { return node_->hash; }

std::strong_ordering HFSet::operator<=>(const HFSet& other) const {
  if (node_ == other.node_) return std::strong_ordering::equal;
  const HFNode* a = node_;
  const HFNode* b = other.node_;
  if (a->small && b->small) return a->code <=> b->code;
  if (a->small) return std::strong_ordering::less;
  if (b->small) return std::strong_ordering::greater;
  // Binary comparison from the most significant bit: the largest element
  // where the two sets differ decides.
  auto i = a->elems.size();
  auto j = b->elems.size();
  while (i > 0 && j > 0) {
    const HFSet& x = a->elems[i - 1];
    const HFSet& y = b->elems[j - 1];
    if (x == y) {
      --i;
      --j;
      continue;
    }
    return x <=> y;
  }
  if (i > 0) return std::strong_ordering::greater;
  if (j > 0) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

std::string HFSet::to_string() const {
  if (node_->small) return std::to_string(node_->code);
  std::string s = "{";
  bool first = true;
  for (auto& e : node_->elems) {
    if (!first) s += ',';
    first = false;
    s += e.to_string();
  }
  return s + "}";
}

HFSet singleton(const HFSet& x) { return HFInterner::get().intern({x}); }

HFSet kuratowski(const HFSet& x, const HFSet& y) {
  return HFSet::of({singleton(x), HFSet::of({x, y})});
}

std::optional<std::pair<HFSet, HFSet>> unpair(const HFSet& p) {
  auto el = p.elements();
  if (el.size() == 1) {
    if (el[0].size() != 1) return std::nullopt;
    HFSet x = el[0].elements()[0];
    return std::pair{x, x};
  }
  if (el.size() != 2) return std::nullopt;
  HFSet s = el[0], d = el[1];
  if (s.size() != 1) std::swap(s, d);
  if (s.size() != 1 || d.size() != 2) return std::nullopt;
  HFSet x = s.elements()[0];
  if (!d.contains(x)) return std::nullopt;
  HFSet y = d.elements()[0] == x ? d.elements()[1] : d.elements()[0];
  return std::pair{x, y};
}

HFSet tuple(const std::vector<HFSet>& c) {
  if (c.size() < 2) throw Error("tuple needs at least two components");
  HFSet acc = c.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = kuratowski(c[i], acc);
  return acc;
}

std::optional<std::vector<HFSet>> untuple(const HFSet& t, std::size_t arity) {
  if (arity < 2) return std::nullopt;
  std::vector<HFSet> out;
  HFSet cur = t;
  for (std::size_t i = 0; i + 1 < arity; ++i) {
    auto p = unpair(cur);
    if (!p) return std::nullopt;
    out.push_back(p->first);
    cur = p->second;
  }
  out.push_back(cur);
  return out;
}

HFSet numeral(unsigned n) {
  std::vector<HFSet> el;
  HFSet cur;
  for (unsigned i = 0; i < n; ++i) {
    el.push_back(cur);
    cur = HFSet::of(el);
  }
  return cur;
}

std::optional<unsigned> as_numeral(const HFSet& x) {
  unsigned r = x.rank();
  if (x.size() != r) return std::nullopt;
  if (x == numeral(r)) return r;
  return std::nullopt;
}

HFSet set_union(const HFSet& a, const HFSet& b) {
  std::vector<HFSet> el(a.elements().begin(), a.elements().end());
  el.insert(el.end(), b.elements().begin(), b.elements().end());
  return HFSet::of(std::move(el));
}

std::uint64_t tower(unsigned n) {
  if (n > 5) throw std::overflow_error("tower(" + std::to_string(n) + ") does not fit in 64 bits");
  std::uint64_t t = 0;
  for (unsigned i = 0; i < n; ++i) t = std::uint64_t{1} << t;
  return t;
}

}  // namespace tk
