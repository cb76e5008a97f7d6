#include "tk/structure.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <unordered_map>

#include "tk/error.hpp"

namespace tk {

namespace {

constexpr std::size_t kMaxGeneral = 8192;

}  // namespace

unsigned max_stage() {
  unsigned cap = kStageCap;
  if (const char* env = std::getenv("TK_MAX_STAGE")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0 && static_cast<unsigned long>(v) < cap)
      cap = static_cast<unsigned>(v);
  }
  return cap;
}

Structure::Structure() : impl_(std::make_shared<Impl>()) {}

Structure Structure::stage(unsigned n) {
  unsigned cap = max_stage();
  if (n > cap)
    throw Error("stage " + std::to_string(n) + " exceeds the materialization cap " +
                std::to_string(cap));
  static std::mutex mu;
  static std::shared_ptr<const Impl> cache[kStageCap + 1];
  std::lock_guard<std::mutex> lock(mu);
  if (cache[n]) {
    Structure s;
    s.impl_ = cache[n];
    return s;
  }
  auto impl = std::make_shared<Impl>();
  impl->standard = true;
  impl->stage = n;
  std::uint64_t size = tower(n);
  impl->labels.reserve(size);
  for (std::uint64_t c = 0; c < size; ++c) impl->labels.push_back(HFSet::from_code(c));
  cache[n] = impl;
  Structure s;
  s.impl_ = std::move(impl);
  return s;
}

Structure Structure::make(std::vector<HFSet> labels,
                          const std::vector<std::pair<HFSet, HFSet>>& edges) {
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw Error("duplicate element in structure");
  if (labels.size() > kMaxGeneral)
    throw Error("structure has more than " + std::to_string(kMaxGeneral) + " elements");
  auto impl = std::make_shared<Impl>();
  impl->labels = std::move(labels);
  std::size_t n = impl->labels.size();
  impl->matrix.assign(n * n, false);
  auto index = [&](const HFSet& x) -> std::size_t {
    auto it = std::lower_bound(impl->labels.begin(), impl->labels.end(), x);
    if (it == impl->labels.end() || *it != x)
      throw Error("edge mentions unknown element " + x.to_string());
    return static_cast<std::size_t>(it - impl->labels.begin());
  };
  for (auto& [a, b] : edges) impl->matrix[index(a) * n + index(b)] = true;
  Structure s;
  s.impl_ = std::move(impl);
  return s;
}

std::optional<Elem> Structure::find(const HFSet& x) const {
  if (impl_->standard) {
    auto c = x.small_code();
    if (c && *c < impl_->labels.size()) return static_cast<Elem>(*c);
    return std::nullopt;
  }
  auto it = std::lower_bound(impl_->labels.begin(), impl_->labels.end(), x);
  if (it == impl_->labels.end() || *it != x) return std::nullopt;
  return static_cast<Elem>(it - impl_->labels.begin());
}

std::optional<unsigned> Structure::stage_index() const {
  if (impl_->standard) return impl_->stage;
  return std::nullopt;
}

std::vector<Elem> Structure::members(Elem b) const {
  std::vector<Elem> out;
  if (impl_->standard) {
    for (Elem a = 0; a < 64 && a < size(); ++a)
      if (in(a, b)) out.push_back(a);
    return out;
  }
  for (Elem a = 0; a < size(); ++a)
    if (in(a, b)) out.push_back(a);
  return out;
}

std::vector<std::pair<Elem, Elem>> Structure::edges() const {
  std::vector<std::pair<Elem, Elem>> out;
  for (Elem b = 0; b < size(); ++b)
    for (Elem a : members(b)) out.emplace_back(a, b);
  std::sort(out.begin(), out.end());
  return out;
}

std::string Structure::describe() const {
  if (impl_->standard) return "stage " + std::to_string(impl_->stage);
  return "structure(|M|=" + std::to_string(size()) + ")";
}

std::map<std::uint64_t, HFSet> collapse(
    const std::vector<std::uint64_t>& nodes,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& edges) {
  std::map<std::uint64_t, std::vector<std::uint64_t>> children;
  for (auto n : nodes) children[n];
  for (auto& [c, p] : edges) {
    if (!children.count(c) || !children.count(p))
      throw Error("edge mentions unknown node " + std::to_string(children.count(c) ? p : c));
    children[p].push_back(c);
  }

  std::map<std::uint64_t, HFSet> value;
  std::unordered_map<HFSet, std::uint64_t> owner;
  std::map<std::uint64_t, int> color;  // 1 = on stack, 2 = done

  // Iterative DFS so deep chains do not exhaust the call stack.
  for (auto& [root, _] : children) {
    if (color[root] == 2) continue;
    std::vector<std::pair<std::uint64_t, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      auto& kids = children[v];
      if (next < kids.size()) {
        std::uint64_t u = kids[next++];
        if (color[u] == 1)
          throw Error("cycle detected through node " + std::to_string(u));
        if (color[u] == 0) {
          color[u] = 1;
          stack.emplace_back(u, 0);
        }
        continue;
      }
      std::vector<HFSet> el;
      for (auto u : kids) el.push_back(value.at(u));
      HFSet x = HFSet::of(std::move(el));
      auto [it, fresh] = owner.emplace(x, v);
      if (!fresh)
        throw Error("extensionality violation: nodes " + std::to_string(it->second) + " and " +
                    std::to_string(v) + " have the same members");
      value.emplace(v, x);
      color[v] = 2;
      stack.pop_back();
    }
  }
  return value;
}

std::vector<HFSet> collapse(const Structure& m) {
  std::vector<std::uint64_t> nodes(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) nodes[i] = i;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  for (auto [a, b] : m.edges()) edges.emplace_back(a, b);
  auto v = collapse(nodes, edges);
  std::vector<HFSet> out;
  out.reserve(m.size());
  for (auto& [_, x] : v) out.push_back(x);
  return out;
}

}  // namespace tk
