#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treecert/errors.hpp"

namespace treecert {

// Interned names; ids are dense and stable in insertion order.
class SymbolTable {
 public:
  uint32_t intern(std::string_view name);
  std::optional<uint32_t> find(std::string_view name) const;
  const std::string& name(uint32_t id) const;
  uint32_t size() const { return static_cast<uint32_t>(names_.size()); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, uint32_t> ids_;
};

// Ranked alphabet: interned symbols with a fixed arity each.
class RankedAlphabet {
 public:
  // Re-adding an existing name with the same arity returns the old id;
  // a different arity is an ArityMismatch.
  uint32_t add(std::string_view name, uint32_t arity);
  std::optional<uint32_t> find(std::string_view name) const;
  uint32_t id(std::string_view name) const;  // UndeclaredSymbol if absent
  const std::string& name(uint32_t id) const;
  uint32_t arity(uint32_t id) const;
  uint32_t size() const { return table_.size(); }
  std::vector<uint32_t> symbols_of_arity(uint32_t p) const;
  bool has_nullary() const;

 private:
  SymbolTable table_;
  std::vector<uint32_t> arity_;
};

// Ordered finite tree with interned labels. The tag keeps trees over a ranked
// alphabet and trees over a state set apart at the type level; structure is shared.
template <typename Tag>
struct BasicTree {
  uint32_t label = 0;
  std::vector<BasicTree> children;

  BasicTree() = default;
  explicit BasicTree(uint32_t l) : label(l) {}
  BasicTree(uint32_t l, std::vector<BasicTree> cs)
      : label(l), children(std::move(cs)) {}

  bool operator==(const BasicTree& o) const {
    return label == o.label && children == o.children;
  }
};

using Tree = BasicTree<struct SymbolLabelTag>;
using StateTree = BasicTree<struct StateLabelTag>;

template <typename Tag>
uint32_t node_count(const BasicTree<Tag>& t) {
  uint32_t n = 1;
  for (const auto& c : t.children) n += node_count(c);
  return n;
}

template <typename Tag>
uint64_t tree_hash(const BasicTree<Tag>& t) {
  uint64_t h = 1469598103934665603ull ^ t.label;
  h *= 1099511628211ull;
  for (const auto& c : t.children) {
    h ^= tree_hash(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

// Total order used for deterministic tie-breaking: node count, then label,
// then children lexicographically.
template <typename Tag>
int tree_compare(const BasicTree<Tag>& a, const BasicTree<Tag>& b) {
  uint32_t na = node_count(a), nb = node_count(b);
  if (na != nb) return na < nb ? -1 : 1;
  if (a.label != b.label) return a.label < b.label ? -1 : 1;
  for (size_t i = 0; i < a.children.size() && i < b.children.size(); ++i) {
    int c = tree_compare(a.children[i], b.children[i]);
    if (c != 0) return c;
  }
  if (a.children.size() != b.children.size())
    return a.children.size() < b.children.size() ? -1 : 1;
  return 0;
}

template <typename Tag>
struct TreeHasher {
  size_t operator()(const BasicTree<Tag>& t) const {
    return static_cast<size_t>(tree_hash(t));
  }
};

// Shape equality ignoring labels.
template <typename TagA, typename TagB>
bool structurally_equivalent(const BasicTree<TagA>& a, const BasicTree<TagB>& b) {
  if (a.children.size() != b.children.size()) return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!structurally_equivalent(a.children[i], b.children[i])) return false;
  return true;
}

// Untyped parse result of the textual notation  label(child,...)  with bare leaves.
struct RawTree {
  std::string label;
  std::vector<RawTree> children;
};

RawTree parse_raw_tree(std::string_view text);  // throws Error(Parse)

template <typename Tag>
BasicTree<Tag> map_raw_tree(const RawTree& r,
                            const std::function<uint32_t(const std::string&)>& intern) {
  BasicTree<Tag> t(intern(r.label));
  t.children.reserve(r.children.size());
  for (const auto& c : r.children) t.children.push_back(map_raw_tree<Tag>(c, intern));
  return t;
}

template <typename Tag>
void print_tree_to(std::string& out, const BasicTree<Tag>& t,
                   const std::function<const std::string&(uint32_t)>& namer) {
  out += namer(t.label);
  if (!t.children.empty()) {
    out += '(';
    for (size_t i = 0; i < t.children.size(); ++i) {
      if (i) out += ',';
      print_tree_to(out, t.children[i], namer);
    }
    out += ')';
  }
}

template <typename Tag>
std::string print_tree(const BasicTree<Tag>& t,
                       const std::function<const std::string&(uint32_t)>& namer) {
  std::string out;
  print_tree_to(out, t, namer);
  return out;
}

std::string print_tree(const Tree& t, const RankedAlphabet& alpha);
Tree parse_tree(std::string_view text, const RankedAlphabet& alpha);  // validates arities

// Synchronous product of structurally equivalent trees: the label of each node
// becomes the tuple "(l1,...,lm)", interned into `out` with the shared arity.
// All inputs must live over `base`. Errors: ShapeMismatch, ArityMismatch,
// InputError on an empty list.
Tree product(std::span<const Tree> ts, const RankedAlphabet& base, RankedAlphabet& out);

// Recover coordinate i of a product tree (inverse of product; test aid).
Tree product_project(const Tree& prod, size_t i, const RankedAlphabet& prod_alpha,
                     const RankedAlphabet& base);

std::string tuple_symbol_name(std::span<const uint32_t> labels, const RankedAlphabet& base);

}  // namespace treecert
