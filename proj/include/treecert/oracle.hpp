#pragma once

#include <algorithm>
#include <atomic>
#include <optional>

#include "treecert/encode.hpp"

namespace treecert {

struct ReachOptions {
  uint32_t size_bound = 1;           // max nodes of the seeded initial trees
  uint64_t max_visited = 4'000'000;  // ResourceLimit guard for sets and seeds
  bool parallel = false;             // expand each frontier across threads
  const std::atomic<bool>* cancel = nullptr;  // polled between levels
};

// Visited trees with predecessor links; membership is checked through a hash
// index with full equality on collisions.
template <typename Tag>
class BasicReachSet {
 public:
  uint32_t size() const { return static_cast<uint32_t>(trees_.size()); }
  const BasicTree<Tag>& tree(uint32_t i) const { return trees_[i]; }
  int32_t parent(uint32_t i) const { return pred_[i]; }
  uint32_t depth(uint32_t i) const { return depth_[i]; }

  std::optional<uint32_t> find(const BasicTree<Tag>& t) const {
    auto it = index_.find(tree_hash(t));
    if (it == index_.end()) return std::nullopt;
    for (uint32_t i : it->second)
      if (trees_[i] == t) return i;
    return std::nullopt;
  }

  // parent < 0 marks a seed; second is false when the tree was already there
  std::pair<uint32_t, bool> insert(BasicTree<Tag> t, int32_t parent) {
    auto& bucket = index_[tree_hash(t)];
    for (uint32_t i : bucket)
      if (trees_[i] == t) return {i, false};
    uint32_t i = size();
    bucket.push_back(i);
    pred_.push_back(parent);
    depth_.push_back(parent < 0 ? 0 : depth_[parent] + 1);
    trees_.push_back(std::move(t));
    return {i, true};
  }

  // seed ... tree(i), following predecessor links
  std::vector<BasicTree<Tag>> trace(uint32_t i) const {
    std::vector<BasicTree<Tag>> out;
    for (int32_t j = static_cast<int32_t>(i); j >= 0; j = pred_[j])
      out.push_back(trees_[j]);
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<BasicTree<Tag>> trees_;
  std::vector<int32_t> pred_;
  std::vector<uint32_t> depth_;
  std::unordered_map<uint64_t, std::vector<uint32_t>> index_;
};

using ReachSet = BasicReachSet<SymbolLabelTag>;
using StateReachSet = BasicReachSet<StateLabelTag>;

// All one-step images of t, found by a bottom-up product run (per node and
// machine state, the distinct output subtrees), never by trying labelings.
// Sorted canonically; duplicates removed.
std::vector<Tree> successors_rtmc(const TreeTransducer& d, const Tree& t);

// One-step term rewriting with the generalized rules, precompiled once.
class PtsStepper {
 public:
  explicit PtsStepper(const RewriteSystem& sys);
  std::vector<StateTree> successors(const StateTree& t) const;

 private:
  Signature sig_;
  StateVocab vocab_;
  std::vector<TermRule> rules_;
};

std::vector<StateTree> successors_pts(const RewriteSystem& sys,
                                      const StateTree& t);

// Accepted trees with at most size_bound nodes, enumerated shape-first with a
// per-shape run of the automaton. Sorted canonically.
std::vector<Tree> initial_trees_rtmc(const RtmcProblem& p,
                                     const ReachOptions& opts);
std::vector<StateTree> initial_trees_pts(const PtsProblem& p,
                                         const ReachOptions& opts);

// Forward closure of the initial trees under one step. The step preserves the
// tree shape, so the closure is finite; it is explored fully, level by level.
ReachSet reachable_rtmc(const RtmcProblem& p, const ReachOptions& opts);
StateReachSet reachable_pts(const PtsProblem& p, const ReachOptions& opts);

bool tree_unsafe(const RtmcProblem& p, const Tree& t);
bool tree_unsafe(const PtsProblem& p, const StateTree& t);

// Shortest witness from an initial tree to an unsafe one; among witnesses of
// equal length the canonically least endpoint wins. Absent when the bounded
// closure contains no unsafe tree.
std::optional<std::vector<Tree>> find_unsafe_trace(const RtmcProblem& p,
                                                   const ReachOptions& opts);
std::optional<std::vector<StateTree>> find_unsafe_trace(const PtsProblem& p,
                                                        const ReachOptions& opts);

// One tree per line; the first line is tagged INIT, the last UNSAFE.
std::string format_trace(const std::vector<Tree>& tr, const RankedAlphabet& alpha);
std::string format_trace(const std::vector<StateTree>& tr, const SymbolTable& states);

}  // namespace treecert
