#pragma once

#include <span>

#include "treecert/trees.hpp"

namespace treecert {

// Bottom-up rule (q1..qp) ->^symbol q; leaf rules have an empty lhs.
struct AutomatonRule {
  uint32_t symbol = 0;
  std::vector<uint32_t> lhs;
  uint32_t rhs = 0;
};

class TreeAutomaton {
 public:
  uint32_t add_state(std::string_view name) { return states_.intern(name); }
  std::optional<uint32_t> find_state(std::string_view n) const { return states_.find(n); }
  const std::string& state_name(uint32_t q) const { return states_.name(q); }
  uint32_t num_states() const { return states_.size(); }

  void mark_final(uint32_t q);
  bool is_final(uint32_t q) const { return q < final_mask_.size() && final_mask_[q]; }
  const std::vector<uint32_t>& finals() const { return finals_; }

  // Duplicate rules collapse silently (rule sets, not lists); first insertion
  // fixes the position used by ordered iteration.
  void add_rule(uint32_t symbol, std::vector<uint32_t> lhs, uint32_t rhs);
  const std::vector<AutomatonRule>& rules() const { return rules_; }
  std::span<const uint32_t> rules_for(uint32_t symbol) const;

 private:
  SymbolTable states_;
  std::vector<uint32_t> finals_;
  std::vector<uint8_t> final_mask_;
  std::vector<AutomatonRule> rules_;
  std::unordered_map<uint32_t, std::vector<uint32_t>> by_symbol_;
};

// All states some run assigns to the root (empty when no run exists).
std::vector<uint32_t> states_reaching(const TreeAutomaton& a, const Tree& t);

bool accepts(const TreeAutomaton& a, const Tree& t);

// True iff no tree at all is accepted (least-fixpoint reachability).
bool language_empty(const TreeAutomaton& a);

// Subset construction over the full alphabet; the result is deterministic and
// complete (a "{}" sink catches every undefined cell). States are named by
// their subsets, e.g. "{q0,q1}". Limited to source automata with <= 64 states.
TreeAutomaton determinize(const TreeAutomaton& a, const RankedAlphabet& alpha);

bool is_deterministic_complete(const TreeAutomaton& a, const RankedAlphabet& alpha);

// Bottom-up automaton over the pair alphabet: each symbol is a pair (f1,f2) of
// equal-arity base symbols, and acceptance of t1 x t2 defines a relation on
// equally-shaped trees.
class TreeTransducer {
 public:
  explicit TreeTransducer(const RankedAlphabet& base) : base_(base) {}

  const RankedAlphabet& base() const { return base_; }
  const RankedAlphabet& pair_alphabet() const { return pairs_; }
  TreeAutomaton& machine() { return m_; }
  const TreeAutomaton& machine() const { return m_; }

  // Interns the pair symbol "(f1,f2)"; ArityMismatch if arities differ.
  uint32_t pair_symbol(uint32_t f1, uint32_t f2);
  std::optional<uint32_t> find_pair(uint32_t f1, uint32_t f2) const;
  std::pair<uint32_t, uint32_t> components(uint32_t pair_sym) const;

  // True iff the trees are equally shaped and the product tree is accepted.
  bool relates(const Tree& t1, const Tree& t2) const;

 private:
  RankedAlphabet base_;
  RankedAlphabet pairs_;
  std::vector<std::pair<uint32_t, uint32_t>> comp_;
  std::unordered_map<uint64_t, uint32_t> pair_ids_;
  TreeAutomaton m_;
};

}  // namespace treecert
