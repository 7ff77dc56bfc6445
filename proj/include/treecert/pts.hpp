#pragma once

#include "treecert/translate.hpp"
#include "treecert/trees.hpp"

namespace treecert {

// Rewrite rule: a tree whose nodes carry (left, right) state pairs. Nodes may
// have 0, 1, or 2 children; only configurations are restricted to 0/2.
struct RuleTree {
  uint32_t left = 0, right = 0;
  std::vector<RuleTree> children;
};

class RewriteSystem {
 public:
  uint32_t add_state(std::string_view name) { return states_.intern(name); }
  std::optional<uint32_t> find_state(std::string_view n) const { return states_.find(n); }
  const std::string& state_name(uint32_t q) const { return states_.name(q); }
  uint32_t num_states() const { return states_.size(); }
  const SymbolTable& states() const { return states_; }

  void add_rule(RuleTree r);  // NonBinaryRule on nodes with > 2 children
  const std::vector<RuleTree>& rules() const { return rules_; }

 private:
  SymbolTable states_;
  std::vector<RuleTree> rules_;
};

// Left and right label projections; both share the rule's tree structure.
std::pair<StateTree, StateTree> rule_projections(const RuleTree& r);

// The pair-of-terms translation of a rule: a single pair for a leaf, the cross
// product over children for two-child nodes, and left-slot variants followed
// by right-slot variants for one-child nodes (2^k pairs for k one-child nodes).
std::vector<std::pair<Term, Term>> term_pairs_of_rule(const RuleTree& r,
                                                      const StateVocab& v);

// Rewrite rule over terms with variables; lhs and rhs use the same variables
// at the positions where e occurred, and the lhs is linear.
struct TermRule {
  Term lhs, rhs;
  uint32_t num_vars = 0;
};

// Replaces every occurrence of e by a fresh variable, numbered left to right,
// with the same variable at the same position on both sides.
// InconsistentPair when the two sides disagree on where e occurs.
TermRule generalize(const Term& lhs, const Term& rhs, uint32_t e_const);

// All generalized term rules of a system, in rule order (pairs of a rule stay
// in term_pairs_of_rule order).
std::vector<TermRule> term_rules_of_system(const RewriteSystem& sys,
                                           const StateVocab& v);

// Label-preserving injective embedding that keeps the child order: a two-child
// node maps slot to slot, a one-child node may descend through either slot.
bool embeds(const StateTree& small, const StateTree& big);

}  // namespace treecert
