#pragma once

#include "treecert/fol.hpp"
#include "treecert/trees.hpp"

namespace treecert {

// Term vocabulary of a ranked alphabet: arity-0 symbols become constants under
// their own name, arity-p symbols (p >= 1) become p-ary functions "f" + name.
struct TermVocab {
  std::vector<uint32_t> constant_of;  // alphabet symbol id -> constant id (arity 0)
  std::vector<uint32_t> function_of;  // alphabet symbol id -> function id (arity >= 1)
};

TermVocab declare_term_vocab(Signature& sig, const RankedAlphabet& alpha);

// Leaf a -> constant a; theta(t1..tp) -> f_theta(translations...).
Term term_of_tree(const Tree& t, const RankedAlphabet& alpha, const TermVocab& v);

// Term vocabulary of a state set: one binary function "f" + state name per
// state, plus the padding constant e.
struct StateVocab {
  std::vector<uint32_t> function_of;                    // state id -> function id
  std::unordered_map<uint32_t, uint32_t> state_of;      // function id -> state id
  uint32_t e_const = 0;
};

StateVocab declare_state_vocab(Signature& sig, const SymbolTable& states);

// Leaf q -> f_q(e,e); q(t1,t2) -> f_q(...). One-child nodes are rejected:
// only rule patterns may be incomplete, never configurations.
Term term_of_state_tree(const StateTree& t, const StateVocab& v);

// Inverse of term_of_state_tree; rejects terms that are not translations of
// complete binary configurations.
StateTree state_tree_of_term(const Term& tm, const StateVocab& v);

// The ranked-alphabet view of a state vocabulary: symbol "e" of arity 0 first,
// then one binary symbol "f" + name per state, in state order. Initial
// configurations of rewrite systems are given by automata over this alphabet.
RankedAlphabet fq_alphabet(const SymbolTable& states);

// state id q <-> fq_alphabet symbol id 1 + q ("e" occupies id 0)
inline uint32_t fq_symbol_of_state(uint32_t state) { return state + 1; }
inline uint32_t state_of_fq_symbol(uint32_t symbol) { return symbol - 1; }

// Configuration as a tree over the fq alphabet: leaf q -> fq(e,e) and so on.
Tree fq_tree_of_state_tree(const StateTree& t);
StateTree state_tree_of_fq_tree(const Tree& t, const RankedAlphabet& fq);

}  // namespace treecert
