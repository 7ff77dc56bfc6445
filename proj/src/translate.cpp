#include "treecert/translate.hpp"

namespace treecert {

namespace {
constexpr uint32_t kNoId = ~0u;
}

TermVocab declare_term_vocab(Signature& sig, const RankedAlphabet& alpha) {
  TermVocab v;
  v.constant_of.assign(alpha.size(), kNoId);
  v.function_of.assign(alpha.size(), kNoId);
  for (uint32_t s = 0; s < alpha.size(); ++s) {
    if (alpha.arity(s) == 0)
      v.constant_of[s] = sig.add_constant(alpha.name(s));
    else
      v.function_of[s] = sig.add_function("f" + alpha.name(s), alpha.arity(s));
  }
  return v;
}

Term term_of_tree(const Tree& t, const RankedAlphabet& alpha, const TermVocab& v) {
  if (alpha.arity(t.label) == 0) return Term::constant(v.constant_of[t.label]);
  std::vector<Term> args;
  args.reserve(t.children.size());
  for (const auto& c : t.children) args.push_back(term_of_tree(c, alpha, v));
  return Term::app(v.function_of[t.label], std::move(args));
}

StateVocab declare_state_vocab(Signature& sig, const SymbolTable& states) {
  StateVocab v;
  v.function_of.resize(states.size());
  for (uint32_t q = 0; q < states.size(); ++q) {
    uint32_t f = sig.add_function("f" + states.name(q), 2);
    v.function_of[q] = f;
    v.state_of.emplace(f, q);
  }
  v.e_const = sig.add_constant("e");
  return v;
}

Term term_of_state_tree(const StateTree& t, const StateVocab& v) {
  Term e = Term::constant(v.e_const);
  if (t.children.empty())
    return Term::app(v.function_of[t.label], {e, e});
  if (t.children.size() != 2)
    throw Error(ErrorKind::IncompleteTree,
                "configuration node with " + std::to_string(t.children.size()) +
                    " children; configurations must be complete binary trees");
  return Term::app(v.function_of[t.label],
                   {term_of_state_tree(t.children[0], v),
                    term_of_state_tree(t.children[1], v)});
}

StateTree state_tree_of_term(const Term& tm, const StateVocab& v) {
  if (tm.kind != Term::Kind::App)
    throw Error(ErrorKind::IncompleteTree, "configuration term must be an application");
  auto it = v.state_of.find(tm.sym);
  if (it == v.state_of.end())
    throw Error(ErrorKind::UndeclaredSymbol, "function is not a state function");
  StateTree out;
  out.label = it->second;
  bool left_e = tm.args[0].kind == Term::Kind::Const && tm.args[0].sym == v.e_const;
  bool right_e = tm.args[1].kind == Term::Kind::Const && tm.args[1].sym == v.e_const;
  if (left_e != right_e)
    throw Error(ErrorKind::IncompleteTree, "term mixes e and non-e children");
  if (!left_e) {
    out.children.push_back(state_tree_of_term(tm.args[0], v));
    out.children.push_back(state_tree_of_term(tm.args[1], v));
  }
  return out;
}

RankedAlphabet fq_alphabet(const SymbolTable& states) {
  RankedAlphabet fq;
  fq.add("e", 0);
  for (uint32_t q = 0; q < states.size(); ++q) fq.add("f" + states.name(q), 2);
  return fq;
}

Tree fq_tree_of_state_tree(const StateTree& t) {
  Tree out;
  out.label = fq_symbol_of_state(t.label);
  if (t.children.empty()) {
    out.children.push_back(Tree{0, {}});
    out.children.push_back(Tree{0, {}});
    return out;
  }
  if (t.children.size() != 2)
    throw Error(ErrorKind::IncompleteTree, "configurations must be complete binary trees");
  out.children.push_back(fq_tree_of_state_tree(t.children[0]));
  out.children.push_back(fq_tree_of_state_tree(t.children[1]));
  return out;
}

StateTree state_tree_of_fq_tree(const Tree& t, const RankedAlphabet& fq) {
  if (fq.arity(t.label) != 2)
    throw Error(ErrorKind::IncompleteTree, "expected a state-function node");
  StateTree out;
  out.label = state_of_fq_symbol(t.label);
  bool left_e = t.children[0].label == 0;
  bool right_e = t.children[1].label == 0;
  if (left_e != right_e)
    throw Error(ErrorKind::IncompleteTree, "tree mixes e and non-e children");
  if (!left_e) {
    out.children.push_back(state_tree_of_fq_tree(t.children[0], fq));
    out.children.push_back(state_tree_of_fq_tree(t.children[1], fq));
  }
  return out;
}

}  // namespace treecert
