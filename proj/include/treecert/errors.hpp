#pragma once

#include <stdexcept>
#include <string>

namespace treecert {

// Error kinds double as machine-checkable test anchors; the message carries detail.
enum class ErrorKind {
  ShapeMismatch,        // trees are not structurally equivalent
  ArityMismatch,        // label arity disagrees with child count / tuple partner
  IncompleteTree,       // configuration tree has a 1-child node where 0/2 required
  InconsistentPair,     // lhs/rhs padding positions disagree during generalization
  NonBinaryRule,        // rewrite-rule node with more than two children
  UnassignedVariable,   // term evaluation hit a variable outside the assignment
  UndeclaredSymbol,     // symbol id outside the signature / alphabet
  SignatureMismatch,    // model tables do not fit the theory signature
  ResourceLimit,        // grounding / search size cap exceeded
  NotDeterministic,     // automaton not deterministic+complete where required
  InputError,           // malformed problem file or inconsistent component
  Parse,                // textual notation could not be parsed
  SoundnessFault,       // finder and oracle produced contradictory verdicts
  Internal,             // broken internal invariant (a bug, not bad input)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

const char* error_kind_name(ErrorKind k);

}  // namespace treecert
