#pragma once

#include <variant>

#include "treecert/automata.hpp"
#include "treecert/pts.hpp"

namespace treecert {

// One-step relation given as a transducer; initial and unsafe sets as automata.
struct RtmcProblem {
  RankedAlphabet alphabet;
  TreeAutomaton init;
  TreeAutomaton unsafe;
  TreeTransducer transducer;

  explicit RtmcProblem(RankedAlphabet a)
      : alphabet(std::move(a)), transducer(alphabet) {}
};

// Rewrite rules; initial set as an automaton over the state-function alphabet;
// unsafe set as an upward closure of generators or as another automaton.
struct PtsProblem {
  RewriteSystem system;
  RankedAlphabet fq;
  TreeAutomaton init;
  std::vector<StateTree> unsafe_generators;
  std::optional<TreeAutomaton> unsafe_automaton;

  explicit PtsProblem(RewriteSystem sys)
      : system(std::move(sys)), fq(fq_alphabet(system.states())) {}
};

void validate_problem(const RtmcProblem& p);  // throws Error(InputError / ArityMismatch)
void validate_problem(const PtsProblem& p);

struct RtmcEncodeOptions {
  // Reference encodings keep one constant namespace across the three machines
  // (their q0 is our q0); switching this off tags constants i_/u_/d_ instead.
  bool share_state_constants = true;
};

struct EncodedRtmc {
  Theory theory;
  TermVocab vocab;                    // leaf constants and f_theta functions
  std::vector<uint32_t> init_consts;  // automaton state id -> constant id
  std::vector<uint32_t> unsafe_consts;
  std::vector<uint32_t> trans_consts;
  uint32_t pred_init2 = 0, pred_init1 = 0, pred_bad2 = 0, pred_bad1 = 0,
           pred_t = 0, pred_r = 0;
};

// Clause families: transition facts/rules, their bridge into R, reflexivity,
// transitivity, initial facts/rules/bridge, unsafe facts/rules/bridge, and the
// denial of  exists x exists y (Init1(x) & R(x,y) & Bad1(y)).
EncodedRtmc encode_rtmc(const RtmcProblem& p, const RtmcEncodeOptions& opts = {});

struct PtsEncodeOptions {
  // When the initial (or unsafe) automaton has a single final state, name its
  // predicate Init (Unsafe) directly instead of bridging I<q> -> Init.
  bool merge_unique_final = true;
};

struct EncodedPts {
  Theory theory;
  StateVocab vocab;
  std::vector<uint32_t> init_preds;  // automaton state id -> predicate id
  uint32_t pred_init = 0, pred_unsafe = 0, pred_r = 0;
};

// Rewriting facts for every generalized pair, reflexivity, congruence per
// state, transitivity, the initial-automaton clauses, and the unsafe family —
// either from an automaton or synthesized from embedding generators.
EncodedPts encode_pts(const PtsProblem& p, const PtsEncodeOptions& opts = {});

// Why a candidate invariant failed to produce a model.
struct InvariantFailure {
  enum class Reason { IntersectsUnsafe, InitialEscapes, NotClosed };
  Reason reason;
  std::string detail;
};
const char* invariant_failure_name(InvariantFailure::Reason r);

// Builds the interpretation induced by a deterministic complete automaton:
// domain = automaton states + e + one element per state constant, functions
// from its transition table (default e), predicates as least fixpoints. The
// model is returned when it falsifies the reachability goal.
std::variant<FiniteModel, InvariantFailure> model_from_invariant(
    const RtmcProblem& p, const TreeAutomaton& inv,
    const RtmcEncodeOptions& opts = {});

struct EmitOptions {
  std::vector<std::string> notes;  // leading "% " comment lines
};

// Clause text: assumptions list with one clause per line ("A & B -> C."),
// then a goals list with the existential conjunction.
std::string emit_ladr(const Theory& th, const EmitOptions& opts = {});

}  // namespace treecert
