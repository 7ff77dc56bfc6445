#include "treecert/encode.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace treecert {

namespace {

// Rules must fit the alphabet the machine runs over; state ids must be real.
void check_machine(const TreeAutomaton& a, const RankedAlphabet& alpha,
                   const char* what) {
  for (const AutomatonRule& r : a.rules()) {
    if (r.symbol >= alpha.size())
      throw Error(ErrorKind::UndeclaredSymbol,
                  std::string(what) + ": rule uses an unknown symbol");
    if (alpha.arity(r.symbol) != r.lhs.size())
      throw Error(ErrorKind::ArityMismatch,
                  std::string(what) + ": rule for '" + alpha.name(r.symbol) +
                      "' has " + std::to_string(r.lhs.size()) +
                      " child states, symbol arity is " +
                      std::to_string(alpha.arity(r.symbol)));
    if (r.rhs >= a.num_states())
      throw Error(ErrorKind::InputError,
                  std::string(what) + ": rule targets an unknown state");
    for (uint32_t q : r.lhs)
      if (q >= a.num_states())
        throw Error(ErrorKind::InputError,
                    std::string(what) + ": rule reads an unknown state");
  }
}

void check_pattern(const StateTree& t, uint32_t num_states) {
  if (t.label >= num_states)
    throw Error(ErrorKind::UndeclaredSymbol,
                "generator pattern uses an unknown state");
  if (t.children.size() > 2)
    throw Error(ErrorKind::NonBinaryRule,
                "generator pattern node has more than two children");
  for (const StateTree& c : t.children) check_pattern(c, num_states);
}

Clause done(Clause c) {
  c.num_vars = count_clause_vars(c);
  return c;
}

Clause fact(Atom head) {
  Clause c;
  c.head = std::move(head);
  return done(std::move(c));
}

Clause rule(std::vector<Atom> body, Atom head) {
  Clause c;
  c.body = std::move(body);
  c.head = std::move(head);
  return done(std::move(c));
}

uint32_t fresh_pred(Signature& sig, const std::string& name, uint32_t arity) {
  if (sig.find_predicate(name))
    throw Error(ErrorKind::InputError,
                "predicate name '" + name + "' is generated twice; rename the "
                "colliding state");
  return sig.add_predicate(name, arity);
}

}  // namespace

void validate_problem(const RtmcProblem& p) {
  if (!p.alphabet.has_nullary())
    throw Error(ErrorKind::InputError, "alphabet has no leaf symbol");
  if (p.transducer.base().size() != p.alphabet.size())
    throw Error(ErrorKind::InputError,
                "transducer was built over a different alphabet");
  check_machine(p.init, p.alphabet, "initial automaton");
  check_machine(p.unsafe, p.alphabet, "unsafe automaton");
  check_machine(p.transducer.machine(), p.transducer.pair_alphabet(),
                "transducer");
}

void validate_problem(const PtsProblem& p) {
  if (p.system.num_states() == 0)
    throw Error(ErrorKind::InputError, "rewrite system has no states");
  check_machine(p.init, p.fq, "initial automaton");
  if (p.unsafe_automaton && !p.unsafe_generators.empty())
    throw Error(ErrorKind::InputError,
                "give the unsafe set as generators or as an automaton, not both");
  if (p.unsafe_automaton)
    check_machine(*p.unsafe_automaton, p.fq, "unsafe automaton");
  for (const StateTree& g : p.unsafe_generators)
    check_pattern(g, p.system.num_states());
}

// --- relation-tracking encoding ---------------------------------------------

EncodedRtmc encode_rtmc(const RtmcProblem& p, const RtmcEncodeOptions& opts) {
  validate_problem(p);
  EncodedRtmc enc;
  Signature& sig = enc.theory.sig;

  auto declare_states = [&](const TreeAutomaton& a, const char* prefix) {
    std::vector<uint32_t> ids(a.num_states());
    for (uint32_t q = 0; q < a.num_states(); ++q) {
      std::string name = opts.share_state_constants
                             ? a.state_name(q)
                             : prefix + a.state_name(q);
      ids[q] = sig.add_constant(name);
    }
    return ids;
  };
  enc.init_consts = declare_states(p.init, "i_");
  enc.unsafe_consts = declare_states(p.unsafe, "u_");
  enc.trans_consts = declare_states(p.transducer.machine(), "d_");

  // Leaf symbols become constants too; a name clash with a state constant
  // would silently merge the two, so reject it up front.
  for (uint32_t s = 0; s < p.alphabet.size(); ++s)
    if (p.alphabet.arity(s) == 0 && sig.find_constant(p.alphabet.name(s)))
      throw Error(ErrorKind::InputError,
                  "leaf symbol '" + p.alphabet.name(s) +
                      "' collides with a state constant; rename the state or "
                      "disable constant sharing");
  enc.vocab = declare_term_vocab(sig, p.alphabet);

  enc.pred_init2 = sig.add_predicate("Init", 2);
  enc.pred_init1 = sig.add_predicate("Init1", 1);
  enc.pred_bad2 = sig.add_predicate("Bad", 2);
  enc.pred_bad1 = sig.add_predicate("Bad1", 1);
  enc.pred_t = sig.add_predicate("T", 3);
  enc.pred_r = sig.add_predicate("R", 2);

  auto& cl = enc.theory.clauses;

  // Pair-machine runs, one clause per transition: facts for leaf pairs, then
  // one implication per composite pair.
  const TreeAutomaton& d = p.transducer.machine();
  auto t_atom = [&](Term a, Term b, uint32_t q) {
    return Atom{enc.pred_t,
                {std::move(a), std::move(b),
                 Term::constant(enc.trans_consts[q])}};
  };
  for (int pass = 0; pass < 2; ++pass) {
    for (const AutomatonRule& r : d.rules()) {
      auto [f1, f2] = p.transducer.components(r.symbol);
      uint32_t arity = p.alphabet.arity(f1);
      if ((arity == 0) != (pass == 0)) continue;
      if (arity == 0) {
        cl.push_back(fact(t_atom(Term::constant(enc.vocab.constant_of[f1]),
                                 Term::constant(enc.vocab.constant_of[f2]),
                                 r.rhs)));
      } else {
        std::vector<Term> xs, ys;
        for (uint32_t i = 0; i < arity; ++i) xs.push_back(Term::var(i));
        for (uint32_t i = 0; i < arity; ++i) ys.push_back(Term::var(arity + i));
        std::vector<Atom> body;
        for (uint32_t i = 0; i < arity; ++i)
          body.push_back(t_atom(xs[i], ys[i], r.lhs[i]));
        cl.push_back(rule(std::move(body),
                          t_atom(Term::app(enc.vocab.function_of[f1], xs),
                                 Term::app(enc.vocab.function_of[f2], ys),
                                 r.rhs)));
      }
    }
  }

  // Single-machine runs (initial set, then unsafe set), same shape.
  auto machine_clauses = [&](const TreeAutomaton& a,
                             const std::vector<uint32_t>& consts,
                             uint32_t pred) {
    auto at = [&](Term x, uint32_t q) {
      return Atom{pred, {std::move(x), Term::constant(consts[q])}};
    };
    for (int pass = 0; pass < 2; ++pass) {
      for (const AutomatonRule& r : a.rules()) {
        uint32_t arity = p.alphabet.arity(r.symbol);
        if ((arity == 0) != (pass == 0)) continue;
        if (arity == 0) {
          cl.push_back(
              fact(at(Term::constant(enc.vocab.constant_of[r.symbol]), r.rhs)));
        } else {
          std::vector<Term> xs;
          for (uint32_t i = 0; i < arity; ++i) xs.push_back(Term::var(i));
          std::vector<Atom> body;
          for (uint32_t i = 0; i < arity; ++i)
            body.push_back(at(xs[i], r.lhs[i]));
          cl.push_back(rule(
              std::move(body),
              at(Term::app(enc.vocab.function_of[r.symbol], xs), r.rhs)));
        }
      }
    }
  };
  machine_clauses(p.init, enc.init_consts, enc.pred_init2);
  machine_clauses(p.unsafe, enc.unsafe_consts, enc.pred_bad2);

  // Accepted pair runs feed R, which is then closed reflexively/transitively.
  for (uint32_t q : d.finals())
    cl.push_back(rule({t_atom(Term::var(0), Term::var(1), q)},
                      Atom{enc.pred_r, {Term::var(0), Term::var(1)}}));
  cl.push_back(fact(Atom{enc.pred_r, {Term::var(0), Term::var(0)}}));
  cl.push_back(rule({Atom{enc.pred_r, {Term::var(0), Term::var(1)}},
                     Atom{enc.pred_r, {Term::var(1), Term::var(2)}}},
                    Atom{enc.pred_r, {Term::var(0), Term::var(2)}}));

  // Accepted single runs feed the unary set predicates.
  for (uint32_t q : p.init.finals())
    cl.push_back(rule({Atom{enc.pred_init2,
                            {Term::var(0), Term::constant(enc.init_consts[q])}}},
                      Atom{enc.pred_init1, {Term::var(0)}}));
  for (uint32_t q : p.unsafe.finals())
    cl.push_back(
        rule({Atom{enc.pred_bad2,
                   {Term::var(0), Term::constant(enc.unsafe_consts[q])}}},
             Atom{enc.pred_bad1, {Term::var(0)}}));

  // Reachability goal, denied: no initial tree rewrites to an unsafe one.
  enc.theory.goal = {Atom{enc.pred_init1, {Term::var(0)}},
                     Atom{enc.pred_r, {Term::var(0), Term::var(1)}},
                     Atom{enc.pred_bad1, {Term::var(1)}}};
  enc.theory.goal_vars = 2;
  Clause denial;
  denial.body = enc.theory.goal;
  denial.num_vars = 2;
  cl.push_back(std::move(denial));

  validate_theory(enc.theory);
  return enc;
}

// --- rewriting encoding -------------------------------------------------------

namespace {

bool same_state_tree(const StateTree& a, const StateTree& b) {
  if (a.label != b.label || a.children.size() != b.children.size()) return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!same_state_tree(a.children[i], b.children[i])) return false;
  return true;
}

}  // namespace

EncodedPts encode_pts(const PtsProblem& p, const PtsEncodeOptions& opts) {
  validate_problem(p);
  EncodedPts enc;
  Signature& sig = enc.theory.sig;
  enc.vocab = declare_state_vocab(sig, p.system.states());

  enc.pred_r = sig.add_predicate("R", 2);

  // One unary predicate per initial-automaton state; a unique final state may
  // take the name Init itself, otherwise a bridge clause introduces it.
  const TreeAutomaton& ia = p.init;
  bool merge_i = opts.merge_unique_final && ia.finals().size() == 1;
  enc.init_preds.resize(ia.num_states());
  for (uint32_t q = 0; q < ia.num_states(); ++q) {
    std::string name = (merge_i && ia.is_final(q)) ? std::string("Init")
                                                   : "I" + ia.state_name(q);
    enc.init_preds[q] = fresh_pred(sig, name, 1);
  }
  enc.pred_init =
      merge_i ? enc.init_preds[ia.finals()[0]] : fresh_pred(sig, "Init", 1);

  // The unsafe side: predicates for an explicit automaton, or one hosted-
  // pattern predicate per distinct proper subtree of the generators.
  std::vector<uint32_t> u_preds;
  bool merge_u = false;
  std::vector<StateTree> patterns;
  std::vector<uint32_t> pattern_pred;
  std::vector<StateTree> gens;
  if (p.unsafe_automaton) {
    const TreeAutomaton& ua = *p.unsafe_automaton;
    merge_u = opts.merge_unique_final && ua.finals().size() == 1;
    u_preds.resize(ua.num_states());
    for (uint32_t q = 0; q < ua.num_states(); ++q) {
      std::string name = (merge_u && ua.is_final(q)) ? std::string("Unsafe")
                                                     : "U" + ua.state_name(q);
      u_preds[q] = fresh_pred(sig, name, 1);
    }
    enc.pred_unsafe =
        merge_u ? u_preds[ua.finals()[0]] : fresh_pred(sig, "Unsafe", 1);
  } else {
    for (const StateTree& g : p.unsafe_generators) {
      bool seen = false;
      for (const StateTree& h : gens) seen = seen || same_state_tree(g, h);
      if (!seen) gens.push_back(g);
    }
    std::function<void(const StateTree&)> visit = [&](const StateTree& t) {
      for (const StateTree& q : patterns)
        if (same_state_tree(q, t)) return;
      patterns.push_back(t);
      pattern_pred.push_back(
          fresh_pred(sig, "B" + std::to_string(patterns.size()), 1));
      for (const StateTree& c : t.children) visit(c);
    };
    for (const StateTree& g : gens)
      for (const StateTree& c : g.children) visit(c);
    enc.pred_unsafe = fresh_pred(sig, "Unsafe", 1);
  }

  auto pattern_of = [&](const StateTree& t) -> uint32_t {
    for (uint32_t i = 0; i < patterns.size(); ++i)
      if (same_state_tree(patterns[i], t)) return pattern_pred[i];
    throw Error(ErrorKind::Internal, "generator subtree lost during synthesis");
  };

  auto& cl = enc.theory.clauses;
  auto r_at = [&](Term a, Term b) {
    return Atom{enc.pred_r, {std::move(a), std::move(b)}};
  };
  auto fq = [&](uint32_t q, Term a, Term b) {
    return Term::app(enc.vocab.function_of[q], {std::move(a), std::move(b)});
  };

  // Rewriting facts: one R pair per generalized rule instance, in rule order.
  for (const TermRule& tr : term_rules_of_system(p.system, enc.vocab)) {
    Clause c;
    c.head = r_at(tr.lhs, tr.rhs);
    c.num_vars = tr.num_vars;
    cl.push_back(std::move(c));
  }

  // Reflexivity, congruence in every state function, transitivity.
  cl.push_back(fact(r_at(Term::var(0), Term::var(0))));
  for (uint32_t q = 0; q < p.system.num_states(); ++q)
    cl.push_back(rule({r_at(Term::var(0), Term::var(1)),
                       r_at(Term::var(2), Term::var(3))},
                      r_at(fq(q, Term::var(0), Term::var(2)),
                           fq(q, Term::var(1), Term::var(3)))));
  cl.push_back(rule({r_at(Term::var(0), Term::var(1)),
                     r_at(Term::var(1), Term::var(2))},
                    r_at(Term::var(0), Term::var(2))));

  // Initial set: leaf facts first (a two-leaf rule grounded through e), then
  // one implication per two-child rule, then the bridge when it exists.
  auto machine_clauses = [&](const TreeAutomaton& a,
                             const std::vector<uint32_t>& preds,
                             bool merged, uint32_t top) {
    std::vector<uint8_t> e_reaches(a.num_states(), 0);
    for (const AutomatonRule& r : a.rules())
      if (p.fq.arity(r.symbol) == 0) e_reaches[r.rhs] = 1;
    Term e = Term::constant(enc.vocab.e_const);
    for (const AutomatonRule& r : a.rules()) {
      if (p.fq.arity(r.symbol) != 2) continue;
      uint32_t q = state_of_fq_symbol(r.symbol);
      if (r.lhs[0] == r.lhs[1] && e_reaches[r.lhs[0]])
        cl.push_back(fact(Atom{preds[r.rhs], {fq(q, e, e)}}));
    }
    for (const AutomatonRule& r : a.rules()) {
      if (p.fq.arity(r.symbol) != 2) continue;
      uint32_t q = state_of_fq_symbol(r.symbol);
      cl.push_back(rule({Atom{preds[r.lhs[0]], {Term::var(0)}},
                         Atom{preds[r.lhs[1]], {Term::var(1)}}},
                        Atom{preds[r.rhs],
                             {fq(q, Term::var(0), Term::var(1))}}));
    }
    if (!merged)
      for (uint32_t q : a.finals())
        cl.push_back(rule({Atom{preds[q], {Term::var(0)}}},
                          Atom{top, {Term::var(0)}}));
  };
  machine_clauses(ia, enc.init_preds, merge_i, enc.pred_init);

  if (p.unsafe_automaton) {
    machine_clauses(*p.unsafe_automaton, u_preds, merge_u, enc.pred_unsafe);
  } else {
    // Upward closure of the generators: a pattern is hosted in a term when it
    // matches at the root (label by label, a lone child descending through
    // either slot) or anywhere below. Rooted clauses per pattern, then
    // propagation through every state function — skipped where a rooted fact
    // already covers the whole function.
    auto rooted = [&](const StateTree& t, uint32_t head_pred) {
      uint32_t q = t.label;
      switch (t.children.size()) {
        case 0:
          cl.push_back(
              fact(Atom{head_pred, {fq(q, Term::var(0), Term::var(1))}}));
          break;
        case 1: {
          uint32_t sub = pattern_of(t.children[0]);
          cl.push_back(rule({Atom{sub, {Term::var(0)}}},
                            Atom{head_pred,
                                 {fq(q, Term::var(0), Term::var(1))}}));
          cl.push_back(rule({Atom{sub, {Term::var(0)}}},
                            Atom{head_pred,
                                 {fq(q, Term::var(1), Term::var(0))}}));
          break;
        }
        default: {
          uint32_t s1 = pattern_of(t.children[0]);
          uint32_t s2 = pattern_of(t.children[1]);
          cl.push_back(rule({Atom{s1, {Term::var(0)}},
                             Atom{s2, {Term::var(1)}}},
                            Atom{head_pred,
                                 {fq(q, Term::var(0), Term::var(1))}}));
        }
      }
    };
    auto propagate = [&](uint32_t pred,
                         const std::function<bool(uint32_t)>& covered) {
      for (uint32_t q = 0; q < p.system.num_states(); ++q) {
        if (covered(q)) continue;
        cl.push_back(rule({Atom{pred, {Term::var(0)}}},
                          Atom{pred, {fq(q, Term::var(0), Term::var(1))}}));
        cl.push_back(rule({Atom{pred, {Term::var(0)}}},
                          Atom{pred, {fq(q, Term::var(1), Term::var(0))}}));
      }
    };
    for (uint32_t i = 0; i < patterns.size(); ++i) {
      rooted(patterns[i], pattern_pred[i]);
      propagate(pattern_pred[i], [&](uint32_t q) {
        return patterns[i].children.empty() && patterns[i].label == q;
      });
    }
    for (const StateTree& g : gens) rooted(g, enc.pred_unsafe);
    propagate(enc.pred_unsafe, [&](uint32_t q) {
      for (const StateTree& g : gens)
        if (g.children.empty() && g.label == q) return true;
      return false;
    });
  }

  enc.theory.goal = {Atom{enc.pred_init, {Term::var(0)}},
                     Atom{enc.pred_r, {Term::var(0), Term::var(1)}},
                     Atom{enc.pred_unsafe, {Term::var(1)}}};
  enc.theory.goal_vars = 2;
  Clause denial;
  denial.body = enc.theory.goal;
  denial.num_vars = 2;
  cl.push_back(std::move(denial));

  validate_theory(enc.theory);
  return enc;
}

// --- invariant-induced interpretations ---------------------------------------

const char* invariant_failure_name(InvariantFailure::Reason r) {
  switch (r) {
    case InvariantFailure::Reason::IntersectsUnsafe: return "intersects-unsafe";
    case InvariantFailure::Reason::InitialEscapes: return "initial-escapes";
    case InvariantFailure::Reason::NotClosed: return "not-closed";
  }
  return "?";
}

std::variant<FiniteModel, InvariantFailure> model_from_invariant(
    const RtmcProblem& p, const TreeAutomaton& inv,
    const RtmcEncodeOptions& opts) {
  if (!is_deterministic_complete(inv, p.alphabet))
    throw Error(ErrorKind::NotDeterministic,
                "invariant automaton must be deterministic and complete "
                "(determinize it first)");

  EncodedRtmc enc = encode_rtmc(p, opts);
  const Signature& sig = enc.theory.sig;

  // Domain: one element per invariant state, the padding element e, and one
  // fresh element per state constant so distinct tags stay distinct.
  uint32_t n = inv.num_states();
  std::vector<uint8_t> is_state_const(sig.num_constants(), 0);
  for (const auto* v : {&enc.init_consts, &enc.unsafe_consts, &enc.trans_consts})
    for (uint32_t c : *v) is_state_const[c] = 1;
  uint32_t num_state_consts = 0;
  for (uint8_t b : is_state_const) num_state_consts += b;
  uint32_t k = n + 1 + num_state_consts;
  uint32_t e_elem = n;

  FiniteModel m = FiniteModel::blank(sig, k);
  uint32_t next = n + 1;
  for (uint32_t c = 0; c < sig.num_constants(); ++c)
    if (is_state_const[c]) m.const_val[c] = next++;

  // Leaf symbols evaluate to the invariant state their leaf rule reaches.
  for (uint32_t s = 0; s < p.alphabet.size(); ++s) {
    if (p.alphabet.arity(s) != 0) continue;
    auto rr = inv.rules_for(s);
    if (rr.size() != 1)
      throw Error(ErrorKind::Internal, "complete automaton missing a leaf rule");
    m.const_val[enc.vocab.constant_of[s]] = inv.rules()[rr[0]].rhs;
  }

  // Composite symbols follow the transition table on invariant states and
  // fall off to e anywhere else.
  for (uint32_t s = 0; s < p.alphabet.size(); ++s) {
    uint32_t arity = p.alphabet.arity(s);
    if (arity == 0) continue;
    uint64_t dense_n = int_pow(n, arity);
    std::vector<uint32_t> table(dense_n, UINT32_MAX);
    for (uint32_t ri : inv.rules_for(s)) {
      const AutomatonRule& r = inv.rules()[ri];
      uint64_t flat = 0;
      for (uint32_t q : r.lhs) flat = flat * n + q;
      table[flat] = r.rhs;
    }
    std::vector<uint32_t>& cells = m.func[enc.vocab.function_of[s]];
    std::vector<uint32_t> args(arity, 0);
    for (uint64_t flat = 0; flat < cells.size(); ++flat) {
      uint64_t rem = flat;
      bool inside = true;
      for (uint32_t i = arity; i-- > 0;) {
        args[i] = static_cast<uint32_t>(rem % k);
        rem /= k;
        inside = inside && args[i] < n;
      }
      if (!inside) {
        cells[flat] = e_elem;
        continue;
      }
      uint64_t dense = 0;
      for (uint32_t i = 0; i < arity; ++i) dense = dense * n + args[i];
      if (table[dense] == UINT32_MAX)
        throw Error(ErrorKind::Internal,
                    "complete automaton missing a transition");
      cells[flat] = table[dense];
    }
  }

  least_predicates(enc.theory, m);

  const auto& init1 = m.pred[enc.pred_init1];
  const auto& bad1 = m.pred[enc.pred_bad1];
  const auto& r_tab = m.pred[enc.pred_r];
  bool goal_holds = false;
  for (uint32_t x = 0; x < k && !goal_holds; ++x)
    for (uint32_t y = 0; y < k && !goal_holds; ++y)
      goal_holds = init1[x] && r_tab[static_cast<size_t>(x) * k + y] && bad1[y];

  if (!goal_holds) {
    CheckReport rep = check_model(m, enc.theory);
    if (!rep.satisfied)
      throw Error(ErrorKind::Internal,
                  "invariant-induced interpretation failed the clause check");
    return m;
  }

  auto elem_name = [&](uint32_t x) -> std::string {
    if (x < n) return inv.state_name(x);
    if (x == e_elem) return "e";
    for (uint32_t c = 0; c < sig.num_constants(); ++c)
      if (is_state_const[c] && m.const_val[c] == x) return sig.constant_name(c);
    return std::to_string(x);
  };
  auto accepted = [&](uint32_t x) { return x < n && inv.is_final(x); };

  for (uint32_t q : inv.finals())
    if (bad1[q])
      return InvariantFailure{
          InvariantFailure::Reason::IntersectsUnsafe,
          "the invariant accepts an unsafe tree (its state '" +
              inv.state_name(q) + "' is accepting and hosts the unsafe set)"};
  for (uint32_t x = 0; x < k; ++x)
    if (init1[x] && !accepted(x))
      return InvariantFailure{
          InvariantFailure::Reason::InitialEscapes,
          "an initial tree evaluates to '" + elem_name(x) +
              "', which the invariant does not accept"};
  for (uint32_t q : inv.finals())
    for (uint32_t y = 0; y < k; ++y)
      if (r_tab[static_cast<size_t>(q) * k + y] && !accepted(y))
        return InvariantFailure{
            InvariantFailure::Reason::NotClosed,
            "a tree accepted at invariant state '" + inv.state_name(q) +
                "' rewrites to '" + elem_name(y) + "', which escapes the "
                "invariant"};
  throw Error(ErrorKind::Internal,
              "goal held in the induced interpretation but no cause was found");
}

// --- clause text --------------------------------------------------------------

namespace {

std::string var_name(uint32_t i) {
  static const char* letters[6] = {"x", "y", "z", "u", "v", "w"};
  std::string s = letters[i % 6];
  if (i >= 6) s += std::to_string(i / 6);
  return s;
}

void print_term(std::string& out, const Signature& sig, const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
      out += var_name(t.sym);
      break;
    case Term::Kind::Const:
      out += sig.constant_name(t.sym);
      break;
    case Term::Kind::App:
      out += sig.function_name(t.sym);
      out += '(';
      for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ',';
        print_term(out, sig, t.args[i]);
      }
      out += ')';
      break;
  }
}

void print_atom(std::string& out, const Signature& sig, const Atom& a) {
  out += sig.predicate_name(a.pred);
  if (a.args.empty()) return;
  out += '(';
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    print_term(out, sig, a.args[i]);
  }
  out += ')';
}

}  // namespace

std::string emit_ladr(const Theory& th, const EmitOptions& opts) {
  std::string out;
  for (const std::string& note : opts.notes) {
    out += "% ";
    out += note;
    out += '\n';
  }
  if (!opts.notes.empty()) out += '\n';

  out += "formulas(assumptions).\n";
  for (const Clause& c : th.clauses) {
    if (!c.head) continue;  // the denial reappears as the goal below
    for (size_t i = 0; i < c.body.size(); ++i) {
      if (i) out += " & ";
      print_atom(out, th.sig, c.body[i]);
    }
    if (!c.body.empty()) out += " -> ";
    print_atom(out, th.sig, *c.head);
    out += ".\n";
  }
  out += "end_of_list.\n";

  if (!th.goal.empty()) {
    out += "\nformulas(goals).\n";
    for (uint32_t i = 0; i < th.goal_vars; ++i) {
      out += "exists ";
      out += var_name(i);
      out += ' ';
    }
    out += '(';
    for (size_t i = 0; i < th.goal.size(); ++i) {
      if (i) out += " & ";
      print_atom(out, th.sig, th.goal[i]);
    }
    out += ").\nend_of_list.\n";
  }
  return out;
}

}  // namespace treecert
