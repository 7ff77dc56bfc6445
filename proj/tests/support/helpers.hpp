#pragma once

// Shared test fixtures: the reference protocol machines built table by table,
// small brute-force oracles the fast implementations are checked against, a
// LADR reader for round-tripping emitted clause text, and a subprocess runner
// for the command-line tool.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "treecert/json_io.hpp"

namespace treecert::test {

inline std::string corpus_path(const std::string& name) {
  return std::string(TREECERT_CORPUS_DIR) + "/" + name;
}

inline bool contains(std::string_view hay, std::string_view needle) {
  return hay.find(needle) != std::string_view::npos;
}

// Runs f and reports the error kind it threw, if any.
template <typename F>
inline std::optional<ErrorKind> error_kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

// --- reference problems -------------------------------------------------------
//
// The two-way token protocol: a binary tree of processes passing a single
// token up and down. Built here straight from the transition tables so the
// JSON corpus can be diffed against an independent construction.

inline RtmcProblem twoway_rtmc() {
  RankedAlphabet alpha;
  alpha.add("t", 0);
  alpha.add("n", 0);
  alpha.add("T", 2);
  alpha.add("N", 2);
  RtmcProblem p(std::move(alpha));
  uint32_t t = p.alphabet.id("t"), n = p.alphabet.id("n");
  uint32_t T = p.alphabet.id("T"), N = p.alphabet.id("N");

  {  // initial set: exactly one token
    TreeAutomaton& a = p.init;
    uint32_t q0 = a.add_state("q0"), q1 = a.add_state("q1");
    a.mark_final(q1);
    a.add_rule(n, {}, q0);
    a.add_rule(t, {}, q1);
    a.add_rule(T, {q0, q0}, q1);
    a.add_rule(N, {q0, q0}, q0);
    a.add_rule(N, {q0, q1}, q1);
    a.add_rule(N, {q1, q0}, q1);
  }
  {  // unsafe set: at least two tokens (counting runs capped at 2)
    TreeAutomaton& a = p.unsafe;
    uint32_t q[3] = {a.add_state("q0"), a.add_state("q1"), a.add_state("q2")};
    a.mark_final(q[2]);
    a.add_rule(n, {}, q[0]);
    a.add_rule(t, {}, q[1]);
    for (uint32_t i = 0; i < 3; ++i)
      for (uint32_t j = 0; j < 3; ++j) {
        a.add_rule(N, {q[i], q[j]}, q[std::min(i + j, 3u - 1)]);
        a.add_rule(T, {q[i], q[j]}, q[std::min(i + j + 1, 3u - 1)]);
      }
  }
  {  // one-step relation: the token moves to a parent or child
    TreeTransducer& d = p.transducer;
    TreeAutomaton& m = d.machine();
    uint32_t q0 = m.add_state("q0"), q1 = m.add_state("q1");
    uint32_t q2 = m.add_state("q2"), q3 = m.add_state("q3");
    m.mark_final(q2);
    m.add_rule(d.pair_symbol(n, n), {}, q0);
    m.add_rule(d.pair_symbol(t, n), {}, q1);
    m.add_rule(d.pair_symbol(n, t), {}, q3);
    uint32_t NN = d.pair_symbol(N, N), TN = d.pair_symbol(T, N),
             NT = d.pair_symbol(N, T);
    m.add_rule(NN, {q0, q0}, q0);
    m.add_rule(NN, {q0, q2}, q2);
    m.add_rule(NN, {q2, q0}, q2);
    m.add_rule(TN, {q0, q0}, q1);
    m.add_rule(TN, {q3, q0}, q2);
    m.add_rule(TN, {q0, q3}, q2);
    m.add_rule(NT, {q0, q1}, q2);
    m.add_rule(NT, {q1, q0}, q2);
    m.add_rule(NT, {q0, q0}, q3);
  }
  return p;
}

inline PtsProblem twoway_pts() {
  RewriteSystem sys;
  uint32_t n = sys.add_state("n");
  uint32_t t = sys.add_state("t");
  sys.add_rule(RuleTree{t, n, {RuleTree{n, t, {}}}});  // token moves down
  sys.add_rule(RuleTree{n, t, {RuleTree{t, n, {}}}});  // token moves up
  PtsProblem p(std::move(sys));

  uint32_t e = p.fq.id("e"), fn = p.fq.id("fn"), ft = p.fq.id("ft");
  TreeAutomaton& a = p.init;
  uint32_t s1 = a.add_state("1"), s2 = a.add_state("2");
  a.mark_final(s2);
  a.add_rule(e, {}, s1);
  a.add_rule(fn, {s1, s1}, s1);
  a.add_rule(ft, {s1, s1}, s2);
  a.add_rule(fn, {s2, s1}, s2);
  a.add_rule(fn, {s1, s2}, s2);

  p.unsafe_generators = {
      StateTree(t, {StateTree(t)}),                // a token below a token
      StateTree(n, {StateTree(t), StateTree(t)}),  // two incomparable tokens
      StateTree(t, {StateTree(t), StateTree(t)}),
  };
  return p;
}

// The classic soundness mutant: a one-child rule that leaves the token behind.
inline PtsProblem token_duplication_pts() {
  PtsProblem base = twoway_pts();
  RewriteSystem sys;
  uint32_t n = sys.add_state("n");
  uint32_t t = sys.add_state("t");
  sys.add_rule(RuleTree{t, n, {RuleTree{n, t, {}}}});
  sys.add_rule(RuleTree{n, t, {RuleTree{t, n, {}}}});
  sys.add_rule(RuleTree{n, t, {RuleTree{t, t, {}}}});  // child keeps its token
  PtsProblem p(std::move(sys));
  p.init = base.init;
  p.unsafe_generators = base.unsafe_generators;
  return p;
}

// Deterministic complete token-counting automaton over the protocol alphabet:
// states zero / one / many, accepting exactly the one-token trees. This is an
// inductive invariant of the two-way token relation.
inline TreeAutomaton one_token_invariant(const RankedAlphabet& alpha) {
  TreeAutomaton a;
  uint32_t c[3] = {a.add_state("zero"), a.add_state("one"), a.add_state("many")};
  a.mark_final(c[1]);
  a.add_rule(alpha.id("n"), {}, c[0]);
  a.add_rule(alpha.id("t"), {}, c[1]);
  for (uint32_t i = 0; i < 3; ++i)
    for (uint32_t j = 0; j < 3; ++j) {
      a.add_rule(alpha.id("N"), {c[i], c[j]}, c[std::min(i + j, 2u)]);
      a.add_rule(alpha.id("T"), {c[i], c[j]}, c[std::min(i + j + 1, 2u)]);
    }
  return a;
}

// --- small parsers for fixture text -------------------------------------------

inline Tree rtree(const RtmcProblem& p, std::string_view text) {
  return parse_tree(text, p.alphabet);
}

inline StateTree stree(const RewriteSystem& sys, std::string_view text) {
  RawTree r = parse_raw_tree(text);
  std::function<StateTree(const RawTree&)> go = [&](const RawTree& raw) {
    auto q = sys.find_state(raw.label);
    if (!q) throw Error(ErrorKind::UndeclaredSymbol, "state " + raw.label);
    StateTree t(*q);
    for (const RawTree& c : raw.children) t.children.push_back(go(c));
    return t;
  };
  return go(r);
}

// --- exhaustive tree enumeration ----------------------------------------------

inline std::vector<Tree> all_trees(const RankedAlphabet& alpha,
                                   uint32_t max_nodes) {
  std::vector<std::vector<Tree>> by_size(max_nodes + 1);
  for (uint32_t s = 1; s <= max_nodes; ++s) {
    for (uint32_t sym = 0; sym < alpha.size(); ++sym) {
      uint32_t p = alpha.arity(sym);
      if (p == 0) {
        if (s == 1) by_size[s].emplace_back(sym);
      } else if (p == 1) {
        for (const Tree& c : (s >= 2 ? by_size[s - 1] : by_size[0]))
          by_size[s].push_back(Tree(sym, {c}));
      } else if (p == 2) {
        for (uint32_t l = 1; l + 1 < s; ++l)
          for (const Tree& c1 : by_size[l])
            for (const Tree& c2 : by_size[s - 1 - l])
              by_size[s].push_back(Tree(sym, {c1, c2}));
      } else {
        throw Error(ErrorKind::Internal, "enumeration supports arity <= 2");
      }
    }
  }
  std::vector<Tree> out;
  for (uint32_t s = 1; s <= max_nodes; ++s)
    out.insert(out.end(), by_size[s].begin(), by_size[s].end());
  return out;
}

// Complete binary configurations (every node has 0 or 2 children).
inline std::vector<StateTree> all_configs(uint32_t num_states,
                                          uint32_t max_nodes) {
  std::vector<std::vector<StateTree>> by_size(max_nodes + 1);
  for (uint32_t s = 1; s <= max_nodes; ++s)
    for (uint32_t q = 0; q < num_states; ++q) {
      if (s == 1) by_size[s].emplace_back(q);
      for (uint32_t l = 1; l + 1 < s; ++l)
        for (const StateTree& c1 : by_size[l])
          for (const StateTree& c2 : by_size[s - 1 - l])
            by_size[s].push_back(StateTree(q, {c1, c2}));
    }
  std::vector<StateTree> out;
  for (uint32_t s = 1; s <= max_nodes; ++s)
    out.insert(out.end(), by_size[s].begin(), by_size[s].end());
  return out;
}

// Rule-pattern trees (nodes may also have a single child).
inline std::vector<StateTree> all_patterns(uint32_t num_states,
                                           uint32_t max_nodes) {
  std::vector<std::vector<StateTree>> by_size(max_nodes + 1);
  for (uint32_t s = 1; s <= max_nodes; ++s)
    for (uint32_t q = 0; q < num_states; ++q) {
      if (s == 1) by_size[s].emplace_back(q);
      if (s >= 2)
        for (const StateTree& c : by_size[s - 1])
          by_size[s].push_back(StateTree(q, {c}));
      for (uint32_t l = 1; l + 1 < s; ++l)
        for (const StateTree& c1 : by_size[l])
          for (const StateTree& c2 : by_size[s - 1 - l])
            by_size[s].push_back(StateTree(q, {c1, c2}));
    }
  std::vector<StateTree> out;
  for (uint32_t s = 1; s <= max_nodes; ++s)
    out.insert(out.end(), by_size[s].begin(), by_size[s].end());
  return out;
}

inline uint32_t count_label(const StateTree& t, uint32_t q) {
  uint32_t n = t.label == q ? 1 : 0;
  for (const StateTree& c : t.children) n += count_label(c, q);
  return n;
}

// --- embedding, checked by trying every injective node map ---------------------

namespace detail {

using Path = std::vector<uint32_t>;

template <typename Tag>
inline void collect_paths(const BasicTree<Tag>& t, Path& here,
                          std::vector<std::pair<Path, uint32_t>>& out) {
  out.emplace_back(here, t.label);
  for (uint32_t i = 0; i < t.children.size(); ++i) {
    here.push_back(i);
    collect_paths(t.children[i], here, out);
    here.pop_back();
  }
}

inline bool is_strict_prefix(const Path& a, const Path& b) {
  return a.size() < b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// a lies in an earlier branch than b at their first divergence
inline bool left_of(const Path& a, const Path& b) {
  size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  return i < a.size() && i < b.size() && a[i] < b[i];
}

}  // namespace detail

// An embedding is an injective map between node sets that preserves labels,
// strict ancestorship, and left-to-right order. `slotwise` additionally pins
// the children of a two-child pattern node to distinct slots of the image
// node, which is the stricter reading the library implements.
inline bool embeds_by_injection(const StateTree& small, const StateTree& big,
                                bool slotwise) {
  using detail::Path;
  std::vector<std::pair<Path, uint32_t>> sn, bn;
  Path here;
  detail::collect_paths(small, here, sn);
  detail::collect_paths(big, here, bn);

  std::vector<int32_t> img(sn.size(), -1);
  std::vector<uint8_t> used(bn.size(), 0);
  std::function<bool(size_t)> place = [&](size_t i) -> bool {
    if (i == sn.size()) return true;
    for (size_t j = 0; j < bn.size(); ++j) {
      if (used[j] || sn[i].second != bn[j].second) continue;
      bool ok = true;
      for (size_t k = 0; k < i && ok; ++k) {
        const Path &pk = sn[k].first, &pi = sn[i].first;
        const Path &qk = bn[img[k]].first, &qj = bn[j].first;
        if (detail::is_strict_prefix(pk, pi)) ok = detail::is_strict_prefix(qk, qj);
        else if (detail::is_strict_prefix(pi, pk)) ok = detail::is_strict_prefix(qj, qk);
        else if (detail::left_of(pk, pi)) ok = detail::left_of(qk, qj);
        else ok = detail::left_of(qj, qk);
        if (ok && slotwise) {
          // parent-child pairs in a two-child pattern must split at the image
          const Path* par = nullptr;
          const Path *ipar = nullptr, *ikid = nullptr;
          uint32_t slot = 0;
          if (pk.size() + 1 == pi.size() && detail::is_strict_prefix(pk, pi)) {
            par = &pk; ipar = &qk; ikid = &qj; slot = pi.back();
          } else if (pi.size() + 1 == pk.size() && detail::is_strict_prefix(pi, pk)) {
            par = &pi; ipar = &qj; ikid = &qk; slot = pk.back();
          }
          if (par) {
            size_t plen = par->size();
            uint32_t nkids = 0;  // child count of the pattern parent
            for (const auto& [path, lab] : sn)
              if (path.size() == plen + 1 &&
                  std::equal(par->begin(), par->end(), path.begin()))
                ++nkids;
            if (nkids == 2)
              ok = ikid->size() > ipar->size() && (*ikid)[ipar->size()] == slot;
          }
        }
      }
      if (!ok) continue;
      img[i] = static_cast<int32_t>(j);
      used[j] = 1;
      if (place(i + 1)) return true;
      used[j] = 0;
      img[i] = -1;
    }
    return false;
  };
  return place(0);
}

// --- one-step rewriting, checked at the tree level ------------------------------

namespace detail {

// all results of applying the rule pattern exactly at the root of t
inline void apply_rooted(const RuleTree& r, const StateTree& t,
                         std::vector<StateTree>& out) {
  if (t.label != r.left) return;
  switch (r.children.size()) {
    case 0:
      out.push_back(StateTree(r.right, t.children));
      break;
    case 1: {
      if (t.children.size() != 2) return;
      for (uint32_t slot = 0; slot < 2; ++slot) {
        std::vector<StateTree> sub;
        apply_rooted(r.children[0], t.children[slot], sub);
        for (StateTree& u : sub) {
          StateTree v(r.right, t.children);
          v.children[slot] = std::move(u);
          out.push_back(std::move(v));
        }
      }
      break;
    }
    default: {
      if (t.children.size() != 2) return;
      std::vector<StateTree> s1, s2;
      apply_rooted(r.children[0], t.children[0], s1);
      apply_rooted(r.children[1], t.children[1], s2);
      for (const StateTree& u1 : s1)
        for (const StateTree& u2 : s2)
          out.push_back(StateTree(r.right, {u1, u2}));
    }
  }
}

inline void one_step_at(const std::vector<RuleTree>& rules, const StateTree& t,
                        std::vector<StateTree>& out) {
  for (const RuleTree& r : rules) apply_rooted(r, t, out);
  for (size_t i = 0; i < t.children.size(); ++i) {
    std::vector<StateTree> sub;
    one_step_at(rules, t.children[i], sub);
    for (StateTree& u : sub) {
      StateTree v = t;
      v.children[i] = std::move(u);
      out.push_back(std::move(v));
    }
  }
}

}  // namespace detail

inline std::vector<StateTree> one_step_brute(const RewriteSystem& sys,
                                             const StateTree& t) {
  std::vector<StateTree> out;
  detail::one_step_at(sys.rules(), t, out);
  std::sort(out.begin(), out.end(),
            [](const StateTree& a, const StateTree& b) { return tree_compare(a, b) < 0; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// every same-shape relabeling of t that the transducer relates t to
inline std::vector<Tree> one_step_brute_rtmc(const RtmcProblem& p, const Tree& t) {
  std::vector<const Tree*> shape;  // preorder node list of t
  std::function<void(const Tree&)> walk = [&](const Tree& u) {
    shape.push_back(&u);
    for (const Tree& c : u.children) walk(c);
  };
  walk(t);

  std::vector<std::vector<uint32_t>> choices;
  for (const Tree* u : shape) {
    choices.push_back(p.alphabet.symbols_of_arity(
        static_cast<uint32_t>(u->children.size())));
    if (choices.back().empty()) return {};
  }

  std::vector<Tree> out;
  std::vector<uint32_t> pick(shape.size(), 0);
  for (;;) {
    size_t at = 0;
    std::function<Tree(const Tree&)> build = [&](const Tree& u) {
      Tree v(choices[at][pick[at]]);
      ++at;
      for (const Tree& c : u.children) v.children.push_back(build(c));
      return v;
    };
    Tree candidate = build(t);
    if (p.transducer.relates(t, candidate)) out.push_back(candidate);
    size_t i = 0;
    while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  std::sort(out.begin(), out.end(),
            [](const Tree& a, const Tree& b) { return tree_compare(a, b) < 0; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// --- naive model evaluation (no sharing with check_model) -----------------------

namespace detail {

inline uint32_t naive_eval(const FiniteModel& m, const Term& t,
                           const std::vector<uint32_t>& asg) {
  switch (t.kind) {
    case Term::Kind::Var: return asg[t.sym];
    case Term::Kind::Const: return m.const_val[t.sym];
    default: {
      uint64_t flat = 0;
      for (const Term& a : t.args) flat = flat * m.size + naive_eval(m, a, asg);
      return m.func[t.sym][flat];
    }
  }
}

inline bool naive_atom(const FiniteModel& m, const Atom& a,
                       const std::vector<uint32_t>& asg) {
  uint64_t flat = 0;
  for (const Term& t : a.args) flat = flat * m.size + naive_eval(m, t, asg);
  return m.pred[a.pred][flat] != 0;
}

}  // namespace detail

inline uint64_t naive_violations(const FiniteModel& m, const Theory& th) {
  uint64_t bad = 0;
  for (const Clause& c : th.clauses) {
    std::vector<uint32_t> asg(c.num_vars, 0);
    for (;;) {
      bool body = true;
      for (const Atom& a : c.body) body = body && detail::naive_atom(m, a, asg);
      if (body && !(c.head && detail::naive_atom(m, *c.head, asg))) ++bad;
      uint32_t i = 0;
      while (i < c.num_vars && ++asg[i] == m.size) asg[i++] = 0;
      if (i == c.num_vars) break;
    }
  }
  return bad;
}

inline bool naive_satisfied(const FiniteModel& m, const Theory& th) {
  return naive_violations(m, th) == 0;
}

// Enumerates every interpretation of the signature over {0..k-1}; true iff one
// satisfies the theory. Only workable for tiny signatures and k <= 2.
inline bool exists_model_brute(const Theory& th, uint32_t k) {
  const Signature& sig = th.sig;
  FiniteModel m = FiniteModel::blank(sig, k);

  std::vector<uint32_t*> cells;   // domain-valued table slots
  for (uint32_t c = 0; c < sig.num_constants(); ++c) cells.push_back(&m.const_val[c]);
  for (auto& tbl : m.func)
    for (uint32_t& v : tbl) cells.push_back(&v);
  std::vector<uint8_t*> bits;
  for (auto& tbl : m.pred)
    for (uint8_t& v : tbl) bits.push_back(&v);

  for (;;) {
    if (naive_satisfied(m, th)) return true;
    size_t i = 0;
    while (i < cells.size() && ++*cells[i] == k) *cells[i++] = 0;
    if (i < cells.size()) continue;
    size_t j = 0;
    while (j < bits.size() && ++*bits[j] == 2) *bits[j++] = 0;
    if (j == bits.size()) return false;
  }
}

// --- grounding cross-checks -----------------------------------------------------

// the propositional assignment a finite model induces on the grounded variables
inline std::vector<int8_t> assignment_from_model(const GroundProblem& gp,
                                                 const Signature& sig,
                                                 const FiniteModel& m) {
  std::vector<int8_t> vals(gp.num_vars + 1, -1);
  for (uint32_t c = 0; c < sig.num_constants(); ++c)
    vals[gp.const_var(c, m.const_val[c])] = 1;
  for (uint32_t f = 0; f < sig.num_functions(); ++f)
    for (uint64_t flat = 0; flat < m.func[f].size(); ++flat)
      vals[gp.func_var(f, flat, m.func[f][flat])] = 1;
  for (uint32_t p = 0; p < sig.num_predicates(); ++p)
    for (uint64_t flat = 0; flat < m.pred[p].size(); ++flat)
      if (m.pred[p][flat]) vals[gp.pred_var(p, flat)] = 1;
  return vals;
}

inline bool ground_satisfied(const GroundProblem& gp,
                             const std::vector<int8_t>& vals) {
  for (const auto& cl : gp.clauses) {
    bool sat = false;
    for (int32_t lit : cl)
      sat = sat || (lit > 0 ? vals[lit] > 0 : vals[-lit] < 0);
    if (!sat) return false;
  }
  return true;
}

// --- LADR reader ------------------------------------------------------------------
//
// Just enough syntax for the emitter's output and the reference listings:
// comment lines, assumption/goal lists, clauses "A & B -> H." and facts "H.",
// goals "exists x ... (A & B)." Identifiers starting with u-z are variables.

struct LadrTerm {
  std::string name;
  bool is_var = false;
  std::vector<LadrTerm> args;
};

struct LadrAtom {
  std::string pred;
  std::vector<LadrTerm> args;
};

struct LadrClause {
  std::vector<LadrAtom> body;
  std::optional<LadrAtom> head;
};

struct LadrDoc {
  std::vector<LadrClause> assumptions;
  std::vector<LadrAtom> goal;
  std::vector<std::string> comments;
};

namespace detail {

struct LadrCursor {
  std::string_view s;
  size_t i = 0;
  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) { ++i; return true; }
    return false;
  }
  std::string ident() {
    skip_ws();
    size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) ||
                            s[i] == '_'))
      ++i;
    if (i == start)
      throw Error(ErrorKind::Parse, "expected identifier in clause text");
    return std::string(s.substr(start, i - start));
  }
};

inline LadrTerm parse_ladr_term(LadrCursor& c) {
  LadrTerm t;
  t.name = c.ident();
  t.is_var = t.name[0] >= 'u' && t.name[0] <= 'z';
  if (c.eat('(')) {
    t.is_var = false;
    do t.args.push_back(parse_ladr_term(c));
    while (c.eat(','));
    if (!c.eat(')')) throw Error(ErrorKind::Parse, "expected ')' in term");
  }
  return t;
}

inline LadrAtom parse_ladr_atom(LadrCursor& c) {
  LadrAtom a;
  a.pred = c.ident();
  if (c.eat('(')) {
    do a.args.push_back(parse_ladr_term(c));
    while (c.eat(','));
    if (!c.eat(')')) throw Error(ErrorKind::Parse, "expected ')' in atom");
  }
  return a;
}

inline std::vector<LadrAtom> parse_conjunction(std::string_view text) {
  // strip one pair of wrapping parentheses if it spans the whole conjunction
  auto trim = [](std::string_view v) {
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
    return v;
  };
  text = trim(text);
  if (!text.empty() && text.front() == '(') {
    int depth = 0;
    bool whole = true;
    for (size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')') {
        --depth;
        if (depth == 0 && i + 1 < text.size()) { whole = false; break; }
      }
    }
    if (whole) text = trim(text.substr(1, text.size() - 2));
  }
  std::vector<LadrAtom> out;
  size_t start = 0;
  int depth = 0;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '(') ++depth;
    if (i < text.size() && text[i] == ')') --depth;
    if (i == text.size() || (depth == 0 && text[i] == '&')) {
      LadrCursor c{text.substr(start, i - start), 0};
      out.push_back(parse_ladr_atom(c));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace detail

inline LadrClause parse_ladr_clause(std::string_view line) {
  size_t dot = line.rfind('.');
  if (dot == std::string_view::npos)
    throw Error(ErrorKind::Parse, "clause line without trailing period");
  line = line.substr(0, dot);
  LadrClause cl;
  size_t arrow = line.find("->");
  if (arrow == std::string_view::npos) {
    detail::LadrCursor c{line, 0};
    cl.head = detail::parse_ladr_atom(c);
  } else {
    cl.body = detail::parse_conjunction(line.substr(0, arrow));
    detail::LadrCursor c{line.substr(arrow + 2), 0};
    cl.head = detail::parse_ladr_atom(c);
  }
  return cl;
}

inline LadrDoc parse_ladr(const std::string& text) {
  LadrDoc doc;
  enum { Outside, Assumptions, Goals } where = Outside;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    if (line.rfind("% ", 0) == 0 || line == "%") {
      doc.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    if (line == "formulas(assumptions).") { where = Assumptions; continue; }
    if (line == "formulas(goals).") { where = Goals; continue; }
    if (line == "end_of_list.") { where = Outside; continue; }
    if (where == Assumptions) {
      doc.assumptions.push_back(parse_ladr_clause(line));
    } else if (where == Goals) {
      std::string_view v = line;
      while (v.rfind("exists ", 0) == 0) {
        v.remove_prefix(7);
        detail::LadrCursor c{v, 0};
        c.ident();
        v.remove_prefix(c.i);
        while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
      }
      size_t dot = v.rfind('.');
      if (dot != std::string_view::npos) v = v.substr(0, dot);
      doc.goal = detail::parse_conjunction(v);
    } else {
      throw Error(ErrorKind::Parse, "clause text outside any list: " + line);
    }
  }
  return doc;
}

namespace detail {

inline void render_term(const LadrTerm& t,
                        std::map<std::string, uint32_t>& vars,
                        std::string& out) {
  if (t.is_var) {
    auto [it, fresh] = vars.emplace(t.name, static_cast<uint32_t>(vars.size()));
    out += "V" + std::to_string(it->second);
    return;
  }
  out += t.name;
  if (!t.args.empty()) {
    out += '(';
    for (size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ',';
      render_term(t.args[i], vars, out);
    }
    out += ')';
  }
}

inline void render_atom(const LadrAtom& a,
                        std::map<std::string, uint32_t>& vars,
                        std::string& out) {
  out += a.pred;
  if (!a.args.empty()) {
    out += '(';
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ',';
      render_term(a.args[i], vars, out);
    }
    out += ')';
  }
}

}  // namespace detail

// Body order and variable names are irrelevant to clause identity, so the
// canonical form is the least rendering over body permutations with variables
// renamed by first occurrence.
inline std::string canonical_clause(const LadrClause& cl) {
  std::vector<size_t> order(cl.body.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::string best;
  std::sort(order.begin(), order.end());
  do {
    std::map<std::string, uint32_t> vars;
    std::string s;
    for (size_t i = 0; i < order.size(); ++i) {
      if (i) s += " & ";
      detail::render_atom(cl.body[order[i]], vars, s);
    }
    if (!cl.body.empty()) s += " -> ";
    if (cl.head) detail::render_atom(*cl.head, vars, s);
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

inline std::vector<std::string> canonical_clause_set(
    const std::vector<LadrClause>& cls) {
  std::vector<std::string> out;
  out.reserve(cls.size());
  for (const LadrClause& c : cls) out.push_back(canonical_clause(c));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string canonical_goal(const std::vector<LadrAtom>& goal) {
  LadrClause as_clause;
  as_clause.body = goal;
  return canonical_clause(as_clause);
}

// --- subprocess runner ---------------------------------------------------------

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::string& path) {
  std::string data;
  if (FILE* f = std::fopen(path.c_str(), "rb")) {
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) data.append(buf, n);
    std::fclose(f);
  }
  return data;
}

inline void spit(const std::string& path, const std::string& data) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw Error(ErrorKind::Internal, "cannot write " + path);
  std::fwrite(data.data(), 1, data.size(), f);
  std::fclose(f);
}

inline std::string temp_path(const std::string& hint) {
  static int counter = 0;
  return "/tmp/treecert_test_" + std::to_string(getpid()) + "_" +
         std::to_string(counter++) + "_" + hint;
}

// args is the shell-quoted tail of the command line; env entries are NAME=VALUE
inline CliResult run_cli(const std::string& args,
                         const std::vector<std::string>& env = {}) {
  std::string out_file = temp_path("out"), err_file = temp_path("err");
  std::string cmd;
  for (const std::string& e : env) cmd += e + " ";
  cmd += std::string(TREECERT_BIN) + " " + args + " > " + out_file + " 2> " +
         err_file;
  int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  std::remove(out_file.c_str());
  std::remove(err_file.c_str());
  return r;
}

}  // namespace treecert::test
