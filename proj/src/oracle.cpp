#include "treecert/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <utility>
#include <vector>

namespace treecert {

namespace {

// --- one-step images under a transducer --------------------------------------

// Machine rules grouped by the first component of their pair symbol.
struct PairRuleIndex {
  std::unordered_map<uint32_t, std::vector<const AutomatonRule*>> by_first;

  explicit PairRuleIndex(const TreeTransducer& d) {
    for (const AutomatonRule& r : d.machine().rules())
      by_first[d.components(r.symbol).first].push_back(&r);
  }
};

using TreeSet = std::unordered_set<Tree, TreeHasher<SymbolLabelTag>>;

// For the subtree rooted here: per machine state, the distinct outputs of all
// partial product runs ending in that state.
std::vector<TreeSet> output_runs(const TreeTransducer& d, const PairRuleIndex& ix,
                                 const Tree& t) {
  std::vector<TreeSet> out(d.machine().num_states());
  std::vector<std::vector<TreeSet>> kids;
  kids.reserve(t.children.size());
  for (const Tree& c : t.children) kids.push_back(output_runs(d, ix, c));

  auto it = ix.by_first.find(t.label);
  if (it == ix.by_first.end()) return out;
  for (const AutomatonRule* r : it->second) {
    uint32_t g = d.components(r->symbol).second;
    if (r->lhs.empty()) {
      out[r->rhs].insert(Tree(g));
      continue;
    }
    // one output per combination of child outputs at the required states
    std::vector<const TreeSet*> pool(r->lhs.size());
    bool feasible = true;
    for (size_t i = 0; i < r->lhs.size(); ++i) {
      pool[i] = &kids[i][r->lhs[i]];
      feasible = feasible && !pool[i]->empty();
    }
    if (!feasible) continue;
    std::vector<TreeSet::const_iterator> pos(pool.size());
    for (size_t i = 0; i < pool.size(); ++i) pos[i] = pool[i]->begin();
    for (;;) {
      Tree built(g);
      built.children.reserve(pool.size());
      for (const auto& p : pos) built.children.push_back(*p);
      out[r->rhs].insert(std::move(built));
      size_t i = pool.size();
      bool more = false;
      while (i-- > 0) {
        if (++pos[i] != pool[i]->end()) {
          more = true;
          break;
        }
        pos[i] = pool[i]->begin();
      }
      if (!more) break;
    }
  }
  return out;
}

template <typename Tag>
std::vector<BasicTree<Tag>> sorted_unique(
    std::unordered_set<BasicTree<Tag>, TreeHasher<Tag>>&& set) {
  std::vector<BasicTree<Tag>> out;
  out.reserve(set.size());
  for (auto it = set.begin(); it != set.end();)
    out.push_back(std::move(set.extract(it++).value()));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return tree_compare(a, b) < 0;
  });
  return out;
}

}  // namespace

std::vector<Tree> successors_rtmc(const TreeTransducer& d, const Tree& t) {
  PairRuleIndex ix(d);
  std::vector<TreeSet> runs = output_runs(d, ix, t);
  TreeSet all;
  for (uint32_t q : d.machine().finals())
    for (const Tree& o : runs[q]) all.insert(o);
  return sorted_unique<SymbolLabelTag>(std::move(all));
}

// --- one-step term rewriting --------------------------------------------------

namespace {

bool match(const Term& pat, const Term& sub, std::vector<const Term*>& bind) {
  switch (pat.kind) {
    case Term::Kind::Var:
      if (bind[pat.sym]) return *bind[pat.sym] == sub;
      bind[pat.sym] = &sub;
      return true;
    case Term::Kind::Const:
      return sub.kind == Term::Kind::Const && sub.sym == pat.sym;
    case Term::Kind::App: {
      if (sub.kind != Term::Kind::App || sub.sym != pat.sym ||
          sub.args.size() != pat.args.size())
        return false;
      for (size_t i = 0; i < pat.args.size(); ++i)
        if (!match(pat.args[i], sub.args[i], bind)) return false;
      return true;
    }
  }
  return false;
}

Term substitute(const Term& rhs, const std::vector<const Term*>& bind) {
  switch (rhs.kind) {
    case Term::Kind::Var:
      if (!bind[rhs.sym])
        throw Error(ErrorKind::UnassignedVariable,
                    "rewrite rule right side uses an unbound variable");
      return *bind[rhs.sym];
    case Term::Kind::Const:
      return rhs;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(rhs.args.size());
      for (const Term& a : rhs.args) args.push_back(substitute(a, bind));
      return Term::app(rhs.sym, std::move(args));
    }
  }
  return rhs;
}

void rewrites_of(const Term& t, const std::vector<TermRule>& rules,
                 std::vector<Term>& out) {
  for (const TermRule& r : rules) {
    std::vector<const Term*> bind(r.num_vars, nullptr);
    if (match(r.lhs, t, bind)) out.push_back(substitute(r.rhs, bind));
  }
  if (t.kind != Term::Kind::App) return;
  for (size_t i = 0; i < t.args.size(); ++i) {
    std::vector<Term> sub;
    rewrites_of(t.args[i], rules, sub);
    for (Term& s : sub) {
      Term copy = t;
      copy.args[i] = std::move(s);
      out.push_back(std::move(copy));
    }
  }
}

}  // namespace

PtsStepper::PtsStepper(const RewriteSystem& sys) {
  vocab_ = declare_state_vocab(sig_, sys.states());
  rules_ = term_rules_of_system(sys, vocab_);
}

std::vector<StateTree> PtsStepper::successors(const StateTree& t) const {
  std::vector<Term> raw;
  rewrites_of(term_of_state_tree(t, vocab_), rules_, raw);
  std::unordered_set<StateTree, TreeHasher<StateLabelTag>> set;
  for (const Term& tm : raw) set.insert(state_tree_of_term(tm, vocab_));
  return sorted_unique<StateLabelTag>(std::move(set));
}

std::vector<StateTree> successors_pts(const RewriteSystem& sys,
                                      const StateTree& t) {
  return PtsStepper(sys).successors(t);
}

// --- initial-tree enumeration ---------------------------------------------------

namespace {

// Bare shapes: label = child count; one shape per structure.
using Shape = BasicTree<struct ShapeLabelTag>;

void shapes_up_to(const std::vector<uint32_t>& arities, uint32_t max_nodes,
                  uint64_t cap, std::vector<std::vector<Shape>>& by_size) {
  by_size.assign(max_nodes + 1, {});
  uint64_t total = 0;
  for (uint32_t n = 1; n <= max_nodes; ++n) {
    for (uint32_t p : arities) {
      if (p == 0) {
        if (n == 1) by_size[n].push_back(Shape(0));
        continue;
      }
      if (n - 1 < p) continue;
      // enumerate compositions of n-1 into p positive parts
      std::vector<uint32_t> sizes(p, 1);
      uint32_t rest = n - 1 - p;
      std::function<void(uint32_t, uint32_t)> comp = [&](uint32_t i,
                                                         uint32_t left) {
        if (i + 1 == p) {
          sizes[i] = 1 + left;
          // cross product of child shapes of these sizes
          std::vector<uint32_t> idx(p, 0);
          for (uint32_t j = 0; j < p; ++j)
            if (by_size[sizes[j]].empty()) return;
          for (;;) {
            Shape s(p);
            s.children.reserve(p);
            for (uint32_t j = 0; j < p; ++j)
              s.children.push_back(by_size[sizes[j]][idx[j]]);
            by_size[n].push_back(std::move(s));
            if (++total > cap)
              throw Error(ErrorKind::ResourceLimit,
                          "too many tree shapes within the size bound");
            uint32_t j = p;
            bool more = false;
            while (j-- > 0) {
              if (++idx[j] < by_size[sizes[j]].size()) {
                more = true;
                break;
              }
              idx[j] = 0;
            }
            if (!more) break;
          }
          return;
        }
        for (uint32_t take = 0; take <= left; ++take) {
          sizes[i] = 1 + take;
          comp(i + 1, left - take);
        }
      };
      comp(0, rest);
    }
  }
}

// Per shape node and automaton state, the distinct accepted labelings of that
// subtree. Duplicates appear when several runs share a labeling.
template <typename Tag>
using LabelBuckets = std::vector<std::unordered_set<BasicTree<Tag>, TreeHasher<Tag>>>;

}  // namespace

std::vector<Tree> initial_trees_rtmc(const RtmcProblem& p,
                                     const ReachOptions& opts) {
  if (opts.size_bound < 1)
    throw Error(ErrorKind::InputError, "size bound must be at least 1");
  std::vector<uint32_t> arities;
  for (uint32_t s = 0; s < p.alphabet.size(); ++s) {
    uint32_t a = p.alphabet.arity(s);
    if (std::find(arities.begin(), arities.end(), a) == arities.end())
      arities.push_back(a);
  }
  std::sort(arities.begin(), arities.end());
  std::vector<std::vector<Shape>> by_size;
  shapes_up_to(arities, opts.size_bound, opts.max_visited, by_size);

  const TreeAutomaton& a = p.init;
  uint64_t stored = 0;
  auto bump = [&](uint64_t n) {
    stored += n;
    if (stored > opts.max_visited)
      throw Error(ErrorKind::ResourceLimit,
                  "too many accepted trees within the size bound");
  };

  std::function<LabelBuckets<SymbolLabelTag>(const Shape&)> run =
      [&](const Shape& sh) {
        LabelBuckets<SymbolLabelTag> out(a.num_states());
        std::vector<LabelBuckets<SymbolLabelTag>> kids;
        kids.reserve(sh.children.size());
        for (const Shape& c : sh.children) kids.push_back(run(c));
        for (uint32_t s : p.alphabet.symbols_of_arity(sh.label)) {
          for (uint32_t ri : a.rules_for(s)) {
            const AutomatonRule& r = a.rules()[ri];
            if (r.lhs.empty()) {
              if (out[r.rhs].insert(Tree(s)).second) bump(1);
              continue;
            }
            std::vector<const std::unordered_set<Tree, TreeHasher<SymbolLabelTag>>*>
                pool(r.lhs.size());
            bool ok = true;
            for (size_t i = 0; i < r.lhs.size(); ++i) {
              pool[i] = &kids[i][r.lhs[i]];
              ok = ok && !pool[i]->empty();
            }
            if (!ok) continue;
            std::vector<std::unordered_set<Tree, TreeHasher<SymbolLabelTag>>::
                            const_iterator>
                pos(pool.size());
            for (size_t i = 0; i < pool.size(); ++i) pos[i] = pool[i]->begin();
            for (;;) {
              Tree built(s);
              built.children.reserve(pool.size());
              for (const auto& it : pos) built.children.push_back(*it);
              if (out[r.rhs].insert(std::move(built)).second) bump(1);
              size_t i = pool.size();
              bool more = false;
              while (i-- > 0) {
                if (++pos[i] != pool[i]->end()) {
                  more = true;
                  break;
                }
                pos[i] = pool[i]->begin();
              }
              if (!more) break;
            }
          }
        }
        return out;
      };

  std::unordered_set<Tree, TreeHasher<SymbolLabelTag>> accepted;
  for (uint32_t n = 1; n <= opts.size_bound; ++n)
    for (const Shape& sh : by_size[n]) {
      LabelBuckets<SymbolLabelTag> buckets = run(sh);
      for (uint32_t q : a.finals())
        for (const Tree& t : buckets[q]) accepted.insert(t);
    }
  return sorted_unique<SymbolLabelTag>(std::move(accepted));
}

std::vector<StateTree> initial_trees_pts(const PtsProblem& p,
                                         const ReachOptions& opts) {
  if (opts.size_bound < 1)
    throw Error(ErrorKind::InputError, "size bound must be at least 1");
  // configurations are complete binary trees: nodes have 0 or 2 children
  std::vector<std::vector<Shape>> by_size;
  shapes_up_to({0, 2}, opts.size_bound, opts.max_visited, by_size);

  const TreeAutomaton& a = p.init;
  // automaton states a lone e can reach (a leaf q reads as f_q(e,e))
  std::vector<uint8_t> e_reaches(a.num_states(), 0);
  for (const AutomatonRule& r : a.rules())
    if (p.fq.arity(r.symbol) == 0) e_reaches[r.rhs] = 1;

  uint64_t stored = 0;
  auto bump = [&](uint64_t n) {
    stored += n;
    if (stored > opts.max_visited)
      throw Error(ErrorKind::ResourceLimit,
                  "too many accepted trees within the size bound");
  };

  std::function<LabelBuckets<StateLabelTag>(const Shape&)> run =
      [&](const Shape& sh) {
        LabelBuckets<StateLabelTag> out(a.num_states());
        std::vector<LabelBuckets<StateLabelTag>> kids;
        for (const Shape& c : sh.children) kids.push_back(run(c));
        for (uint32_t q = 0; q < p.system.num_states(); ++q) {
          for (uint32_t ri : a.rules_for(fq_symbol_of_state(q))) {
            const AutomatonRule& r = a.rules()[ri];
            if (sh.label == 0) {
              if (e_reaches[r.lhs[0]] && e_reaches[r.lhs[1]])
                if (out[r.rhs].insert(StateTree(q)).second) bump(1);
              continue;
            }
            for (const StateTree& t1 : kids[0][r.lhs[0]])
              for (const StateTree& t2 : kids[1][r.lhs[1]]) {
                StateTree built(q, {t1, t2});
                if (out[r.rhs].insert(std::move(built)).second) bump(1);
              }
          }
        }
        return out;
      };

  std::unordered_set<StateTree, TreeHasher<StateLabelTag>> accepted;
  for (uint32_t n = 1; n <= opts.size_bound; ++n)
    for (const Shape& sh : by_size[n]) {
      LabelBuckets<StateLabelTag> buckets = run(sh);
      for (uint32_t q : a.finals())
        for (const StateTree& t : buckets[q]) accepted.insert(t);
    }
  return sorted_unique<StateLabelTag>(std::move(accepted));
}

// --- bounded forward closure -----------------------------------------------------

namespace {

// Level-synchronous closure. Expansion of a level can run in parallel; the
// visited set is only touched serially, in level order, so discovery order,
// parents and traces never depend on scheduling.
template <typename Tag, typename Expand, typename Bad>
std::optional<uint32_t> bfs_run(BasicReachSet<Tag>& set,
                                std::vector<BasicTree<Tag>> seeds,
                                Expand expand, Bad bad,
                                const ReachOptions& opts, bool stop_on_bad) {
  std::optional<uint32_t> best;
  auto note_bad = [&](uint32_t i) {
    if (!best || tree_compare(set.tree(i), set.tree(*best)) < 0) best = i;
  };

  std::vector<uint32_t> level;
  for (BasicTree<Tag>& s : seeds) {
    auto [i, fresh] = set.insert(std::move(s), -1);
    if (fresh) level.push_back(i);
  }
  if (set.size() > opts.max_visited)
    throw Error(ErrorKind::ResourceLimit, "visited set exceeded its cap");
  bool hit = false;
  for (uint32_t i : level)
    if (bad(set.tree(i))) {
      note_bad(i);
      hit = true;
    }
  if (hit && stop_on_bad) return best;

  while (!level.empty()) {
    if (opts.cancel && opts.cancel->load(std::memory_order_relaxed))
      return std::nullopt;
    std::vector<std::vector<BasicTree<Tag>>> expanded(level.size());
#ifdef _OPENMP
    if (opts.parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int64_t j = 0; j < static_cast<int64_t>(level.size()); ++j)
        expanded[j] = expand(set.tree(level[j]));
    } else
#endif
    {
      for (size_t j = 0; j < level.size(); ++j)
        expanded[j] = expand(set.tree(level[j]));
    }

    std::vector<uint32_t> next;
    for (size_t j = 0; j < level.size(); ++j)
      for (BasicTree<Tag>& s : expanded[j]) {
        if (!structurally_equivalent(s, set.tree(level[j])))
          throw Error(ErrorKind::Internal,
                      "one-step successor changed the tree shape");
        auto [i, fresh] = set.insert(std::move(s),
                                     static_cast<int32_t>(level[j]));
        if (fresh) {
          next.push_back(i);
          if (set.size() > opts.max_visited)
            throw Error(ErrorKind::ResourceLimit,
                        "visited set exceeded its cap");
        }
      }

    hit = false;
    for (uint32_t i : next)
      if (bad(set.tree(i))) {
        note_bad(i);
        hit = true;
      }
    if (hit && stop_on_bad) return best;
    level = std::move(next);
  }
  return best;
}

}  // namespace

bool tree_unsafe(const RtmcProblem& p, const Tree& t) {
  return accepts(p.unsafe, t);
}

bool tree_unsafe(const PtsProblem& p, const StateTree& t) {
  if (p.unsafe_automaton)
    return accepts(*p.unsafe_automaton, fq_tree_of_state_tree(t));
  for (const StateTree& g : p.unsafe_generators)
    if (embeds(g, t)) return true;
  return false;
}

ReachSet reachable_rtmc(const RtmcProblem& p, const ReachOptions& opts) {
  ReachSet set;
  bfs_run(
      set, initial_trees_rtmc(p, opts),
      [&](const Tree& t) { return successors_rtmc(p.transducer, t); },
      [](const Tree&) { return false; }, opts, false);
  return set;
}

StateReachSet reachable_pts(const PtsProblem& p, const ReachOptions& opts) {
  PtsStepper step(p.system);
  StateReachSet set;
  bfs_run(
      set, initial_trees_pts(p, opts),
      [&](const StateTree& t) { return step.successors(t); },
      [](const StateTree&) { return false; }, opts, false);
  return set;
}

std::optional<std::vector<Tree>> find_unsafe_trace(const RtmcProblem& p,
                                                   const ReachOptions& opts) {
  ReachSet set;
  auto bad = bfs_run(
      set, initial_trees_rtmc(p, opts),
      [&](const Tree& t) { return successors_rtmc(p.transducer, t); },
      [&](const Tree& t) { return tree_unsafe(p, t); }, opts, true);
  if (!bad) return std::nullopt;
  return set.trace(*bad);
}

std::optional<std::vector<StateTree>> find_unsafe_trace(
    const PtsProblem& p, const ReachOptions& opts) {
  PtsStepper step(p.system);
  StateReachSet set;
  auto bad = bfs_run(
      set, initial_trees_pts(p, opts),
      [&](const StateTree& t) { return step.successors(t); },
      [&](const StateTree& t) { return tree_unsafe(p, t); }, opts, true);
  if (!bad) return std::nullopt;
  return set.trace(*bad);
}

// --- trace text -------------------------------------------------------------------

namespace {

template <typename Tag>
std::string format_trace_with(
    const std::vector<BasicTree<Tag>>& tr,
    const std::function<const std::string&(uint32_t)>& namer) {
  std::string out;
  for (size_t i = 0; i < tr.size(); ++i) {
    if (i == 0) out += "INIT ";
    if (i + 1 == tr.size()) out += "UNSAFE ";
    print_tree_to(out, tr[i], namer);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string format_trace(const std::vector<Tree>& tr,
                         const RankedAlphabet& alpha) {
  return format_trace_with<SymbolLabelTag>(
      tr, [&](uint32_t id) -> const std::string& { return alpha.name(id); });
}

std::string format_trace(const std::vector<StateTree>& tr,
                         const SymbolTable& states) {
  return format_trace_with<StateLabelTag>(
      tr, [&](uint32_t id) -> const std::string& { return states.name(id); });
}

}  // namespace treecert
