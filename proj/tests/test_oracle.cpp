#include <set>

#include "doctest.h"
#include "support/helpers.hpp"
#include "treecert/oracle.hpp"

using namespace treecert;
using namespace treecert::test;

namespace {

template <typename Tag>
std::set<std::string> as_texts(const std::vector<BasicTree<Tag>>& ts,
                               const std::function<const std::string&(uint32_t)>& namer) {
  std::set<std::string> out;
  for (const auto& t : ts) out.insert(print_tree(t, namer));
  return out;
}

std::function<const std::string&(uint32_t)> namer_of(const RankedAlphabet& a) {
  return [&a](uint32_t id) -> const std::string& { return a.name(id); };
}

std::function<const std::string&(uint32_t)> namer_of(const SymbolTable& s) {
  return [&s](uint32_t id) -> const std::string& { return s.name(id); };
}

uint32_t count_tokens(const Tree& t, const RankedAlphabet& alpha) {
  uint32_t n = (alpha.name(t.label) == "t" || alpha.name(t.label) == "T") ? 1 : 0;
  for (const Tree& c : t.children) n += count_tokens(c, alpha);
  return n;
}

}  // namespace

TEST_CASE("one-step images agree with enumerate-and-filter") {
  RtmcProblem p = twoway_rtmc();

  auto succ_texts = [&](const char* text) {
    return as_texts(successors_rtmc(p.transducer, rtree(p, text)), namer_of(p.alphabet));
  };
  CHECK(succ_texts("T(n,n)") == std::set<std::string>{"N(t,n)", "N(n,t)"});
  CHECK(succ_texts("N(t,n)") == std::set<std::string>{"T(n,n)"});
  CHECK(succ_texts("n").empty());
  CHECK(succ_texts("t").empty());

  for (const Tree& t : all_trees(p.alphabet, 5)) {
    std::vector<Tree> fast = successors_rtmc(p.transducer, t);
    CHECK(std::is_sorted(fast.begin(), fast.end(), [](const Tree& a, const Tree& b) {
      return tree_compare(a, b) < 0;
    }));
    CHECK(fast == one_step_brute_rtmc(p, t));
  }
}

TEST_CASE("term rewriting steps match tree-level rule application") {
  PtsProblem p = twoway_pts();

  auto succ_texts = [&](const char* text) {
    return as_texts(successors_pts(p.system, stree(p.system, text)),
                    namer_of(p.system.states()));
  };
  CHECK(succ_texts("t(n,n)") == std::set<std::string>{"n(t,n)", "n(n,t)"});
  CHECK(succ_texts("t").empty());
  CHECK(succ_texts("n(t,n)") == std::set<std::string>{"t(n,n)"});

  for (const StateTree& c : all_configs(p.system.num_states(), 5))
    CHECK(successors_pts(p.system, c) == one_step_brute(p.system, c));

  // a second system with three states and leaf rules
  LoadedProblem perc = load_problem_file(corpus_path("percolate_pts.json"));
  for (const StateTree& c : all_configs(perc.pts->system.num_states(), 5))
    CHECK(successors_pts(perc.pts->system, c) == one_step_brute(perc.pts->system, c));

  // the stepper front end is the same function, precompiled
  PtsStepper stepper(p.system);
  for (const StateTree& c : all_configs(p.system.num_states(), 5))
    CHECK(stepper.successors(c) == successors_pts(p.system, c));
}

TEST_CASE("initial trees enumerate accepted shapes in canonical order") {
  RtmcProblem p = twoway_rtmc();
  ReachOptions o;
  o.size_bound = 3;
  std::vector<Tree> init = initial_trees_rtmc(p, o);
  CHECK(as_texts(init, namer_of(p.alphabet)) ==
        std::set<std::string>{"t", "T(n,n)", "N(t,n)", "N(n,t)"});
  CHECK(std::is_sorted(init.begin(), init.end(), [](const Tree& a, const Tree& b) {
    return tree_compare(a, b) < 0;
  }));

  // every accepted tree within the bound appears, none other
  o.size_bound = 7;
  init = initial_trees_rtmc(p, o);
  std::set<std::string> want;
  for (const Tree& t : all_trees(p.alphabet, 7))
    if (accepts(p.init, t)) want.insert(print_tree(t, p.alphabet));
  CHECK(as_texts(init, namer_of(p.alphabet)) == want);
  CHECK(init.size() == 49);

  PtsProblem q = twoway_pts();
  ReachOptions po;
  po.size_bound = 9;
  std::vector<StateTree> pinit = initial_trees_pts(q, po);
  std::set<std::string> pwant;
  uint32_t tok = *q.system.find_state("t");
  for (const StateTree& c : all_configs(2, 9))
    if (count_label(c, tok) == 1)
      pwant.insert(print_tree(c, namer_of(q.system.states())));
  CHECK(as_texts(pinit, namer_of(q.system.states())) == pwant);
  CHECK(pinit.size() == 175);
}

TEST_CASE("bounded closure: frozen sizes, shape preservation, token invariant") {
  RtmcProblem p = twoway_rtmc();

  {
    ReachOptions o;
    o.size_bound = 1;
    ReachSet r = reachable_rtmc(p, o);
    REQUIRE(r.size() == 1);
    CHECK(print_tree(r.tree(0), p.alphabet) == "t");
  }
  {
    ReachOptions o;
    o.size_bound = 3;
    ReachSet r = reachable_rtmc(p, o);
    CHECK(r.size() == 4);  // t plus the three one-token 3-node trees
  }
  {
    ReachOptions o;
    o.size_bound = 7;
    ReachSet r = reachable_rtmc(p, o);
    CHECK(r.size() == 49);
    for (uint32_t i = 0; i < r.size(); ++i) {
      CHECK(count_tokens(r.tree(i), p.alphabet) == 1);
      CHECK(accepts(p.init, r.tree(i)));  // closure adds no new shapes/sets here
      if (r.parent(i) >= 0) CHECK(r.depth(i) == r.depth(r.parent(i)) + 1);
      std::vector<Tree> tr = r.trace(i);
      REQUIRE(!tr.empty());
      CHECK(tr.back() == r.tree(i));
      CHECK(accepts(p.init, tr.front()));
    }
  }
  {  // an empty relation leaves exactly the seeds
    RtmcProblem frozen(p.alphabet);
    frozen.init = p.init;
    frozen.unsafe = p.unsafe;
    frozen.transducer.machine().add_state("q");
    ReachOptions o;
    o.size_bound = 5;
    ReachSet r = reachable_rtmc(frozen, o);
    CHECK(r.size() == initial_trees_rtmc(frozen, o).size());
  }

  PtsProblem q = twoway_pts();
  uint32_t tok = *q.system.find_state("t");
  {
    ReachOptions o;
    o.size_bound = 15;
    StateReachSet r = reachable_pts(q, o);
    CHECK(r.size() == 8788);  // every one-token configuration up to 15 nodes
    for (uint32_t i = 0; i < r.size(); ++i)
      CHECK(count_label(r.tree(i), tok) == 1);
  }

  LoadedProblem perc = load_problem_file(corpus_path("percolate_pts.json"));
  {
    ReachOptions o;
    o.size_bound = 15;
    StateReachSet r = reachable_pts(*perc.pts, o);
    CHECK(r.size() == 7594);
  }

  // the visited cap trips as ResourceLimit
  {
    ReachOptions o;
    o.size_bound = 15;
    o.max_visited = 100;
    CHECK(error_kind_of([&] { reachable_pts(q, o); }) == ErrorKind::ResourceLimit);
  }
}

TEST_CASE("single-source closures follow the published walkthroughs") {
  PtsProblem p = twoway_pts();

  // from t(n,n): the token walks the 3-node shape
  std::set<std::string> seen;
  std::vector<StateTree> frontier = {stree(p.system, "t(n,n)")};
  seen.insert(print_tree(frontier[0], namer_of(p.system.states())));
  while (!frontier.empty()) {
    std::vector<StateTree> next;
    for (const StateTree& c : frontier)
      for (const StateTree& s : successors_pts(p.system, c))
        if (seen.insert(print_tree(s, namer_of(p.system.states()))).second)
          next.push_back(s);
    frontier = std::move(next);
  }
  CHECK(seen == std::set<std::string>{"t(n,n)", "n(t,n)", "n(n,t)"});

  // from a one-token 7-node complete tree: exactly its 7 one-token labelings
  StateTree start = stree(p.system, "t(n(n,n),n(n,n))");
  seen.clear();
  frontier = {start};
  seen.insert(print_tree(start, namer_of(p.system.states())));
  while (!frontier.empty()) {
    std::vector<StateTree> next;
    for (const StateTree& c : frontier)
      for (const StateTree& s : successors_pts(p.system, c))
        if (seen.insert(print_tree(s, namer_of(p.system.states()))).second)
          next.push_back(s);
    frontier = std::move(next);
  }
  CHECK(seen.size() == 7);
  for (const std::string& text : seen) {
    StateTree c = stree(p.system, text);
    CHECK(structurally_equivalent(c, start));
    CHECK(count_label(c, *p.system.find_state("t")) == 1);
  }
}

TEST_CASE("unsafe detection: automaton or embedded generator") {
  RtmcProblem p = twoway_rtmc();
  CHECK(tree_unsafe(p, rtree(p, "T(t,n)")));
  CHECK(!tree_unsafe(p, rtree(p, "T(n,n)")));

  PtsProblem q = twoway_pts();
  CHECK(tree_unsafe(q, stree(q.system, "n(t,t)")));
  CHECK(tree_unsafe(q, stree(q.system, "t(t,n)")));
  CHECK(!tree_unsafe(q, stree(q.system, "t(n,n)")));
  CHECK(!tree_unsafe(q, stree(q.system, "n")));

  // generator list and an equivalent token-counting automaton agree
  PtsProblem aut = twoway_pts();
  aut.unsafe_generators.clear();
  TreeAutomaton& ua = aut.unsafe_automaton.emplace();
  uint32_t c0 = ua.add_state("c0");
  uint32_t c1 = ua.add_state("c1");
  uint32_t c2 = ua.add_state("c2");
  ua.mark_final(c2);
  uint32_t e = aut.fq.id("e"), fn = aut.fq.id("fn"), ft = aut.fq.id("ft");
  ua.add_rule(e, {}, c0);
  uint32_t cs[3] = {c0, c1, c2};
  for (uint32_t i = 0; i < 3; ++i)
    for (uint32_t j = 0; j < 3; ++j) {
      ua.add_rule(fn, {cs[i], cs[j]}, cs[std::min(i + j, 2u)]);
      ua.add_rule(ft, {cs[i], cs[j]}, cs[std::min(i + j + 1, 2u)]);
    }
  for (const StateTree& c : all_configs(2, 7))
    CHECK(tree_unsafe(aut, c) == tree_unsafe(q, c));
}

TEST_CASE("trace search: absent on safe corpus, short witness on the mutant") {
  RtmcProblem p = twoway_rtmc();
  ReachOptions o;
  o.size_bound = 7;
  CHECK(!find_unsafe_trace(p, o).has_value());

  PtsProblem q = twoway_pts();
  ReachOptions po;
  po.size_bound = 15;
  CHECK(!find_unsafe_trace(q, po).has_value());

  {  // token duplication: a two-step witness inside a 3-node tree
    PtsProblem dup = token_duplication_pts();
    ReachOptions d;
    d.size_bound = 3;
    auto trace = find_unsafe_trace(dup, d);
    REQUIRE(trace.has_value());
    CHECK(trace->size() <= 3);  // at most two steps
    CHECK(tree_unsafe(dup, trace->back()));
    CHECK(!tree_unsafe(dup, trace->front()));
    // every hop is a real one-step successor
    for (size_t i = 0; i + 1 < trace->size(); ++i) {
      auto succ = successors_pts(dup.system, (*trace)[i]);
      CHECK(std::find(succ.begin(), succ.end(), (*trace)[i + 1]) != succ.end());
    }
  }
  {  // the duplicating machine relation, frozen witness
    LoadedProblem dup = load_problem_file(corpus_path("duplicating_token_rtmc.json"));
    ReachOptions d;
    d.size_bound = 3;
    auto trace = find_unsafe_trace(*dup.rtmc, d);
    REQUIRE(trace.has_value());
    CHECK(format_trace(*trace, dup.rtmc->alphabet) ==
          "INIT T(n,n)\nUNSAFE T(t,n)\n");
  }
  {  // empty initial language
    PtsProblem none = twoway_pts();
    none.init = TreeAutomaton{};
    ReachOptions d;
    d.size_bound = 7;
    CHECK(!find_unsafe_trace(none, d).has_value());
  }

  // trace text tags both ends
  PtsProblem dup = token_duplication_pts();
  ReachOptions d;
  d.size_bound = 3;
  auto trace = find_unsafe_trace(dup, d);
  REQUIRE(trace.has_value());
  std::string text = format_trace(*trace, dup.system.states());
  CHECK(text.rfind("INIT ", 0) == 0);
  CHECK(contains(text, "\nUNSAFE "));
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        static_cast<long>(trace->size()));
}

TEST_CASE("parallel frontier expansion returns the same sets") {
  PtsProblem q = twoway_pts();
  ReachOptions serial, par;
  serial.size_bound = par.size_bound = 13;
  par.parallel = true;
  StateReachSet a = reachable_pts(q, serial);
  StateReachSet b = reachable_pts(q, par);
  REQUIRE(a.size() == b.size());
  for (uint32_t i = 0; i < a.size(); ++i) {
    auto j = b.find(a.tree(i));
    REQUIRE(j.has_value());
    CHECK(a.depth(i) == b.depth(*j));  // level structure is schedule-independent
  }

  RtmcProblem p = twoway_rtmc();
  ReachOptions rs, rp;
  rs.size_bound = rp.size_bound = 7;
  rp.parallel = true;
  ReachSet c = reachable_rtmc(p, rs);
  ReachSet d = reachable_rtmc(p, rp);
  REQUIRE(c.size() == d.size());
  for (uint32_t i = 0; i < c.size(); ++i) CHECK(d.find(c.tree(i)).has_value());
}
