#include "treecert/pts.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace treecert {

namespace {

void validate_rule(const RewriteSystem& sys, const RuleTree& r) {
  if (r.left >= sys.num_states() || r.right >= sys.num_states())
    throw Error(ErrorKind::UndeclaredSymbol, "rule references unknown state");
  if (r.children.size() > 2)
    throw Error(ErrorKind::NonBinaryRule,
                "rule node with " + std::to_string(r.children.size()) + " children");
  for (const auto& c : r.children) validate_rule(sys, c);
}

}  // namespace

void RewriteSystem::add_rule(RuleTree r) {
  validate_rule(*this, r);
  rules_.push_back(std::move(r));
}

namespace {

void project(const RuleTree& r, StateTree& l, StateTree& rr) {
  l.label = r.left;
  rr.label = r.right;
  l.children.resize(r.children.size());
  rr.children.resize(r.children.size());
  for (size_t i = 0; i < r.children.size(); ++i)
    project(r.children[i], l.children[i], rr.children[i]);
}

}  // namespace

std::pair<StateTree, StateTree> rule_projections(const RuleTree& r) {
  std::pair<StateTree, StateTree> out;
  project(r, out.first, out.second);
  return out;
}

std::vector<std::pair<Term, Term>> term_pairs_of_rule(const RuleTree& r,
                                                      const StateVocab& v) {
  Term e = Term::constant(v.e_const);
  uint32_t fl = v.function_of[r.left], fr = v.function_of[r.right];
  std::vector<std::pair<Term, Term>> out;
  switch (r.children.size()) {
    case 0:
      out.emplace_back(Term::app(fl, {e, e}), Term::app(fr, {e, e}));
      break;
    case 1: {
      auto sub = term_pairs_of_rule(r.children[0], v);
      for (const auto& [l, rr] : sub)
        out.emplace_back(Term::app(fl, {l, e}), Term::app(fr, {rr, e}));
      for (const auto& [l, rr] : sub)
        out.emplace_back(Term::app(fl, {e, l}), Term::app(fr, {e, rr}));
      break;
    }
    case 2: {
      auto s1 = term_pairs_of_rule(r.children[0], v);
      auto s2 = term_pairs_of_rule(r.children[1], v);
      for (const auto& [l1, r1] : s1)
        for (const auto& [l2, r2] : s2)
          out.emplace_back(Term::app(fl, {l1, l2}), Term::app(fr, {r1, r2}));
      break;
    }
    default:
      throw Error(ErrorKind::NonBinaryRule, "rule node with more than two children");
  }
  return out;
}

namespace {

using Position = std::vector<uint32_t>;

void collect_e_positions(const Term& t, uint32_t e_const, Position& here,
                         std::vector<Position>& out) {
  if (t.kind == Term::Kind::Const && t.sym == e_const) {
    out.push_back(here);
    return;
  }
  for (uint32_t i = 0; i < t.args.size(); ++i) {
    here.push_back(i);
    collect_e_positions(t.args[i], e_const, here, out);
    here.pop_back();
  }
}

Term replace_at(const Term& t, uint32_t e_const,
                const std::map<Position, uint32_t>& var_of, Position& here) {
  if (t.kind == Term::Kind::Const && t.sym == e_const)
    return Term::var(var_of.at(here));
  if (t.kind != Term::Kind::App) return t;
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (uint32_t i = 0; i < t.args.size(); ++i) {
    here.push_back(i);
    args.push_back(replace_at(t.args[i], e_const, var_of, here));
    here.pop_back();
  }
  return Term::app(t.sym, std::move(args));
}

}  // namespace

TermRule generalize(const Term& lhs, const Term& rhs, uint32_t e_const) {
  Position here;
  std::vector<Position> lpos, rpos;
  collect_e_positions(lhs, e_const, here, lpos);
  collect_e_positions(rhs, e_const, here, rpos);
  std::sort(lpos.begin(), lpos.end());
  std::sort(rpos.begin(), rpos.end());
  if (lpos != rpos)
    throw Error(ErrorKind::InconsistentPair,
                "the two sides of the pair disagree on e positions");
  std::map<Position, uint32_t> var_of;
  for (uint32_t i = 0; i < lpos.size(); ++i) var_of.emplace(lpos[i], i);
  TermRule out;
  out.lhs = replace_at(lhs, e_const, var_of, here);
  out.rhs = replace_at(rhs, e_const, var_of, here);
  out.num_vars = static_cast<uint32_t>(lpos.size());
  return out;
}

std::vector<TermRule> term_rules_of_system(const RewriteSystem& sys,
                                           const StateVocab& v) {
  std::vector<TermRule> out;
  for (const RuleTree& r : sys.rules())
    for (const auto& [lhs, rhs] : term_pairs_of_rule(r, v))
      out.push_back(generalize(lhs, rhs, v.e_const));
  return out;
}

// --- embedding ---------------------------------------------------------------

namespace {

struct FlatNodes {
  std::vector<uint32_t> label;
  std::vector<std::array<int32_t, 2>> kid;
  std::vector<uint8_t> nkids;

  int32_t flatten(const StateTree& t) {
    int32_t me = static_cast<int32_t>(label.size());
    label.push_back(t.label);
    kid.push_back({-1, -1});
    nkids.push_back(static_cast<uint8_t>(t.children.size()));
    for (size_t i = 0; i < t.children.size() && i < 2; ++i) {
      int32_t c = flatten(t.children[i]);
      kid[me][i] = c;
    }
    return me;
  }
};

struct EmbedDp {
  const FlatNodes& s;
  const FlatNodes& b;
  std::vector<int8_t> rooted_memo, hosted_memo;

  EmbedDp(const FlatNodes& s_, const FlatNodes& b_)
      : s(s_), b(b_),
        rooted_memo(s_.label.size() * b_.label.size(), -1),
        hosted_memo(s_.label.size() * b_.label.size(), -1) {}

  size_t at(int32_t i, int32_t j) const { return size_t(i) * b.label.size() + j; }

  // small subtree i maps with its root exactly onto big node j
  bool rooted(int32_t i, int32_t j) {
    int8_t& m = rooted_memo[at(i, j)];
    if (m >= 0) return m;
    bool ok = s.label[i] == b.label[j];
    if (ok) {
      switch (s.nkids[i]) {
        case 0:
          break;
        case 1:
          ok = (b.kid[j][0] >= 0 && hosted(s.kid[i][0], b.kid[j][0])) ||
               (b.kid[j][1] >= 0 && hosted(s.kid[i][0], b.kid[j][1]));
          break;
        default:
          ok = b.nkids[j] == 2 && hosted(s.kid[i][0], b.kid[j][0]) &&
               hosted(s.kid[i][1], b.kid[j][1]);
      }
    }
    m = ok;
    return ok;
  }

  // small subtree i maps somewhere into the big subtree rooted at j
  bool hosted(int32_t i, int32_t j) {
    int8_t& m = hosted_memo[at(i, j)];
    if (m >= 0) return m;
    bool ok = rooted(i, j);
    for (int c = 0; c < 2 && !ok; ++c)
      if (b.kid[j][c] >= 0) ok = hosted(i, b.kid[j][c]);
    m = ok;
    return ok;
  }
};

}  // namespace

bool embeds(const StateTree& small, const StateTree& big) {
  FlatNodes fs, fb;
  fs.flatten(small);
  fb.flatten(big);
  EmbedDp dp(fs, fb);
  return dp.hosted(0, 0);
}

}  // namespace treecert
