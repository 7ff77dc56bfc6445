#include "treecert/automata.hpp"

#include <algorithm>

namespace treecert {

void TreeAutomaton::mark_final(uint32_t q) {
  if (q >= states_.size())
    throw Error(ErrorKind::UndeclaredSymbol, "final state id out of range");
  if (final_mask_.size() < states_.size()) final_mask_.resize(states_.size(), 0);
  if (final_mask_[q]) return;
  final_mask_[q] = 1;
  finals_.push_back(q);
}

void TreeAutomaton::add_rule(uint32_t symbol, std::vector<uint32_t> lhs, uint32_t rhs) {
  if (rhs >= states_.size())
    throw Error(ErrorKind::UndeclaredSymbol, "rule target state out of range");
  for (uint32_t q : lhs)
    if (q >= states_.size())
      throw Error(ErrorKind::UndeclaredSymbol, "rule source state out of range");
  auto& bucket = by_symbol_[symbol];
  for (uint32_t ri : bucket) {
    const AutomatonRule& r = rules_[ri];
    if (r.rhs == rhs && r.lhs == lhs) return;  // already present
  }
  bucket.push_back(static_cast<uint32_t>(rules_.size()));
  rules_.push_back(AutomatonRule{symbol, std::move(lhs), rhs});
}

std::span<const uint32_t> TreeAutomaton::rules_for(uint32_t symbol) const {
  auto it = by_symbol_.find(symbol);
  if (it == by_symbol_.end()) return {};
  return it->second;
}

namespace {

std::vector<uint8_t> reach_mask(const TreeAutomaton& a, const Tree& t) {
  std::vector<std::vector<uint8_t>> child(t.children.size());
  for (size_t i = 0; i < t.children.size(); ++i) child[i] = reach_mask(a, t.children[i]);
  std::vector<uint8_t> mask(a.num_states(), 0);
  for (uint32_t ri : a.rules_for(t.label)) {
    const AutomatonRule& r = a.rules()[ri];
    if (r.lhs.size() != t.children.size()) continue;
    bool ok = true;
    for (size_t i = 0; i < r.lhs.size() && ok; ++i) ok = child[i][r.lhs[i]];
    if (ok) mask[r.rhs] = 1;
  }
  return mask;
}

}  // namespace

std::vector<uint32_t> states_reaching(const TreeAutomaton& a, const Tree& t) {
  std::vector<uint8_t> mask = reach_mask(a, t);
  std::vector<uint32_t> out;
  for (uint32_t q = 0; q < mask.size(); ++q)
    if (mask[q]) out.push_back(q);
  return out;
}

bool accepts(const TreeAutomaton& a, const Tree& t) {
  std::vector<uint8_t> mask = reach_mask(a, t);
  for (uint32_t q : a.finals())
    if (mask[q]) return true;
  return false;
}

bool language_empty(const TreeAutomaton& a) {
  std::vector<uint8_t> reach(a.num_states(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const AutomatonRule& r : a.rules()) {
      if (reach[r.rhs]) continue;
      bool ok = true;
      for (uint32_t q : r.lhs)
        if (!reach[q]) {
          ok = false;
          break;
        }
      if (ok) {
        reach[r.rhs] = 1;
        changed = true;
      }
    }
  }
  for (uint32_t q : a.finals())
    if (reach[q]) return false;
  return true;
}

namespace {

std::string subset_name(const TreeAutomaton& a, uint64_t mask) {
  std::string s = "{";
  bool first = true;
  for (uint32_t q = 0; q < a.num_states(); ++q) {
    if (!(mask >> q & 1)) continue;
    if (!first) s += ',';
    s += a.state_name(q);
    first = false;
  }
  s += '}';
  return s;
}

bool next_tuple(std::vector<uint32_t>& t, uint32_t base) {
  for (size_t i = 0; i < t.size(); ++i) {
    if (++t[i] < base) return true;
    t[i] = 0;
  }
  return false;
}

uint64_t cell_count(uint64_t states, uint32_t arity) {
  uint64_t n = 1;
  while (arity--) n *= states;
  return n;
}

}  // namespace

TreeAutomaton determinize(const TreeAutomaton& a, const RankedAlphabet& alpha) {
  if (a.num_states() > 64)
    throw Error(ErrorKind::ResourceLimit, "subset construction limited to 64 states");

  // Fixpoint over reachable subsets, seeded with the empty (sink) subset.
  std::vector<uint64_t> subsets{0};
  std::unordered_map<uint64_t, uint32_t> index{{0, 0}};
  auto note = [&](uint64_t mask) {
    if (index.emplace(mask, static_cast<uint32_t>(subsets.size())).second)
      subsets.push_back(mask);
  };

  auto step = [&](uint32_t symbol, std::span<const uint64_t> args) {
    uint64_t out = 0;
    for (uint32_t ri : a.rules_for(symbol)) {
      const AutomatonRule& r = a.rules()[ri];
      if (r.lhs.size() != args.size()) continue;
      bool ok = true;
      for (size_t i = 0; i < args.size() && ok; ++i) ok = args[i] >> r.lhs[i] & 1;
      if (ok) out |= 1ull << r.rhs;
    }
    return out;
  };

  bool grew = true;
  while (grew) {
    size_t known = subsets.size();
    for (uint32_t f = 0; f < alpha.size(); ++f) {
      uint32_t p = alpha.arity(f);
      std::vector<uint32_t> tup(p, 0);
      std::vector<uint64_t> args(p);
      do {
        for (uint32_t i = 0; i < p; ++i) args[i] = subsets[tup[i]];
        note(step(f, args));
      } while (next_tuple(tup, static_cast<uint32_t>(known)));
    }
    grew = subsets.size() > known;
  }

  uint64_t rule_estimate = 0;
  for (uint32_t f = 0; f < alpha.size(); ++f)
    rule_estimate += cell_count(subsets.size(), alpha.arity(f));
  if (rule_estimate > 4'000'000)
    throw Error(ErrorKind::ResourceLimit, "determinized automaton would be too large");

  TreeAutomaton out;
  for (uint64_t mask : subsets) out.add_state(subset_name(a, mask));
  for (uint32_t i = 0; i < subsets.size(); ++i) {
    for (uint32_t q : a.finals())
      if (subsets[i] >> q & 1) {
        out.mark_final(i);
        break;
      }
  }
  for (uint32_t f = 0; f < alpha.size(); ++f) {
    uint32_t p = alpha.arity(f);
    std::vector<uint32_t> tup(p, 0);
    std::vector<uint64_t> args(p);
    do {
      for (uint32_t i = 0; i < p; ++i) args[i] = subsets[tup[i]];
      uint64_t res = step(f, args);
      out.add_rule(f, std::vector<uint32_t>(tup.begin(), tup.end()), index.at(res));
    } while (next_tuple(tup, static_cast<uint32_t>(subsets.size())));
  }
  return out;
}

bool is_deterministic_complete(const TreeAutomaton& a, const RankedAlphabet& alpha) {
  for (uint32_t f = 0; f < alpha.size(); ++f) {
    uint64_t want = cell_count(a.num_states(), alpha.arity(f));
    auto rules = a.rules_for(f);
    if (rules.size() != want) return false;
    // Distinct stored rules with equal (symbol, lhs) would differ in rhs.
    std::vector<std::vector<uint32_t>> seen;
    for (uint32_t ri : rules) seen.push_back(a.rules()[ri].lhs);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  }
  return true;
}

uint32_t TreeTransducer::pair_symbol(uint32_t f1, uint32_t f2) {
  if (base_.arity(f1) != base_.arity(f2))
    throw Error(ErrorKind::ArityMismatch,
                "pair symbol (" + base_.name(f1) + "," + base_.name(f2) +
                    ") mixes arities");
  uint64_t key = static_cast<uint64_t>(f1) << 32 | f2;
  auto it = pair_ids_.find(key);
  if (it != pair_ids_.end()) return it->second;
  uint32_t parts[2] = {f1, f2};
  uint32_t id = pairs_.add(tuple_symbol_name(parts, base_), base_.arity(f1));
  pair_ids_.emplace(key, id);
  comp_.emplace_back(f1, f2);
  return id;
}

std::optional<uint32_t> TreeTransducer::find_pair(uint32_t f1, uint32_t f2) const {
  auto it = pair_ids_.find(static_cast<uint64_t>(f1) << 32 | f2);
  if (it == pair_ids_.end()) return std::nullopt;
  return it->second;
}

std::pair<uint32_t, uint32_t> TreeTransducer::components(uint32_t pair_sym) const {
  if (pair_sym >= comp_.size())
    throw Error(ErrorKind::UndeclaredSymbol, "pair symbol id out of range");
  return comp_[pair_sym];
}

namespace {

bool product_mask(const TreeTransducer& d, const Tree& t1, const Tree& t2,
                  std::vector<uint8_t>& mask) {
  mask.assign(d.machine().num_states(), 0);
  if (t1.children.size() != t2.children.size()) return false;
  auto sym = d.find_pair(t1.label, t2.label);
  if (!sym) return true;  // no rules can fire; empty mask
  std::vector<std::vector<uint8_t>> child(t1.children.size());
  for (size_t i = 0; i < t1.children.size(); ++i)
    if (!product_mask(d, t1.children[i], t2.children[i], child[i])) return false;
  const TreeAutomaton& m = d.machine();
  for (uint32_t ri : m.rules_for(*sym)) {
    const AutomatonRule& r = m.rules()[ri];
    if (r.lhs.size() != t1.children.size()) continue;
    bool ok = true;
    for (size_t i = 0; i < r.lhs.size() && ok; ++i) ok = child[i][r.lhs[i]];
    if (ok) mask[r.rhs] = 1;
  }
  return true;
}

}  // namespace

bool TreeTransducer::relates(const Tree& t1, const Tree& t2) const {
  std::vector<uint8_t> mask;
  if (!product_mask(*this, t1, t2, mask)) return false;  // shape mismatch
  for (uint32_t q : m_.finals())
    if (mask[q]) return true;
  return false;
}

}  // namespace treecert
