#include "treecert/sat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "treecert/errors.hpp"

namespace treecert {

namespace {

uint64_t splitmix64(uint64_t& s) {
  uint64_t z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Luby restart sequence: 1 1 2 1 1 2 4 ...
uint64_t luby(uint64_t i) {
  uint64_t k = 1;
  while ((1ull << k) - 1 < i + 1) ++k;
  while ((1ull << (k - 1)) - 1 != i) {
    i -= (1ull << (k - 1)) - 1;
    k = 1;
    while ((1ull << k) - 1 < i + 1) ++k;
  }
  return 1ull << (k - 1);
}

constexpr double kVarDecay = 1.0 / 0.95;
constexpr double kClsDecay = 1.0 / 0.999;
constexpr uint64_t kRestartBase = 128;

}  // namespace

SatSolver::SatSolver(uint32_t num_vars, uint64_t seed) : nvars_(num_vars) {
  watches_.assign(2 * (nvars_ + 1), {});
  assign_.assign(nvars_ + 1, 0);
  level_.assign(nvars_ + 1, 0);
  reason_.assign(nvars_ + 1, -1);
  activity_.assign(nvars_ + 1, 0.0);
  heap_pos_.assign(nvars_ + 1, -1);
  phase_.assign(nvars_ + 1, 0);
  seen_.assign(nvars_ + 1, 0);
  if (seed != 0) {
    uint64_t s = seed;
    for (uint32_t v = 1; v <= nvars_; ++v) phase_[v] = splitmix64(s) & 1;
  }
  trail_.reserve(nvars_);
}

void SatSolver::add_clause(std::span<const int32_t> lits) {
  if (solving_started_)
    throw Error(ErrorKind::Internal, "clauses must be added before solving");
  std::vector<int32_t> c(lits.begin(), lits.end());
  std::sort(c.begin(), c.end(), [](int32_t a, int32_t b) {
    uint32_t va = std::abs(a), vb = std::abs(b);
    return va != vb ? va < vb : a < b;
  });
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i] == -c[i + 1]) return;  // tautology
  for (int32_t l : c)
    if (l == 0 || static_cast<uint32_t>(std::abs(l)) > nvars_)
      throw Error(ErrorKind::Internal, "literal out of range");
  if (c.empty()) {
    trivially_unsat_ = true;
    return;
  }
  if (c.size() == 1) {
    pending_units_.push_back(c[0]);
    return;
  }
  cls_.push_back(Cls{std::move(c), 0.0, false});
  ++num_original_;
  attach(static_cast<uint32_t>(cls_.size() - 1));
}

void SatSolver::attach(uint32_t ci) {
  watches_[widx(cls_[ci].lits[0])].push_back(ci);
  watches_[widx(cls_[ci].lits[1])].push_back(ci);
}

void SatSolver::enqueue(int32_t lit, int32_t reason) {
  uint32_t v = std::abs(lit);
  assign_[v] = lit > 0 ? 1 : -1;
  level_[v] = static_cast<uint32_t>(trail_lim_.size());
  reason_[v] = reason;
  trail_.push_back(lit);
}

int32_t SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    int32_t lit = trail_[qhead_++];
    // clauses watching the falsified literal
    std::vector<uint32_t>& wl = watches_[widx(-lit)];
    size_t keep = 0;
    for (size_t wi = 0; wi < wl.size(); ++wi) {
      uint32_t ci = wl[wi];
      Cls& c = cls_[ci];
      // normalize: the falsified watch sits at position 1
      if (c.lits[0] == -lit) std::swap(c.lits[0], c.lits[1]);
      if (lit_value(c.lits[0]) == 1) {
        wl[keep++] = ci;  // satisfied by the other watch
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (lit_value(c.lits[k]) != -1) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[widx(c.lits[1])].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      // unit or conflicting
      wl[keep++] = ci;
      if (lit_value(c.lits[0]) == -1) {
        for (size_t wj = wi + 1; wj < wl.size(); ++wj) wl[keep++] = wl[wj];
        wl.resize(keep);
        qhead_ = trail_.size();
        return static_cast<int32_t>(ci);
      }
      enqueue(c.lits[0], static_cast<int32_t>(ci));
    }
    wl.resize(keep);
  }
  return -1;
}

void SatSolver::bump_var(uint32_t v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (uint32_t u = 1; u <= nvars_; ++u) activity_[u] *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(static_cast<uint32_t>(heap_pos_[v]));
}

void SatSolver::decay_var_activity() { var_inc_ *= kVarDecay; }

void SatSolver::bump_clause(Cls& c) {
  c.act += cls_inc_;
  if (c.act > 1e20) {
    for (Cls& d : cls_) d.act *= 1e-20;
    cls_inc_ *= 1e-20;
  }
}

void SatSolver::analyze(int32_t confl, std::vector<int32_t>& learned,
                        uint32_t& bt_level) {
  learned.clear();
  learned.push_back(0);  // slot for the asserting literal
  uint32_t counter = 0;
  int32_t lit = 0;
  size_t idx = trail_.size();
  uint32_t cur_level = static_cast<uint32_t>(trail_lim_.size());

  int32_t reason = confl;
  for (;;) {
    Cls& c = cls_[reason];
    if (c.learned) bump_clause(c);
    for (int32_t q : c.lits) {
      if (q == lit) continue;  // the literal being resolved on
      uint32_t v = std::abs(q);
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      bump_var(v);
      if (level_[v] >= cur_level)
        ++counter;
      else
        learned.push_back(q);
    }
    // walk the trail back to the next marked literal
    do {
      lit = trail_[--idx];
    } while (!seen_[std::abs(lit)]);
    seen_[std::abs(lit)] = 0;
    if (--counter == 0) break;
    reason = reason_[std::abs(lit)];
  }
  learned[0] = -lit;

  // self-subsumption: drop literals implied by the rest of the clause
  auto redundant = [&](int32_t q) {
    int32_t r = reason_[std::abs(q)];
    if (r < 0) return false;
    for (int32_t p : cls_[r].lits) {
      uint32_t v = std::abs(p);
      if (p != -q && !seen_[v] && level_[v] != 0) return false;
    }
    return true;
  };
  for (size_t i = 1; i < learned.size(); ++i) seen_[std::abs(learned[i])] = 1;
  std::vector<int32_t> kept;
  kept.reserve(learned.size());
  kept.push_back(learned[0]);
  for (size_t i = 1; i < learned.size(); ++i)
    if (!redundant(learned[i])) kept.push_back(learned[i]);
  // unmark from the untouched original; compacting in place first would leave
  // dropped literals marked and poison the next conflict's counting
  for (size_t i = 1; i < learned.size(); ++i) seen_[std::abs(learned[i])] = 0;
  learned.swap(kept);

  bt_level = 0;
  if (learned.size() > 1) {
    size_t max_i = 1;
    for (size_t i = 2; i < learned.size(); ++i)
      if (level_[std::abs(learned[i])] > level_[std::abs(learned[max_i])])
        max_i = i;
    std::swap(learned[1], learned[max_i]);
    bt_level = level_[std::abs(learned[1])];
  }
}

void SatSolver::backtrack(uint32_t level) {
  if (trail_lim_.size() <= level) return;
  size_t floor = trail_lim_[level];
  for (size_t i = trail_.size(); i-- > floor;) {
    uint32_t v = std::abs(trail_[i]);
    phase_[v] = assign_[v] > 0;
    assign_[v] = 0;
    reason_[v] = -1;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(floor);
  trail_lim_.resize(level);
  qhead_ = floor;
}

// Deterministic order: higher activity first, lower index on ties.
bool SatSolver::heap_less(uint32_t a, uint32_t b) const {
  if (activity_[a] != activity_[b]) return activity_[a] < activity_[b];
  return a > b;
}

void SatSolver::heap_insert(uint32_t v) {
  heap_pos_[v] = static_cast<int32_t>(heap_.size());
  heap_.push_back(v);
  heap_up(static_cast<uint32_t>(heap_.size() - 1));
}

void SatSolver::heap_up(uint32_t pos) {
  uint32_t v = heap_[pos];
  while (pos > 0) {
    uint32_t par = (pos - 1) / 2;
    if (!heap_less(heap_[par], v)) break;
    heap_[pos] = heap_[par];
    heap_pos_[heap_[pos]] = static_cast<int32_t>(pos);
    pos = par;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<int32_t>(pos);
}

void SatSolver::heap_down(uint32_t pos) {
  uint32_t v = heap_[pos];
  for (;;) {
    uint32_t l = 2 * pos + 1, r = l + 1, best = pos;
    heap_[pos] = v;  // candidate in place for comparisons
    if (l < heap_.size() && heap_less(heap_[pos], heap_[l])) best = l;
    if (r < heap_.size() && heap_less(heap_[best], heap_[r])) best = r;
    if (best == pos) break;
    heap_[pos] = heap_[best];
    heap_pos_[heap_[pos]] = static_cast<int32_t>(pos);
    heap_[best] = v;
    pos = best;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<int32_t>(pos);
}

uint32_t SatSolver::heap_pop() {
  uint32_t top = heap_[0];
  heap_pos_[top] = -1;
  heap_[0] = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_pos_[heap_[0]] = 0;
    heap_down(0);
  }
  return top;
}

void SatSolver::reduce_learned() {
  // called at decision level 0 only: no clause is the reason of a decision-
  // level assignment, but level-0 units may still point at learned clauses
  std::vector<uint8_t> locked(cls_.size(), 0);
  for (int32_t l : trail_) {
    int32_t r = reason_[std::abs(l)];
    if (r >= 0) locked[r] = 1;
  }
  std::vector<uint32_t> order;
  for (uint32_t i = num_original_; i < cls_.size(); ++i)
    if (!locked[i]) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    if (cls_[a].act != cls_[b].act) return cls_[a].act < cls_[b].act;
    return a < b;
  });
  std::vector<uint8_t> drop(cls_.size(), 0);
  for (size_t i = 0; i < order.size() / 2; ++i) {
    if (cls_[order[i]].lits.size() <= 2) continue;  // keep short clauses
    drop[order[i]] = 1;
  }
  // compact the database and remap ids
  std::vector<int32_t> remap(cls_.size(), -1);
  size_t w = 0;
  for (size_t i = 0; i < cls_.size(); ++i) {
    if (drop[i]) continue;
    remap[i] = static_cast<int32_t>(w);
    if (w != i) cls_[w] = std::move(cls_[i]);
    ++w;
  }
  cls_.resize(w);
  for (auto& wl : watches_) wl.clear();
  for (uint32_t i = 0; i < cls_.size(); ++i) attach(i);
  for (int32_t l : trail_) {
    int32_t& r = reason_[std::abs(l)];
    if (r >= 0) r = remap[r];
  }
}

SatResult SatSolver::solve(const std::function<bool()>& should_stop) {
  solving_started_ = true;
  if (trivially_unsat_) return SatResult::Unsat;
  for (int32_t u : pending_units_) {
    if (lit_value(u) == -1) return SatResult::Unsat;
    if (lit_value(u) == 0) enqueue(u, -1);
  }
  pending_units_.clear();
  if (propagate() >= 0) return SatResult::Unsat;
  for (uint32_t v = 1; v <= nvars_; ++v)
    if (assign_[v] == 0 && heap_pos_[v] < 0) heap_insert(v);

  uint64_t restart_round = 0;
  uint64_t conflicts_until_restart = kRestartBase * luby(restart_round);
  uint64_t max_learned = std::max<uint64_t>(1000, num_original_ / 3);
  std::vector<int32_t> learned;

  for (;;) {
    int32_t confl = propagate();
    if (confl >= 0) {
      ++conflicts_;
      if (trail_lim_.empty()) return SatResult::Unsat;
      uint32_t bt = 0;
      analyze(confl, learned, bt);
      backtrack(bt);
      if (learned.size() == 1) {
        enqueue(learned[0], -1);
      } else {
        cls_.push_back(Cls{learned, 0.0, true});
        uint32_t ci = static_cast<uint32_t>(cls_.size() - 1);
        bump_clause(cls_[ci]);
        attach(ci);
        enqueue(learned[0], static_cast<int32_t>(ci));
      }
      decay_var_activity();
      cls_inc_ *= kClsDecay;
      if (--conflicts_until_restart == 0) {
        if (should_stop && should_stop()) return SatResult::Stopped;
        backtrack(0);
        ++restart_round;
        conflicts_until_restart = kRestartBase * luby(restart_round);
        if (cls_.size() - num_original_ > max_learned) {
          reduce_learned();
          max_learned = max_learned + max_learned / 10;
        }
      }
      continue;
    }

    // pick the next decision
    uint32_t v = 0;
    while (!heap_.empty()) {
      uint32_t cand = heap_pop();
      if (assign_[cand] == 0) {
        v = cand;
        break;
      }
    }
    if (v == 0) {
      model_.assign(assign_.begin(), assign_.end());
      return SatResult::Sat;
    }
    ++decisions_;
    if ((decisions_ & 255) == 0 && should_stop && should_stop())
      return SatResult::Stopped;
    trail_lim_.push_back(static_cast<uint32_t>(trail_.size()));
    enqueue(phase_[v] ? static_cast<int32_t>(v) : -static_cast<int32_t>(v), -1);
  }
}

}  // namespace treecert
