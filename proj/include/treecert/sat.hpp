#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace treecert {

enum class SatResult { Sat, Unsat, Stopped };

// Conflict-driven clause-learning solver. Variables are 1-based; a literal is
// a nonzero int, negative for negation. All clauses must be added before the
// first call to solve. Runs are deterministic for a fixed seed.
class SatSolver {
 public:
  explicit SatSolver(uint32_t num_vars, uint64_t seed = 0);

  void add_clause(std::span<const int32_t> lits);
  void add_clause(std::initializer_list<int32_t> lits) {
    add_clause(std::span<const int32_t>(lits.begin(), lits.size()));
  }

  // Complete within the variable set; should_stop is polled between decisions
  // and at restarts.
  SatResult solve(const std::function<bool()>& should_stop = {});

  // Valid after Sat: +1 true / -1 false, indexed 1..num_vars (slot 0 unused).
  const std::vector<int8_t>& values() const { return model_; }

  uint64_t conflicts() const { return conflicts_; }
  uint64_t decisions() const { return decisions_; }

 private:
  struct Cls {
    std::vector<int32_t> lits;
    double act = 0.0;
    bool learned = false;
  };

  int8_t lit_value(int32_t l) const {
    int8_t a = assign_[std::abs(l)];
    return l > 0 ? a : static_cast<int8_t>(-a);
  }
  static uint32_t widx(int32_t l) {  // watch-list slot of a literal
    return (static_cast<uint32_t>(std::abs(l)) << 1) | (l < 0 ? 1u : 0u);
  }

  void enqueue(int32_t lit, int32_t reason);
  int32_t propagate();  // returns conflicting clause id or -1
  void analyze(int32_t confl, std::vector<int32_t>& learned, uint32_t& bt_level);
  void backtrack(uint32_t level);
  void attach(uint32_t ci);
  void bump_var(uint32_t v);
  void decay_var_activity();
  void bump_clause(Cls& c);
  void reduce_learned();
  void heap_insert(uint32_t v);
  uint32_t heap_pop();
  void heap_up(uint32_t pos);
  void heap_down(uint32_t pos);
  bool heap_less(uint32_t a, uint32_t b) const;

  uint32_t nvars_;
  bool trivially_unsat_ = false;
  bool solving_started_ = false;

  std::vector<Cls> cls_;
  uint32_t num_original_ = 0;
  std::vector<std::vector<uint32_t>> watches_;
  std::vector<int32_t> pending_units_;

  std::vector<int8_t> assign_;    // per var: 0 unset, +1, -1
  std::vector<uint32_t> level_;
  std::vector<int32_t> reason_;   // clause id or -1
  std::vector<int32_t> trail_;
  std::vector<uint32_t> trail_lim_;
  size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double cls_inc_ = 1.0;
  std::vector<uint32_t> heap_;      // binary max-heap of vars
  std::vector<int32_t> heap_pos_;   // var -> heap index, -1 if absent
  std::vector<uint8_t> phase_;

  std::vector<uint8_t> seen_;
  std::vector<int8_t> model_;

  uint64_t conflicts_ = 0;
  uint64_t decisions_ = 0;
};

}  // namespace treecert
