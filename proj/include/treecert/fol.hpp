#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treecert/errors.hpp"

namespace treecert {

// Relational vocabulary: constants, functions and predicates with fixed arities.
class Signature {
 public:
  uint32_t add_constant(std::string_view name);
  uint32_t add_function(std::string_view name, uint32_t arity);
  uint32_t add_predicate(std::string_view name, uint32_t arity);

  std::optional<uint32_t> find_constant(std::string_view) const;
  std::optional<uint32_t> find_function(std::string_view) const;
  std::optional<uint32_t> find_predicate(std::string_view) const;

  uint32_t num_constants() const { return static_cast<uint32_t>(const_names_.size()); }
  uint32_t num_functions() const { return static_cast<uint32_t>(func_names_.size()); }
  uint32_t num_predicates() const { return static_cast<uint32_t>(pred_names_.size()); }

  const std::string& constant_name(uint32_t id) const;
  const std::string& function_name(uint32_t id) const;
  const std::string& predicate_name(uint32_t id) const;
  uint32_t function_arity(uint32_t id) const;
  uint32_t predicate_arity(uint32_t id) const;

 private:
  std::vector<std::string> const_names_, func_names_, pred_names_;
  std::vector<uint32_t> func_arity_, pred_arity_;
  std::unordered_map<std::string, uint32_t> const_ids_, func_ids_, pred_ids_;
};

struct Term {
  enum class Kind : uint8_t { Var, Const, App };
  Kind kind = Kind::Var;
  uint32_t sym = 0;  // variable index / constant id / function id
  std::vector<Term> args;

  static Term var(uint32_t i) { return Term{Kind::Var, i, {}}; }
  static Term constant(uint32_t c) { return Term{Kind::Const, c, {}}; }
  static Term app(uint32_t f, std::vector<Term> as) {
    return Term{Kind::App, f, std::move(as)};
  }
  bool operator==(const Term& o) const {
    return kind == o.kind && sym == o.sym && args == o.args;
  }
};

uint64_t term_hash(const Term& t);
struct TermHasher {
  size_t operator()(const Term& t) const { return static_cast<size_t>(term_hash(t)); }
};
int term_compare(const Term& a, const Term& b);  // total order for tie-breaking

struct Atom {
  uint32_t pred = 0;
  std::vector<Term> args;
  bool operator==(const Atom& o) const = default;
};

// Universally closed implication body -> head. A missing head is a denial
// (the body must not be simultaneously satisfiable); an empty body is a fact.
struct Clause {
  std::vector<Atom> body;
  std::optional<Atom> head;
  uint32_t num_vars = 0;  // variables are indices 0..num_vars-1
};

uint32_t count_clause_vars(const Clause& c);  // 1 + max var index, 0 if none

struct Theory {
  Signature sig;
  std::vector<Clause> clauses;  // includes the goal's denial clause
  std::vector<Atom> goal;       // existential conjunction, stored positively
  uint32_t goal_vars = 0;
};

// Shape check used on every encoded theory: definite clauses plus exactly one denial.
void validate_theory(const Theory& th);  // throws Error(InputError / UndeclaredSymbol)

// Interpretation over domain {0..size-1}; tables are row-major over argument tuples.
struct FiniteModel {
  uint32_t size = 0;
  std::vector<uint32_t> const_val;             // [constant]
  std::vector<std::vector<uint32_t>> func;     // [function][flat args]
  std::vector<std::vector<uint8_t>> pred;      // [predicate][flat args]

  static FiniteModel blank(const Signature& sig, uint32_t k);
  uint64_t flat_index(std::span<const uint32_t> args) const;
};

uint64_t int_pow(uint64_t base, uint32_t exp);

uint32_t evaluate_term(const FiniteModel& m, const Signature& sig, const Term& t,
                       std::span<const uint32_t> assignment);

struct CheckOptions {
  bool parallel = false;
  size_t max_violations = 64;
};

struct CheckViolation {
  size_t clause_index;
  std::vector<uint32_t> assignment;
};

struct CheckReport {
  bool satisfied = false;
  bool truncated = false;
  std::vector<CheckViolation> violations;
};

// Evaluates every clause under every assignment of its variables.
CheckReport check_model(const FiniteModel& m, const Theory& th,
                        const CheckOptions& opts = {});

// Replaces the predicate tables with the least tables satisfying all definite
// clauses under the model's constants and functions (denials are ignored).
void least_predicates(const Theory& th, FiniteModel& m);

// --- propositional grounding ----------------------------------------------
//
// Variable layout (1-based DIMACS-style literals):
//   [constant cells c=v] [function cells f(args)=v] [predicate atoms P(args)]
// Nested terms are flattened with fresh first-order variables and cell atoms
// before instantiation over {0..k-1}; each cell carries exactly-one constraints.
struct GroundProblem {
  uint32_t k = 0;
  uint32_t num_vars = 0;
  std::vector<std::vector<int32_t>> clauses;
  uint64_t instantiated_clauses = 0;  // excludes totality/functionality constraints

  std::vector<uint64_t> const_base, func_base, pred_base;

  int32_t const_var(uint32_t c, uint32_t v) const;
  int32_t func_var(uint32_t f, uint64_t flat_args, uint32_t v) const;
  int32_t pred_var(uint32_t p, uint64_t flat_args) const;

  // Reads a model off a full assignment (values[var] > 0 means true).
  FiniteModel decode(const Signature& sig, std::span<const int8_t> values) const;
};

GroundProblem ground(const Theory& th, uint32_t k, uint64_t clause_cap = 50'000'000);

// --- stable model text format ----------------------------------------------
// size K, then one line per table cell: constants ("e = 0"), function cells
// ("fn(0,1) = 2"), then the true predicate cells ("R(0,1)"); each group sorted
// by name, cells in row-major order.
std::string print_model(const Signature& sig, const FiniteModel& m);
FiniteModel parse_model(const Signature& sig, std::string_view text);

}  // namespace treecert
