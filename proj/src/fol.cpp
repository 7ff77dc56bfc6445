#include "treecert/fol.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace treecert {

namespace {

uint32_t add_name(std::vector<std::string>& names,
                  std::unordered_map<std::string, uint32_t>& ids, std::string_view name) {
  auto it = ids.find(std::string(name));
  if (it != ids.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(names.size());
  names.emplace_back(name);
  ids.emplace(names.back(), id);
  return id;
}

}  // namespace

uint32_t Signature::add_constant(std::string_view name) {
  return add_name(const_names_, const_ids_, name);
}

uint32_t Signature::add_function(std::string_view name, uint32_t arity) {
  auto it = func_ids_.find(std::string(name));
  if (it != func_ids_.end()) {
    if (func_arity_[it->second] != arity)
      throw Error(ErrorKind::ArityMismatch,
                  "function '" + std::string(name) + "' re-declared with different arity");
    return it->second;
  }
  uint32_t id = add_name(func_names_, func_ids_, name);
  func_arity_.push_back(arity);
  return id;
}

uint32_t Signature::add_predicate(std::string_view name, uint32_t arity) {
  auto it = pred_ids_.find(std::string(name));
  if (it != pred_ids_.end()) {
    if (pred_arity_[it->second] != arity)
      throw Error(ErrorKind::ArityMismatch,
                  "predicate '" + std::string(name) + "' re-declared with different arity");
    return it->second;
  }
  uint32_t id = add_name(pred_names_, pred_ids_, name);
  pred_arity_.push_back(arity);
  return id;
}

std::optional<uint32_t> Signature::find_constant(std::string_view n) const {
  auto it = const_ids_.find(std::string(n));
  if (it == const_ids_.end()) return std::nullopt;
  return it->second;
}
std::optional<uint32_t> Signature::find_function(std::string_view n) const {
  auto it = func_ids_.find(std::string(n));
  if (it == func_ids_.end()) return std::nullopt;
  return it->second;
}
std::optional<uint32_t> Signature::find_predicate(std::string_view n) const {
  auto it = pred_ids_.find(std::string(n));
  if (it == pred_ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Signature::constant_name(uint32_t id) const {
  if (id >= const_names_.size()) throw Error(ErrorKind::UndeclaredSymbol, "constant id");
  return const_names_[id];
}
const std::string& Signature::function_name(uint32_t id) const {
  if (id >= func_names_.size()) throw Error(ErrorKind::UndeclaredSymbol, "function id");
  return func_names_[id];
}
const std::string& Signature::predicate_name(uint32_t id) const {
  if (id >= pred_names_.size()) throw Error(ErrorKind::UndeclaredSymbol, "predicate id");
  return pred_names_[id];
}
uint32_t Signature::function_arity(uint32_t id) const {
  if (id >= func_arity_.size()) throw Error(ErrorKind::UndeclaredSymbol, "function id");
  return func_arity_[id];
}
uint32_t Signature::predicate_arity(uint32_t id) const {
  if (id >= pred_arity_.size()) throw Error(ErrorKind::UndeclaredSymbol, "predicate id");
  return pred_arity_[id];
}

uint64_t term_hash(const Term& t) {
  uint64_t h = 0x100000001b3ull * (static_cast<uint64_t>(t.kind) + 3) ^ t.sym;
  for (const auto& a : t.args)
    h ^= term_hash(a) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

int term_compare(const Term& a, const Term& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.sym != b.sym) return a.sym < b.sym ? -1 : 1;
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
  for (size_t i = 0; i < a.args.size(); ++i) {
    int c = term_compare(a.args[i], b.args[i]);
    if (c != 0) return c;
  }
  return 0;
}

namespace {

void max_var(const Term& t, uint32_t& acc) {
  if (t.kind == Term::Kind::Var) {
    acc = std::max(acc, t.sym + 1);
  } else {
    for (const auto& a : t.args) max_var(a, acc);
  }
}

}  // namespace

uint32_t count_clause_vars(const Clause& c) {
  uint32_t n = 0;
  for (const auto& a : c.body)
    for (const auto& t : a.args) max_var(t, n);
  if (c.head)
    for (const auto& t : c.head->args) max_var(t, n);
  return n;
}

namespace {

void validate_term(const Signature& sig, const Term& t, uint32_t num_vars) {
  switch (t.kind) {
    case Term::Kind::Var:
      if (t.sym >= num_vars)
        throw Error(ErrorKind::UnassignedVariable, "variable index out of clause range");
      if (!t.args.empty()) throw Error(ErrorKind::InputError, "variable with arguments");
      return;
    case Term::Kind::Const:
      if (t.sym >= sig.num_constants())
        throw Error(ErrorKind::UndeclaredSymbol, "constant id out of range");
      if (!t.args.empty()) throw Error(ErrorKind::InputError, "constant with arguments");
      return;
    case Term::Kind::App:
      if (t.sym >= sig.num_functions())
        throw Error(ErrorKind::UndeclaredSymbol, "function id out of range");
      if (sig.function_arity(t.sym) != t.args.size())
        throw Error(ErrorKind::ArityMismatch,
                    "function '" + sig.function_name(t.sym) + "' applied to " +
                        std::to_string(t.args.size()) + " arguments");
      for (const auto& a : t.args) validate_term(sig, a, num_vars);
      return;
  }
}

void validate_atom(const Signature& sig, const Atom& a, uint32_t num_vars) {
  if (a.pred >= sig.num_predicates())
    throw Error(ErrorKind::UndeclaredSymbol, "predicate id out of range");
  if (sig.predicate_arity(a.pred) != a.args.size())
    throw Error(ErrorKind::ArityMismatch,
                "predicate '" + sig.predicate_name(a.pred) + "' applied to " +
                    std::to_string(a.args.size()) + " arguments");
  for (const auto& t : a.args) validate_term(sig, t, num_vars);
}

}  // namespace

void validate_theory(const Theory& th) {
  size_t denials = 0;
  for (const auto& c : th.clauses) {
    if (count_clause_vars(c) > c.num_vars)
      throw Error(ErrorKind::InputError, "clause num_vars smaller than used variables");
    for (const auto& a : c.body) validate_atom(th.sig, a, c.num_vars);
    if (c.head) {
      validate_atom(th.sig, *c.head, c.num_vars);
    } else {
      if (c.body.empty()) throw Error(ErrorKind::InputError, "empty clause");
      ++denials;
    }
  }
  if (denials != 1)
    throw Error(ErrorKind::InputError,
                "expected exactly one denial clause, found " + std::to_string(denials));
  for (const auto& a : th.goal) validate_atom(th.sig, a, th.goal_vars);
}

uint64_t int_pow(uint64_t base, uint32_t exp) {
  uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

FiniteModel FiniteModel::blank(const Signature& sig, uint32_t k) {
  FiniteModel m;
  m.size = k;
  m.const_val.assign(sig.num_constants(), 0);
  m.func.resize(sig.num_functions());
  for (uint32_t f = 0; f < sig.num_functions(); ++f)
    m.func[f].assign(int_pow(k, sig.function_arity(f)), 0);
  m.pred.resize(sig.num_predicates());
  for (uint32_t p = 0; p < sig.num_predicates(); ++p)
    m.pred[p].assign(int_pow(k, sig.predicate_arity(p)), 0);
  return m;
}

uint64_t FiniteModel::flat_index(std::span<const uint32_t> args) const {
  uint64_t acc = 0;
  for (uint32_t a : args) acc = acc * size + a;
  return acc;
}

uint32_t evaluate_term(const FiniteModel& m, const Signature& sig, const Term& t,
                       std::span<const uint32_t> assignment) {
  switch (t.kind) {
    case Term::Kind::Var:
      if (t.sym >= assignment.size())
        throw Error(ErrorKind::UnassignedVariable,
                    "variable v" + std::to_string(t.sym) + " not assigned");
      return assignment[t.sym];
    case Term::Kind::Const:
      if (t.sym >= m.const_val.size())
        throw Error(ErrorKind::UndeclaredSymbol, "constant id out of range");
      return m.const_val[t.sym];
    case Term::Kind::App: {
      if (t.sym >= m.func.size())
        throw Error(ErrorKind::UndeclaredSymbol, "function id out of range");
      if (sig.function_arity(t.sym) != t.args.size())
        throw Error(ErrorKind::ArityMismatch, "bad application arity");
      uint64_t flat = 0;
      for (const auto& a : t.args)
        flat = flat * m.size + evaluate_term(m, sig, a, assignment);
      return m.func[t.sym][flat];
    }
  }
  throw Error(ErrorKind::Internal, "unreachable term kind");
}

namespace {

void check_model_shapes(const FiniteModel& m, const Theory& th) {
  const Signature& sig = th.sig;
  if (m.size == 0) throw Error(ErrorKind::SignatureMismatch, "model size is zero");
  if (m.const_val.size() != sig.num_constants() || m.func.size() != sig.num_functions() ||
      m.pred.size() != sig.num_predicates())
    throw Error(ErrorKind::SignatureMismatch, "model table counts do not match signature");
  for (uint32_t c = 0; c < sig.num_constants(); ++c)
    if (m.const_val[c] >= m.size)
      throw Error(ErrorKind::SignatureMismatch, "constant value out of domain");
  for (uint32_t f = 0; f < sig.num_functions(); ++f) {
    if (m.func[f].size() != int_pow(m.size, sig.function_arity(f)))
      throw Error(ErrorKind::SignatureMismatch, "function table size mismatch");
    for (uint32_t v : m.func[f])
      if (v >= m.size) throw Error(ErrorKind::SignatureMismatch, "function value out of domain");
  }
  for (uint32_t p = 0; p < sig.num_predicates(); ++p)
    if (m.pred[p].size() != int_pow(m.size, sig.predicate_arity(p)))
      throw Error(ErrorKind::SignatureMismatch, "predicate table size mismatch");
}

void decode_assignment(uint64_t flat, uint32_t k, std::vector<uint32_t>& out) {
  for (size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<uint32_t>(flat % k);
    flat /= k;
  }
}

bool atom_holds(const FiniteModel& m, const Signature& sig, const Atom& a,
                std::span<const uint32_t> assignment) {
  uint64_t flat = 0;
  for (const auto& t : a.args) flat = flat * m.size + evaluate_term(m, sig, t, assignment);
  return m.pred[a.pred][flat] != 0;
}

// True iff the clause holds under the assignment.
bool clause_holds(const FiniteModel& m, const Signature& sig, const Clause& c,
                  std::span<const uint32_t> assignment) {
  for (const auto& a : c.body)
    if (!atom_holds(m, sig, a, assignment)) return true;
  if (!c.head) return false;
  return atom_holds(m, sig, *c.head, assignment);
}

}  // namespace

CheckReport check_model(const FiniteModel& m, const Theory& th, const CheckOptions& opts) {
  check_model_shapes(m, th);
  CheckReport rep;
  size_t found = 0;

  for (size_t ci = 0; ci < th.clauses.size(); ++ci) {
    const Clause& c = th.clauses[ci];
    uint64_t total = int_pow(m.size, c.num_vars);
    bool use_parallel = opts.parallel && total >= 4096;
    if (!use_parallel) {
      std::vector<uint32_t> assignment(c.num_vars);
      for (uint64_t flat = 0; flat < total; ++flat) {
        decode_assignment(flat, m.size, assignment);
        if (!clause_holds(m, th.sig, c, assignment)) {
          ++found;
          if (rep.violations.size() < opts.max_violations)
            rep.violations.push_back({ci, assignment});
        }
      }
    } else {
#ifdef _OPENMP
      std::vector<std::vector<uint64_t>> bad_flats;
#pragma omp parallel
      {
#pragma omp single
        bad_flats.resize(omp_get_num_threads());
        std::vector<uint32_t> assignment(c.num_vars);
#pragma omp for schedule(static)
        for (int64_t flat = 0; flat < static_cast<int64_t>(total); ++flat) {
          decode_assignment(static_cast<uint64_t>(flat), m.size, assignment);
          if (!clause_holds(m, th.sig, c, assignment)) {
            auto& local = bad_flats[omp_get_thread_num()];
            if (local.size() < opts.max_violations)
              local.push_back(static_cast<uint64_t>(flat));
            else if (local.empty() || local.back() != ~0ull)
              local.push_back(~0ull);  // marker: more beyond the cap
          }
        }
      }
      std::vector<uint64_t> merged;
      for (auto& v : bad_flats)
        for (uint64_t f : v) {
          if (f == ~0ull) ++found;  // counts as at least one truncated hit
          else merged.push_back(f);
        }
      std::sort(merged.begin(), merged.end());
      found += merged.size();
      for (uint64_t f : merged) {
        if (rep.violations.size() >= opts.max_violations) break;
        std::vector<uint32_t> assignment(c.num_vars);
        decode_assignment(f, m.size, assignment);
        rep.violations.push_back({ci, assignment});
      }
#else
      std::vector<uint32_t> assignment(c.num_vars);
      for (uint64_t flat = 0; flat < total; ++flat) {
        decode_assignment(flat, m.size, assignment);
        if (!clause_holds(m, th.sig, c, assignment)) {
          ++found;
          if (rep.violations.size() < opts.max_violations)
            rep.violations.push_back({ci, assignment});
        }
      }
#endif
    }
  }

  rep.satisfied = (found == 0);
  rep.truncated = (found > rep.violations.size());
  return rep;
}

void least_predicates(const Theory& th, FiniteModel& m) {
  for (auto& tab : m.pred) std::fill(tab.begin(), tab.end(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Clause& c : th.clauses) {
      if (!c.head) continue;
      uint64_t total = int_pow(m.size, c.num_vars);
      std::vector<uint32_t> assignment(c.num_vars);
      for (uint64_t flat = 0; flat < total; ++flat) {
        decode_assignment(flat, m.size, assignment);
        bool body_ok = true;
        for (const auto& a : c.body)
          if (!atom_holds(m, th.sig, a, assignment)) {
            body_ok = false;
            break;
          }
        if (!body_ok) continue;
        uint64_t hflat = 0;
        for (const auto& t : c.head->args)
          hflat = hflat * m.size + evaluate_term(m, th.sig, t, assignment);
        if (!m.pred[c.head->pred][hflat]) {
          m.pred[c.head->pred][hflat] = 1;
          changed = true;
        }
      }
    }
  }
}

// --- grounding --------------------------------------------------------------

namespace {

struct FlatAtomG {
  uint32_t pred;
  std::vector<uint32_t> vars;
};
struct FlatCellG {
  uint32_t fn;
  std::vector<uint32_t> argvars;
  uint32_t res;
};
struct FlatConstG {
  uint32_t c;
  uint32_t res;
};
struct FlatClauseG {
  std::vector<FlatAtomG> body;
  std::optional<FlatAtomG> head;
  std::vector<FlatCellG> cells;
  std::vector<FlatConstG> consts;
  uint32_t nvars = 0;
};

uint32_t flatten_term(const Term& t, FlatClauseG& out,
                      std::unordered_map<Term, uint32_t, TermHasher>& memo) {
  if (t.kind == Term::Kind::Var) return t.sym;
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  uint32_t v;
  if (t.kind == Term::Kind::Const) {
    v = out.nvars++;
    out.consts.push_back({t.sym, v});
  } else {
    std::vector<uint32_t> argvars;
    argvars.reserve(t.args.size());
    for (const auto& a : t.args) argvars.push_back(flatten_term(a, out, memo));
    v = out.nvars++;
    out.cells.push_back({t.sym, std::move(argvars), v});
  }
  memo.emplace(t, v);
  return v;
}

FlatAtomG flatten_atom(const Atom& a, FlatClauseG& out,
                       std::unordered_map<Term, uint32_t, TermHasher>& memo) {
  FlatAtomG fa;
  fa.pred = a.pred;
  fa.vars.reserve(a.args.size());
  for (const auto& t : a.args) fa.vars.push_back(flatten_term(t, out, memo));
  return fa;
}

FlatClauseG flatten_clause(const Clause& c) {
  FlatClauseG out;
  out.nvars = c.num_vars;
  std::unordered_map<Term, uint32_t, TermHasher> memo;
  for (const auto& a : c.body) out.body.push_back(flatten_atom(a, out, memo));
  if (c.head) out.head = flatten_atom(*c.head, out, memo);
  return out;
}

}  // namespace

int32_t GroundProblem::const_var(uint32_t c, uint32_t v) const {
  return static_cast<int32_t>(const_base[c] + v + 1);
}
int32_t GroundProblem::func_var(uint32_t f, uint64_t flat_args, uint32_t v) const {
  return static_cast<int32_t>(func_base[f] + flat_args * k + v + 1);
}
int32_t GroundProblem::pred_var(uint32_t p, uint64_t flat_args) const {
  return static_cast<int32_t>(pred_base[p] + flat_args + 1);
}

FiniteModel GroundProblem::decode(const Signature& sig, std::span<const int8_t> values) const {
  FiniteModel m = FiniteModel::blank(sig, k);
  auto truth = [&](int32_t var) {
    return values[static_cast<size_t>(var) - 1] > 0;
  };
  for (uint32_t c = 0; c < sig.num_constants(); ++c) {
    bool set = false;
    for (uint32_t v = 0; v < k; ++v)
      if (truth(const_var(c, v))) {
        m.const_val[c] = v;
        set = true;
        break;
      }
    if (!set) throw Error(ErrorKind::Internal, "constant cell without value in assignment");
  }
  for (uint32_t f = 0; f < sig.num_functions(); ++f) {
    uint64_t cells = int_pow(k, sig.function_arity(f));
    for (uint64_t cell = 0; cell < cells; ++cell) {
      bool set = false;
      for (uint32_t v = 0; v < k; ++v)
        if (truth(func_var(f, cell, v))) {
          m.func[f][cell] = v;
          set = true;
          break;
        }
      if (!set) throw Error(ErrorKind::Internal, "function cell without value in assignment");
    }
  }
  for (uint32_t p = 0; p < sig.num_predicates(); ++p) {
    uint64_t cells = int_pow(k, sig.predicate_arity(p));
    for (uint64_t cell = 0; cell < cells; ++cell)
      m.pred[p][cell] = truth(pred_var(p, cell)) ? 1 : 0;
  }
  return m;
}

GroundProblem ground(const Theory& th, uint32_t k, uint64_t clause_cap) {
  if (k == 0) throw Error(ErrorKind::InputError, "domain size must be positive");
  const Signature& sig = th.sig;
  GroundProblem gp;
  gp.k = k;

  uint64_t next = 0;
  gp.const_base.resize(sig.num_constants());
  for (uint32_t c = 0; c < sig.num_constants(); ++c) {
    gp.const_base[c] = next;
    next += k;
  }
  gp.func_base.resize(sig.num_functions());
  for (uint32_t f = 0; f < sig.num_functions(); ++f) {
    gp.func_base[f] = next;
    next += int_pow(k, sig.function_arity(f)) * k;
  }
  gp.pred_base.resize(sig.num_predicates());
  for (uint32_t p = 0; p < sig.num_predicates(); ++p) {
    gp.pred_base[p] = next;
    next += int_pow(k, sig.predicate_arity(p));
  }
  if (next > (1u << 30))
    throw Error(ErrorKind::ResourceLimit, "too many propositional variables");
  gp.num_vars = static_cast<uint32_t>(next);

  auto push_clause = [&](std::vector<int32_t> lits) {
    if (gp.clauses.size() >= clause_cap)
      throw Error(ErrorKind::ResourceLimit,
                  "grounded clause count exceeds cap (" + std::to_string(clause_cap) + ")");
    gp.clauses.push_back(std::move(lits));
  };

  // Exactly-one constraints per constant and per function cell.
  for (uint32_t c = 0; c < sig.num_constants(); ++c) {
    std::vector<int32_t> alo;
    for (uint32_t v = 0; v < k; ++v) alo.push_back(gp.const_var(c, v));
    push_clause(alo);
    for (uint32_t v = 0; v < k; ++v)
      for (uint32_t w = v + 1; w < k; ++w)
        push_clause({-gp.const_var(c, v), -gp.const_var(c, w)});
  }
  for (uint32_t f = 0; f < sig.num_functions(); ++f) {
    uint64_t cells = int_pow(k, sig.function_arity(f));
    for (uint64_t cell = 0; cell < cells; ++cell) {
      std::vector<int32_t> alo;
      for (uint32_t v = 0; v < k; ++v) alo.push_back(gp.func_var(f, cell, v));
      push_clause(alo);
      for (uint32_t v = 0; v < k; ++v)
        for (uint32_t w = v + 1; w < k; ++w)
          push_clause({-gp.func_var(f, cell, v), -gp.func_var(f, cell, w)});
    }
  }

  // Flatten then instantiate each clause over all domain tuples.
  std::vector<uint32_t> vals;
  for (const Clause& c : th.clauses) {
    FlatClauseG fc = flatten_clause(c);
    uint64_t total = int_pow(k, fc.nvars);
    vals.assign(fc.nvars, 0);
    for (uint64_t flat = 0; flat < total; ++flat) {
      uint64_t rest = flat;
      for (size_t i = fc.nvars; i-- > 0;) {
        vals[i] = static_cast<uint32_t>(rest % k);
        rest /= k;
      }
      std::vector<int32_t> lits;
      lits.reserve(fc.consts.size() + fc.cells.size() + fc.body.size() + 1);
      for (const auto& cc : fc.consts)
        lits.push_back(-gp.const_var(cc.c, vals[cc.res]));
      for (const auto& cell : fc.cells) {
        uint64_t fa = 0;
        for (uint32_t av : cell.argvars) fa = fa * k + vals[av];
        lits.push_back(-gp.func_var(cell.fn, fa, vals[cell.res]));
      }
      for (const auto& ba : fc.body) {
        uint64_t fa = 0;
        for (uint32_t av : ba.vars) fa = fa * k + vals[av];
        lits.push_back(-gp.pred_var(ba.pred, fa));
      }
      if (fc.head) {
        uint64_t fa = 0;
        for (uint32_t av : fc.head->vars) fa = fa * k + vals[av];
        lits.push_back(gp.pred_var(fc.head->pred, fa));
      }
      push_clause(std::move(lits));
      ++gp.instantiated_clauses;
    }
  }
  return gp;
}

// --- model text format -------------------------------------------------------

namespace {

std::vector<uint32_t> order_by_name(uint32_t n, const std::function<const std::string&(uint32_t)>& name) {
  std::vector<uint32_t> idx(n);
  for (uint32_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](uint32_t a, uint32_t b) { return name(a) < name(b); });
  return idx;
}

void unflatten(uint64_t flat, uint32_t k, uint32_t arity, std::vector<uint32_t>& out) {
  out.assign(arity, 0);
  for (size_t i = arity; i-- > 0;) {
    out[i] = static_cast<uint32_t>(flat % k);
    flat /= k;
  }
}

}  // namespace

std::string print_model(const Signature& sig, const FiniteModel& m) {
  std::ostringstream out;
  out << "size " << m.size << "\n";
  std::vector<uint32_t> args;
  for (uint32_t c : order_by_name(sig.num_constants(),
                                  [&](uint32_t i) -> const std::string& { return sig.constant_name(i); }))
    out << sig.constant_name(c) << " = " << m.const_val[c] << "\n";
  for (uint32_t f : order_by_name(sig.num_functions(),
                                  [&](uint32_t i) -> const std::string& { return sig.function_name(i); })) {
    uint32_t ar = sig.function_arity(f);
    uint64_t cells = int_pow(m.size, ar);
    for (uint64_t cell = 0; cell < cells; ++cell) {
      unflatten(cell, m.size, ar, args);
      out << sig.function_name(f) << '(';
      for (uint32_t i = 0; i < ar; ++i) out << (i ? "," : "") << args[i];
      out << ") = " << m.func[f][cell] << "\n";
    }
  }
  for (uint32_t p : order_by_name(sig.num_predicates(),
                                  [&](uint32_t i) -> const std::string& { return sig.predicate_name(i); })) {
    uint32_t ar = sig.predicate_arity(p);
    uint64_t cells = int_pow(m.size, ar);
    for (uint64_t cell = 0; cell < cells; ++cell) {
      if (!m.pred[p][cell]) continue;
      unflatten(cell, m.size, ar, args);
      out << sig.predicate_name(p) << '(';
      for (uint32_t i = 0; i < ar; ++i) out << (i ? "," : "") << args[i];
      out << ")\n";
    }
  }
  return out.str();
}

FiniteModel parse_model(const Signature& sig, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  uint32_t k = 0;
  bool have_size = false;
  FiniteModel m;
  std::vector<uint8_t> const_seen;
  std::vector<std::vector<uint8_t>> func_seen;

  auto parse_fail = [&](const std::string& msg) -> void {
    throw Error(ErrorKind::Parse, "model text: " + msg + " in line '" + line + "'");
  };

  while (std::getline(in, line)) {
    size_t h = line.find_first_not_of(" \t\r");
    if (h == std::string::npos) continue;
    if (line[h] == '%' || line[h] == '#') continue;
    std::string body = line.substr(h);
    while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.pop_back();

    if (!have_size) {
      if (body.rfind("size ", 0) != 0) parse_fail("expected 'size K' first");
      k = static_cast<uint32_t>(std::stoul(body.substr(5)));
      if (k == 0) parse_fail("size must be positive");
      m = FiniteModel::blank(sig, k);
      const_seen.assign(sig.num_constants(), 0);
      func_seen.resize(sig.num_functions());
      for (uint32_t f = 0; f < sig.num_functions(); ++f)
        func_seen[f].assign(int_pow(k, sig.function_arity(f)), 0);
      have_size = true;
      continue;
    }

    // Forms: "name = v" | "f(a,...) = v" | "P(a,...)"
    size_t paren = body.find('(');
    size_t eq = body.find('=');
    if (paren == std::string::npos || (eq != std::string::npos && eq < paren)) {
      // constant
      if (eq == std::string::npos) parse_fail("expected '='");
      std::string name = body.substr(0, eq);
      while (!name.empty() && name.back() == ' ') name.pop_back();
      auto cid = sig.find_constant(name);
      if (!cid) throw Error(ErrorKind::SignatureMismatch, "unknown constant '" + name + "'");
      uint32_t v = static_cast<uint32_t>(std::stoul(body.substr(eq + 1)));
      if (v >= k) parse_fail("value out of domain");
      m.const_val[*cid] = v;
      const_seen[*cid] = 1;
      continue;
    }

    std::string name = body.substr(0, paren);
    size_t close = body.find(')', paren);
    if (close == std::string::npos) parse_fail("expected ')'");
    std::vector<uint32_t> args;
    {
      std::string inner = body.substr(paren + 1, close - paren - 1);
      std::istringstream as(inner);
      std::string tok;
      while (std::getline(as, tok, ',')) {
        if (tok.empty()) parse_fail("empty argument");
        args.push_back(static_cast<uint32_t>(std::stoul(tok)));
      }
    }
    for (uint32_t a : args)
      if (a >= k) parse_fail("argument out of domain");

    size_t eq2 = body.find('=', close);
    if (eq2 != std::string::npos) {
      auto fid = sig.find_function(name);
      if (!fid) throw Error(ErrorKind::SignatureMismatch, "unknown function '" + name + "'");
      if (sig.function_arity(*fid) != args.size())
        throw Error(ErrorKind::SignatureMismatch, "arity mismatch for function '" + name + "'");
      uint32_t v = static_cast<uint32_t>(std::stoul(body.substr(eq2 + 1)));
      if (v >= k) parse_fail("value out of domain");
      uint64_t flat = m.flat_index(args);
      m.func[*fid][flat] = v;
      func_seen[*fid][flat] = 1;
    } else {
      auto pid = sig.find_predicate(name);
      if (!pid) throw Error(ErrorKind::SignatureMismatch, "unknown predicate '" + name + "'");
      if (sig.predicate_arity(*pid) != args.size())
        throw Error(ErrorKind::SignatureMismatch, "arity mismatch for predicate '" + name + "'");
      m.pred[*pid][m.flat_index(args)] = 1;
    }
  }

  if (!have_size) throw Error(ErrorKind::Parse, "model text: missing 'size K' line");
  for (uint32_t c = 0; c < sig.num_constants(); ++c)
    if (!const_seen[c])
      throw Error(ErrorKind::SignatureMismatch,
                  "model omits constant '" + sig.constant_name(c) + "'");
  for (uint32_t f = 0; f < sig.num_functions(); ++f)
    for (uint64_t cell = 0; cell < func_seen[f].size(); ++cell)
      if (!func_seen[f][cell])
        throw Error(ErrorKind::SignatureMismatch,
                    "model omits a cell of function '" + sig.function_name(f) + "'");
  return m;
}

}  // namespace treecert
