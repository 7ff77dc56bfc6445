#pragma once

#include <atomic>
#include <optional>
#include <string>

#include "treecert/oracle.hpp"

namespace treecert {

struct FinderConfig {
  uint32_t k_min = 1;
  uint32_t k_max = 8;
  double time_budget = 60.0;         // wall-clock seconds across all sizes
  uint64_t ground_cap = 50'000'000;  // max ground constraints per size
  uint64_t seed = 0;
};

struct FinderOutcome {
  enum class Kind { Model, ExhaustedSizes, Timeout, ResourceLimit, Canceled };
  Kind kind = Kind::ExhaustedSizes;
  FiniteModel model;  // set for Model
  uint32_t k = 0;     // Model: domain size; ExhaustedSizes: last size tried
  uint64_t ground_clauses = 0;  // instantiated constraints at the last size
  double elapsed = 0.0;
};

const char* finder_outcome_name(FinderOutcome::Kind k);

// Iterative deepening over domain sizes, complete within each size: ground,
// add least-number constraints over the constants, search. A found model is
// re-checked against the theory before being returned; deterministic for a
// fixed seed and config.
FinderOutcome find_model(const Theory& th, const FinderConfig& cfg,
                         const std::atomic<bool>* cancel = nullptr);

struct VerifyOptions {
  FinderConfig finder;
  ReachOptions reach;
  RtmcEncodeOptions rtmc_encode;
  PtsEncodeOptions pts_encode;
};

struct Verdict {
  enum class Kind { Safe, Unsafe, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<FiniteModel> model;  // Safe: the countermodel
  uint32_t model_size = 0;
  std::string trace_text;  // Unsafe: INIT ... UNSAFE lines
  uint32_t trace_length = 0;
  std::string finder_status;  // how each worker ended (Unknown bookkeeping)
  std::string oracle_status;
  uint32_t finder_k = 0;        // last domain size the search reached
  uint64_t ground_clauses = 0;  // instantiated constraints at the last size tried
  double seconds = 0.0;
};

const char* verdict_name(Verdict::Kind k);

// Model search and bounded reachability race on two threads over immutable
// inputs; the first conclusive answer cancels the other worker. A model means
// Safe, a trace means Unsafe, neither means Unknown; both at once raises a
// soundness fault, since correct code cannot produce contradictory evidence.
Verdict verify(const RtmcProblem& p, const VerifyOptions& opts);
Verdict verify(const PtsProblem& p, const VerifyOptions& opts);

}  // namespace treecert
