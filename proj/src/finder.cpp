#include "treecert/finder.hpp"

#include <chrono>
#include <exception>
#include <thread>
#include <utility>

#include "treecert/sat.hpp"

namespace treecert {

const char* finder_outcome_name(FinderOutcome::Kind k) {
  switch (k) {
    case FinderOutcome::Kind::Model: return "model";
    case FinderOutcome::Kind::ExhaustedSizes: return "exhausted-sizes";
    case FinderOutcome::Kind::Timeout: return "timeout";
    case FinderOutcome::Kind::ResourceLimit: return "resource-limit";
    case FinderOutcome::Kind::Canceled: return "canceled";
  }
  return "?";
}

const char* verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Safe: return "safe";
    case Verdict::Kind::Unsafe: return "unsafe";
    case Verdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

FinderOutcome find_model(const Theory& th, const FinderConfig& cfg,
                         const std::atomic<bool>* cancel) {
  validate_theory(th);
  if (cfg.k_min < 1 || cfg.k_min > cfg.k_max)
    throw Error(ErrorKind::InputError,
                "domain size bounds must satisfy 1 <= k_min <= k_max");

  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };
  uint64_t last_ground = 0;
  auto outcome = [&](FinderOutcome::Kind kind, uint32_t k) {
    FinderOutcome o;
    o.kind = kind;
    o.k = k;
    o.ground_clauses = last_ground;
    o.elapsed = elapsed();
    return o;
  };

  for (uint32_t k = cfg.k_min; k <= cfg.k_max; ++k) {
    if (cancel && cancel->load(std::memory_order_relaxed))
      return outcome(FinderOutcome::Kind::Canceled, k);
    if (elapsed() >= cfg.time_budget)
      return outcome(FinderOutcome::Kind::Timeout, k);

    GroundProblem gp;
    try {
      gp = ground(th, k, cfg.ground_cap);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ResourceLimit)
        return outcome(FinderOutcome::Kind::ResourceLimit, k);
      throw;
    }
    last_ground = gp.instantiated_clauses;

    SatSolver solver(gp.num_vars, cfg.seed);
    for (const auto& clause : gp.clauses) solver.add_clause(clause);

    // Least-number constraints: the i-th constant may use value v > 0 only if
    // an earlier constant already uses v-1 (so it never exceeds i). Sound per
    // size, since domain elements are interchangeable.
    for (uint32_t c = 0; c < th.sig.num_constants(); ++c)
      for (uint32_t v = 1; v < k; ++v) {
        if (v > c) {
          solver.add_clause({-gp.const_var(c, v)});
          continue;
        }
        std::vector<int32_t> cl;
        cl.push_back(-gp.const_var(c, v));
        for (uint32_t j = 0; j < c; ++j) cl.push_back(gp.const_var(j, v - 1));
        solver.add_clause(cl);
      }

    bool canceled = false;
    SatResult res = solver.solve([&] {
      if (cancel && cancel->load(std::memory_order_relaxed)) {
        canceled = true;
        return true;
      }
      return elapsed() >= cfg.time_budget;
    });
    if (res == SatResult::Stopped)
      return outcome(canceled ? FinderOutcome::Kind::Canceled
                              : FinderOutcome::Kind::Timeout,
                     k);
    if (res == SatResult::Sat) {
      FiniteModel model = gp.decode(
          th.sig, std::span<const int8_t>(solver.values()).subspan(1));
      CheckReport rep = check_model(model, th);
      if (!rep.satisfied)
        throw Error(ErrorKind::SoundnessFault,
                    "the search returned an interpretation that fails its own "
                    "theory");
      FinderOutcome o = outcome(FinderOutcome::Kind::Model, k);
      o.model = std::move(model);
      return o;
    }
  }
  return outcome(FinderOutcome::Kind::ExhaustedSizes, cfg.k_max);
}

namespace {

template <typename Problem, typename Format>
Verdict verify_impl(const Problem& p, const Theory& th,
                    const VerifyOptions& opts, Format format) {
  auto start = std::chrono::steady_clock::now();
  std::atomic<bool> cancel_finder{false}, cancel_oracle{false};

  FinderOutcome fo;
  std::exception_ptr finder_err;
  std::thread finder_worker([&] {
    try {
      fo = find_model(th, opts.finder, &cancel_finder);
      if (fo.kind == FinderOutcome::Kind::Model) cancel_oracle.store(true);
    } catch (...) {
      finder_err = std::current_exception();
      cancel_oracle.store(true);
    }
  });

  decltype(find_unsafe_trace(p, opts.reach)) trace;
  std::string oracle_status = "exhausted";
  std::exception_ptr oracle_err;
  std::thread oracle_worker([&] {
    try {
      ReachOptions ro = opts.reach;
      ro.cancel = &cancel_oracle;
      trace = find_unsafe_trace(p, ro);
      if (trace) {
        oracle_status = "trace";
        cancel_finder.store(true);
      } else if (cancel_oracle.load()) {
        oracle_status = "canceled";
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ResourceLimit) {
        oracle_status = "resource-limit";
      } else {
        oracle_err = std::current_exception();
        cancel_finder.store(true);
      }
    } catch (...) {
      oracle_err = std::current_exception();
      cancel_finder.store(true);
    }
  });

  finder_worker.join();
  oracle_worker.join();
  if (finder_err) std::rethrow_exception(finder_err);
  if (oracle_err) std::rethrow_exception(oracle_err);

  Verdict v;
  v.finder_k = fo.k;
  v.ground_clauses = fo.ground_clauses;
  v.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (fo.kind == FinderOutcome::Kind::Model && trace)
    throw Error(ErrorKind::SoundnessFault,
                "model search and reachability produced contradictory "
                "verdicts");
  if (fo.kind == FinderOutcome::Kind::Model) {
    v.kind = Verdict::Kind::Safe;
    v.model = std::move(fo.model);
    v.model_size = fo.k;
    v.finder_status = "model";
    v.oracle_status = oracle_status;
    return v;
  }
  if (trace) {
    v.kind = Verdict::Kind::Unsafe;
    v.trace_text = format(*trace);
    v.trace_length = static_cast<uint32_t>(trace->size());
    v.finder_status = finder_outcome_name(fo.kind);
    v.oracle_status = oracle_status;
    return v;
  }
  v.kind = Verdict::Kind::Unknown;
  v.finder_status = finder_outcome_name(fo.kind);
  v.oracle_status = oracle_status;
  return v;
}

}  // namespace

Verdict verify(const RtmcProblem& p, const VerifyOptions& opts) {
  EncodedRtmc enc = encode_rtmc(p, opts.rtmc_encode);
  return verify_impl(p, enc.theory, opts, [&](const std::vector<Tree>& tr) {
    return format_trace(tr, p.alphabet);
  });
}

Verdict verify(const PtsProblem& p, const VerifyOptions& opts) {
  EncodedPts enc = encode_pts(p, opts.pts_encode);
  return verify_impl(p, enc.theory, opts,
                     [&](const std::vector<StateTree>& tr) {
                       return format_trace(tr, p.system.states());
                     });
}

}  // namespace treecert
