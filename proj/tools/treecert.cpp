// treecert -- safety verification for parameterized tree-shaped systems.
//
// A problem file describes either a relation-tracking instance (automata plus
// a transducer) or a rewrite-system instance; `verify` races a finite-model
// search against bounded reachability, `oracle` runs reachability alone,
// `emit` prints the first-order encoding, `check-model` re-validates a saved
// model, and `bench` sweeps a directory of problems.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "treecert/encode.hpp"
#include "treecert/finder.hpp"
#include "treecert/json_io.hpp"
#include "treecert/oracle.hpp"

namespace {

using namespace treecert;

constexpr int kExitSafe = 0;
constexpr int kExitUnsafe = 10;
constexpr int kExitUnknown = 20;
constexpr int kExitInput = 2;

struct CommonFlags {
  uint64_t seed = 0;
  uint32_t k_max = 8;
  double time_budget = 60.0;
  int64_t oracle_bound = -1;  // -1: pick per kind below
  bool json = false;
  bool parallel = false;
};

// Reachability depth defaults differ by kind: configurations of a rewrite
// system are one node per process, so deeper bounds stay cheap there.
uint32_t effective_bound(const CommonFlags& f, const LoadedProblem& p) {
  if (f.oracle_bound >= 0) return static_cast<uint32_t>(f.oracle_bound);
  return p.rtmc ? 7 : 15;
}

VerifyOptions verify_options(const CommonFlags& f, const LoadedProblem& p) {
  VerifyOptions o;
  o.finder.k_max = f.k_max;
  o.finder.time_budget = f.time_budget;
  o.finder.seed = f.seed;
  o.reach.size_bound = effective_bound(f, p);
  o.reach.parallel = f.parallel;
  o.rtmc_encode = p.rtmc_options;
  o.pts_encode = p.pts_options;
  return o;
}

Verdict run_verify(const LoadedProblem& p, const VerifyOptions& o) {
  return p.rtmc ? verify(*p.rtmc, o) : verify(*p.pts, o);
}

int verdict_exit(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Safe: return kExitSafe;
    case Verdict::Kind::Unsafe: return kExitUnsafe;
    default: return kExitUnknown;
  }
}

int cmd_verify(const std::string& file, const CommonFlags& flags) {
  LoadedProblem p = load_problem_file(file);
  VerifyOptions opts = verify_options(flags, p);
  Verdict v = run_verify(p, opts);

  std::string model_text;
  if (v.model) {
    Theory th = encode_loaded(p);
    model_text = print_model(th.sig, *v.model);
  }

  if (flags.json) {
    ReportInput rep;
    rep.problem = p.name;
    rep.kind = p.kind;
    rep.verdict = &v;
    rep.model_text = model_text;
    rep.oracle_bound = opts.reach.size_bound;
    std::cout << report_json(rep);
    return verdict_exit(v.kind);
  }

  std::cout << "problem: " << p.name << " (" << p.kind << ")\n";
  std::cout << "verdict: " << verdict_name(v.kind) << "\n";
  switch (v.kind) {
    case Verdict::Kind::Safe:
      std::cout << "domain size: " << v.model_size << "\n";
      std::cout << "model:\n" << model_text;
      break;
    case Verdict::Kind::Unsafe:
      std::cout << "trace (" << v.trace_length << " configurations):\n"
                << v.trace_text;
      break;
    case Verdict::Kind::Unknown:
      std::cout << "model search: " << v.finder_status
                << " (sizes up to " << v.finder_k << ")\n";
      std::cout << "reachability: " << v.oracle_status << " (initial trees up to "
                << opts.reach.size_bound << " nodes)\n";
      break;
  }
  std::printf("statistics: k=%u ground_clauses=%llu seconds=%.2f\n",
              v.finder_k, static_cast<unsigned long long>(v.ground_clauses),
              v.seconds);
  return verdict_exit(v.kind);
}

int cmd_emit(const std::string& file) {
  LoadedProblem p = load_problem_file(file);
  EmitOptions opts;
  opts.notes = p.notes;
  opts.notes.insert(opts.notes.begin(), p.name + " (" + p.kind + ")");
  std::cout << emit_ladr(encode_loaded(p), opts);
  return 0;
}

int cmd_oracle(const std::string& file, const CommonFlags& flags) {
  LoadedProblem p = load_problem_file(file);
  ReachOptions ro;
  ro.size_bound = effective_bound(flags, p);
  ro.parallel = flags.parallel;

  std::string trace_text;
  uint64_t visited = 0;
  bool found = false;
  if (p.rtmc) {
    if (auto tr = find_unsafe_trace(*p.rtmc, ro)) {
      found = true;
      trace_text = format_trace(*tr, p.rtmc->alphabet);
    } else {
      visited = reachable_rtmc(*p.rtmc, ro).size();
    }
  } else {
    if (auto tr = find_unsafe_trace(*p.pts, ro)) {
      found = true;
      trace_text = format_trace(*tr, p.pts->system.states());
    } else {
      visited = reachable_pts(*p.pts, ro).size();
    }
  }

  if (flags.json) {
    nlohmann::json j;
    j["problem"] = p.name;
    j["bound"] = ro.size_bound;
    if (found) {
      nlohmann::json lines = nlohmann::json::array();
      std::istringstream ts(trace_text);
      for (std::string line; std::getline(ts, line);) lines.push_back(line);
      j["trace"] = lines;
    } else {
      j["trace"] = nullptr;
      j["visited"] = visited;
    }
    std::cout << j.dump(2) << "\n";
  } else if (found) {
    std::cout << "unsafe tree reachable within bound " << ro.size_bound
              << ":\n" << trace_text;
  } else {
    std::cout << "no unsafe tree reachable; initial trees up to "
              << ro.size_bound << " nodes fully explored (" << visited
              << " trees visited)\n";
  }
  return found ? kExitUnsafe : kExitSafe;
}

int cmd_check_model(const std::string& file, const std::string& model_path) {
  LoadedProblem p = load_problem_file(file);
  Theory th = encode_loaded(p);

  std::ifstream in(model_path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::InputError, "cannot open " + model_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  FiniteModel m = parse_model(th.sig, buf.str());

  CheckReport rep = check_model(m, th);
  if (rep.satisfied) {
    std::cout << "model of size " << m.size
              << " satisfies all " << th.clauses.size() << " clauses\n";
    return 0;
  }
  std::cout << "model fails " << rep.violations.size()
            << (rep.truncated ? "+" : "") << " clause instance(s):\n";
  for (const CheckViolation& viol : rep.violations) {
    std::cout << "  clause " << viol.clause_index << " under assignment (";
    for (size_t i = 0; i < viol.assignment.size(); ++i)
      std::cout << (i ? "," : "") << viol.assignment[i];
    std::cout << ")\n";
  }
  return 1;
}

int cmd_bench(const std::string& dir, const CommonFlags& flags) {
  std::vector<std::string> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".json")
      files.push_back(entry.path().string());
  }
  if (ec) throw Error(ErrorKind::InputError, dir + ": " + ec.message());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cout << "no problem files in " << dir << "\n";
    return 0;
  }

  struct Row {
    std::string name, kind, verdict, note;
    uint32_t k = 0;
    double seconds = 0.0;
  };
  std::vector<Row> rows;
  for (const std::string& f : files) {
    Row row;
    try {
      LoadedProblem p = load_problem_file(f);
      row.name = p.name;
      row.kind = p.kind;
      Verdict v = run_verify(p, verify_options(flags, p));
      row.verdict = verdict_name(v.kind);
      row.k = v.kind == Verdict::Kind::Safe ? v.model_size : v.finder_k;
      row.seconds = v.seconds;
    } catch (const Error& e) {
      if (row.name.empty()) row.name = std::filesystem::path(f).stem().string();
      row.verdict = "error";
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  }

  size_t name_w = 7, kind_w = 4;
  for (const Row& r : rows) {
    name_w = std::max(name_w, r.name.size());
    kind_w = std::max(kind_w, r.kind.size());
  }
  std::printf("%-*s  %-*s  %-8s  %3s  %8s\n", static_cast<int>(name_w),
              "problem", static_cast<int>(kind_w), "kind", "verdict", "k",
              "seconds");
  for (const Row& r : rows) {
    if (r.verdict == "error") {
      std::printf("%-*s  %-*s  %-8s  %3s  %8s\n", static_cast<int>(name_w),
                  r.name.c_str(), static_cast<int>(kind_w), r.kind.c_str(),
                  "error", "-", "-");
    } else {
      std::printf("%-*s  %-*s  %-8s  %3u  %8.2f\n", static_cast<int>(name_w),
                  r.name.c_str(), static_cast<int>(kind_w), r.kind.c_str(),
                  r.verdict.c_str(), r.k, r.seconds);
    }
  }
  for (const Row& r : rows)
    if (!r.note.empty())
      std::cout << r.name << ": " << r.note << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-countermodel safety verification for tree-shaped systems"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string file, dir, model_path;

  auto add_common = [&](CLI::App* c, bool with_finder) {
    if (with_finder) {
      c->add_option("--seed", flags.seed, "model-search tie-breaking seed")
          ->envname("TREECERT_SEED");
      c->add_option("--k-max", flags.k_max, "largest domain size to try")
          ->envname("TREECERT_K_MAX");
      c->add_option("--time-budget", flags.time_budget,
                    "model-search budget in seconds")
          ->envname("TREECERT_TIME_BUDGET");
    }
    c->add_option("--oracle-bound", flags.oracle_bound,
                  "max nodes of seeded initial trees (default 7, or 15 for "
                  "rewrite systems)")
        ->envname("TREECERT_ORACLE_BOUND");
    c->add_flag("--json", flags.json, "machine-readable output")
        ->envname("TREECERT_JSON");
    c->add_flag("--parallel", flags.parallel,
                "expand reachability frontiers across threads")
        ->envname("TREECERT_PARALLEL");
  };

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "decide safe/unsafe/unknown");
  verify_cmd->add_option("file", file, "problem file")->required();
  add_common(verify_cmd, true);

  CLI::App* emit_cmd =
      app.add_subcommand("emit", "print the first-order encoding");
  emit_cmd->add_option("file", file, "problem file")->required();

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "bounded explicit-state reachability");
  oracle_cmd->add_option("file", file, "problem file")->required();
  oracle_cmd
      ->add_option("--bound", flags.oracle_bound,
                   "max nodes of seeded initial trees")
      ->envname("TREECERT_ORACLE_BOUND");
  oracle_cmd->add_flag("--json", flags.json, "machine-readable output")
      ->envname("TREECERT_JSON");
  oracle_cmd
      ->add_flag("--parallel", flags.parallel,
                 "expand reachability frontiers across threads")
      ->envname("TREECERT_PARALLEL");

  CLI::App* check_cmd =
      app.add_subcommand("check-model", "re-validate a saved model");
  check_cmd->add_option("file", file, "problem file")->required();
  check_cmd->add_option("model", model_path, "model file")->required();

  CLI::App* bench_cmd =
      app.add_subcommand("bench", "verify every problem in a directory");
  bench_cmd->add_option("dir", dir, "directory of problem files")->required();
  add_common(bench_cmd, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify_cmd->parsed()) return cmd_verify(file, flags);
    if (emit_cmd->parsed()) return cmd_emit(file);
    if (oracle_cmd->parsed()) return cmd_oracle(file, flags);
    if (check_cmd->parsed()) return cmd_check_model(file, model_path);
    if (bench_cmd->parsed()) return cmd_bench(dir, flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::SoundnessFault:
      case ErrorKind::Internal:
        return 1;
      default:
        return kExitInput;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
