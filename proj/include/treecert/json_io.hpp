#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treecert/finder.hpp"

namespace treecert {

// A problem file parsed into memory.  Exactly one of rtmc/pts is set,
// matching the file's "kind"; encoding options and free-form notes ride
// along so callers can thread them through without reopening the file.
struct LoadedProblem {
  std::string name;  // "name" field, else the file stem
  std::string kind;  // "rtmc" or "pts"
  std::vector<std::string> notes;
  std::optional<RtmcProblem> rtmc;
  std::optional<PtsProblem> pts;
  RtmcEncodeOptions rtmc_options;
  PtsEncodeOptions pts_options;
};

// Parse problem JSON.  Schema violations throw Error(InputError) whose
// message starts with a JSON pointer into the document ("/init/rules/3");
// malformed JSON throws Error(Parse).
LoadedProblem load_problem_text(const std::string& text,
                                const std::string& name = "");
LoadedProblem load_problem_file(const std::string& path);

// Encode whichever problem the file holds (convenience for the tools).
Theory encode_loaded(const LoadedProblem& p);

// Machine-readable verdict report.  The model is embedded in its stable
// text form so it can be re-parsed and re-checked independently.
struct ReportInput {
  std::string problem;
  std::string kind;
  const Verdict* verdict = nullptr;
  std::string model_text;  // empty when there is no model
  uint32_t oracle_bound = 0;
};

std::string report_json(const ReportInput& in);

}  // namespace treecert
