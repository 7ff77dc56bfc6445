#include "treecert/json_io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "treecert/encode.hpp"
#include "treecert/translate.hpp"

namespace treecert {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::InputError,
              (path.empty() ? "/" : path) + ": " + msg);
}

std::string item(const std::string& path, size_t i) {
  return path + "/" + std::to_string(i);
}

const json& need(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing \"") + key + "\"");
  return *it;
}

const json* get(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void need_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void need_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
}

std::string need_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

uint32_t need_uint(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a non-negative integer");
  uint64_t v = j.get<uint64_t>();
  if (v > UINT32_MAX) fail(path, "integer out of range");
  return static_cast<uint32_t>(v);
}

bool need_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

// Unknown keys are rejected so that a typo ("finls") cannot silently turn
// into an automaton with no accepting states.
void only_keys(const json& obj, std::initializer_list<const char*> keys,
               const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(path, "unknown key \"" + it.key() + "\"");
  }
}

void load_states_finals(const json& j, TreeAutomaton& a,
                        const std::string& path) {
  const json& st = need(j, "states", path);
  need_array(st, path + "/states");
  for (size_t i = 0; i < st.size(); ++i) {
    std::string name = need_string(st[i], item(path + "/states", i));
    if (a.find_state(name))
      fail(item(path + "/states", i), "duplicate state \"" + name + "\"");
    a.add_state(name);
  }
  const json& fi = need(j, "finals", path);
  need_array(fi, path + "/finals");
  for (size_t i = 0; i < fi.size(); ++i) {
    std::string name = need_string(fi[i], item(path + "/finals", i));
    auto q = a.find_state(name);
    if (!q) fail(item(path + "/finals", i), "unknown state \"" + name + "\"");
    a.mark_final(*q);
  }
}

std::vector<uint32_t> load_lhs(const json& r, const TreeAutomaton& a,
                               uint32_t arity, const std::string& rpath) {
  const json& lhs = need(r, "lhs", rpath);
  need_array(lhs, rpath + "/lhs");
  if (lhs.size() != arity)
    fail(rpath + "/lhs", "expected " + std::to_string(arity) +
                             " states for an arity-" + std::to_string(arity) +
                             " symbol, got " + std::to_string(lhs.size()));
  std::vector<uint32_t> out;
  for (size_t i = 0; i < lhs.size(); ++i) {
    std::string name = need_string(lhs[i], item(rpath + "/lhs", i));
    auto q = a.find_state(name);
    if (!q) fail(item(rpath + "/lhs", i), "unknown state \"" + name + "\"");
    out.push_back(*q);
  }
  return out;
}

uint32_t load_rhs(const json& r, const TreeAutomaton& a,
                  const std::string& rpath) {
  std::string name = need_string(need(r, "rhs", rpath), rpath + "/rhs");
  auto q = a.find_state(name);
  if (!q) fail(rpath + "/rhs", "unknown state \"" + name + "\"");
  return *q;
}

TreeAutomaton load_automaton(const json& j, const RankedAlphabet& alpha,
                             const std::string& path) {
  need_object(j, path);
  only_keys(j, {"states", "finals", "rules"}, path);
  TreeAutomaton a;
  load_states_finals(j, a, path);
  const json& rules = need(j, "rules", path);
  need_array(rules, path + "/rules");
  for (size_t i = 0; i < rules.size(); ++i) {
    std::string rpath = item(path + "/rules", i);
    const json& r = rules[i];
    need_object(r, rpath);
    only_keys(r, {"symbol", "lhs", "rhs"}, rpath);
    std::string sym = need_string(need(r, "symbol", rpath), rpath + "/symbol");
    auto s = alpha.find(sym);
    if (!s) fail(rpath + "/symbol", "unknown symbol \"" + sym + "\"");
    a.add_rule(*s, load_lhs(r, a, alpha.arity(*s), rpath), load_rhs(r, a, rpath));
  }
  return a;
}

void load_transducer(const json& j, TreeTransducer& td,
                     const std::string& path) {
  need_object(j, path);
  only_keys(j, {"states", "finals", "rules"}, path);
  TreeAutomaton& m = td.machine();
  load_states_finals(j, m, path);
  const json& rules = need(j, "rules", path);
  need_array(rules, path + "/rules");
  for (size_t i = 0; i < rules.size(); ++i) {
    std::string rpath = item(path + "/rules", i);
    const json& r = rules[i];
    need_object(r, rpath);
    only_keys(r, {"symbol", "lhs", "rhs"}, rpath);
    const json& sym = need(r, "symbol", rpath);
    need_array(sym, rpath + "/symbol");
    if (sym.size() != 2)
      fail(rpath + "/symbol", "expected a pair of symbol names");
    uint32_t comp[2];
    for (size_t c = 0; c < 2; ++c) {
      std::string name = need_string(sym[c], item(rpath + "/symbol", c));
      auto s = td.base().find(name);
      if (!s)
        fail(item(rpath + "/symbol", c), "unknown symbol \"" + name + "\"");
      comp[c] = *s;
    }
    uint32_t pair;
    try {
      pair = td.pair_symbol(comp[0], comp[1]);
    } catch (const Error& e) {
      fail(rpath + "/symbol", e.what());
    }
    m.add_rule(pair, load_lhs(r, m, td.base().arity(comp[0]), rpath),
               load_rhs(r, m, rpath));
  }
}

void load_rtmc(const json& root, LoadedProblem& out) {
  only_keys(root,
            {"kind", "name", "notes", "alphabet", "init", "unsafe",
             "transducer", "options"},
            "");
  const json& al = need(root, "alphabet", "");
  need_array(al, "/alphabet");
  RankedAlphabet alpha;
  for (size_t i = 0; i < al.size(); ++i) {
    std::string epath = item("/alphabet", i);
    const json& e = al[i];
    need_object(e, epath);
    only_keys(e, {"symbol", "arity"}, epath);
    std::string name =
        need_string(need(e, "symbol", epath), epath + "/symbol");
    if (alpha.find(name))
      fail(epath + "/symbol", "duplicate symbol \"" + name + "\"");
    alpha.add(name, need_uint(need(e, "arity", epath), epath + "/arity"));
  }
  out.rtmc.emplace(std::move(alpha));
  RtmcProblem& p = *out.rtmc;
  p.init = load_automaton(need(root, "init", ""), p.alphabet, "/init");
  p.unsafe = load_automaton(need(root, "unsafe", ""), p.alphabet, "/unsafe");
  load_transducer(need(root, "transducer", ""), p.transducer, "/transducer");
  if (const json* opts = get(root, "options")) {
    need_object(*opts, "/options");
    only_keys(*opts, {"share_state_constants"}, "/options");
    if (const json* b = get(*opts, "share_state_constants"))
      out.rtmc_options.share_state_constants =
          need_bool(*b, "/options/share_state_constants");
  }
}

RuleTree load_rule_node(const json& j, const RewriteSystem& sys,
                        const std::string& path) {
  need_object(j, path);
  only_keys(j, {"pair", "children"}, path);
  const json& pr = need(j, "pair", path);
  need_array(pr, path + "/pair");
  if (pr.size() != 2) fail(path + "/pair", "expected a pair of state names");
  RuleTree node;
  uint32_t* slots[2] = {&node.left, &node.right};
  for (size_t c = 0; c < 2; ++c) {
    std::string name = need_string(pr[c], item(path + "/pair", c));
    auto q = sys.find_state(name);
    if (!q) fail(item(path + "/pair", c), "unknown state \"" + name + "\"");
    *slots[c] = *q;
  }
  if (const json* ch = get(j, "children")) {
    need_array(*ch, path + "/children");
    if (ch->size() > 2)
      fail(path + "/children", "a rule node may have at most 2 children");
    for (size_t c = 0; c < ch->size(); ++c)
      node.children.push_back(
          load_rule_node((*ch)[c], sys, item(path + "/children", c)));
  }
  return node;
}

StateTree load_pattern(const std::string& text, const RewriteSystem& sys,
                       const std::string& path) {
  RawTree raw;
  try {
    raw = parse_raw_tree(text);
  } catch (const Error& e) {
    fail(path, e.what());
  }
  std::function<StateTree(const RawTree&)> build = [&](const RawTree& r) {
    auto q = sys.find_state(r.label);
    if (!q) fail(path, "unknown state \"" + r.label + "\"");
    if (r.children.size() > 2)
      fail(path, "a pattern node may have at most 2 children");
    StateTree t(*q);
    for (const RawTree& c : r.children) t.children.push_back(build(c));
    return t;
  };
  return build(raw);
}

void load_pts(const json& root, LoadedProblem& out) {
  only_keys(root,
            {"kind", "name", "notes", "states", "rules", "init",
             "unsafe_generators", "unsafe", "options"},
            "");
  const json& st = need(root, "states", "");
  need_array(st, "/states");
  if (st.empty()) fail("/states", "expected at least one state");
  RewriteSystem sys;
  for (size_t i = 0; i < st.size(); ++i) {
    std::string name = need_string(st[i], item("/states", i));
    if (sys.find_state(name))
      fail(item("/states", i), "duplicate state \"" + name + "\"");
    sys.add_state(name);
  }
  const json& rules = need(root, "rules", "");
  need_array(rules, "/rules");
  for (size_t i = 0; i < rules.size(); ++i)
    sys.add_rule(load_rule_node(rules[i], sys, item("/rules", i)));

  out.pts.emplace(std::move(sys));
  PtsProblem& p = *out.pts;
  p.init = load_automaton(need(root, "init", ""), p.fq, "/init");

  const json* gens = get(root, "unsafe_generators");
  const json* machine = get(root, "unsafe");
  if (!!gens == !!machine)
    fail("", "give exactly one of \"unsafe_generators\" and \"unsafe\"");
  if (gens) {
    need_array(*gens, "/unsafe_generators");
    if (gens->empty())
      fail("/unsafe_generators", "expected at least one pattern");
    for (size_t i = 0; i < gens->size(); ++i) {
      std::string gpath = item("/unsafe_generators", i);
      p.unsafe_generators.push_back(
          load_pattern(need_string((*gens)[i], gpath), p.system, gpath));
    }
  } else {
    p.unsafe_automaton = load_automaton(*machine, p.fq, "/unsafe");
  }
  if (const json* opts = get(root, "options")) {
    need_object(*opts, "/options");
    only_keys(*opts, {"merge_unique_final"}, "/options");
    if (const json* b = get(*opts, "merge_unique_final"))
      out.pts_options.merge_unique_final =
          need_bool(*b, "/options/merge_unique_final");
  }
}

}  // namespace

LoadedProblem load_problem_text(const std::string& text,
                                const std::string& name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  need_object(root, "");

  LoadedProblem out;
  out.name = name;
  if (const json* n = get(root, "name")) out.name = need_string(*n, "/name");
  if (const json* notes = get(root, "notes")) {
    need_array(*notes, "/notes");
    for (size_t i = 0; i < notes->size(); ++i)
      out.notes.push_back(need_string((*notes)[i], item("/notes", i)));
  }

  out.kind = need_string(need(root, "kind", ""), "/kind");
  if (out.kind == "rtmc")
    load_rtmc(root, out);
  else if (out.kind == "pts")
    load_pts(root, out);
  else
    fail("/kind", "expected \"rtmc\" or \"pts\"");

  // Structural backstop (arity bookkeeping, unsafe-set shape); the checks
  // above should have caught everything with a more precise path already.
  if (out.rtmc) validate_problem(*out.rtmc);
  if (out.pts) validate_problem(*out.pts);
  return out;
}

LoadedProblem load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InputError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  if (auto pos = stem.find_last_of("/\\"); pos != std::string::npos)
    stem = stem.substr(pos + 1);
  if (auto pos = stem.rfind('.'); pos != std::string::npos)
    stem = stem.substr(0, pos);
  try {
    return load_problem_text(buf.str(), stem);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

Theory encode_loaded(const LoadedProblem& p) {
  if (p.rtmc) return encode_rtmc(*p.rtmc, p.rtmc_options).theory;
  return encode_pts(*p.pts, p.pts_options).theory;
}

std::string report_json(const ReportInput& in) {
  const Verdict& v = *in.verdict;
  json j;
  j["problem"] = in.problem;
  j["kind"] = in.kind;
  j["verdict"] = verdict_name(v.kind);
  if (!in.model_text.empty()) {
    j["model"] = in.model_text;
    j["model_size"] = v.model_size;
  } else {
    j["model"] = nullptr;
  }
  if (!v.trace_text.empty()) {
    json lines = json::array();
    std::istringstream ts(v.trace_text);
    for (std::string line; std::getline(ts, line);) lines.push_back(line);
    j["trace"] = lines;
    j["trace_length"] = v.trace_length;
  } else {
    j["trace"] = nullptr;
  }
  json stats;
  stats["k"] = v.finder_k;
  stats["ground_clauses"] = v.ground_clauses;
  stats["seconds"] = v.seconds;
  stats["oracle_bound"] = in.oracle_bound;
  stats["finder_status"] = v.finder_status;
  stats["oracle_status"] = v.oracle_status;
  j["statistics"] = stats;
  return j.dump(2) + "\n";
}

}  // namespace treecert
