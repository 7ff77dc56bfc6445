#include "treecert/trees.hpp"

#include <cctype>

namespace treecert {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::IncompleteTree: return "IncompleteTree";
    case ErrorKind::InconsistentPair: return "InconsistentPair";
    case ErrorKind::NonBinaryRule: return "NonBinaryRule";
    case ErrorKind::UnassignedVariable: return "UnassignedVariable";
    case ErrorKind::UndeclaredSymbol: return "UndeclaredSymbol";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::NotDeterministic: return "NotDeterministic";
    case ErrorKind::InputError: return "InputError";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::SoundnessFault: return "SoundnessFault";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

uint32_t SymbolTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<uint32_t> SymbolTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& SymbolTable::name(uint32_t id) const {
  if (id >= names_.size())
    throw Error(ErrorKind::UndeclaredSymbol, "symbol id out of range");
  return names_[id];
}

uint32_t RankedAlphabet::add(std::string_view name, uint32_t arity) {
  if (auto old = table_.find(name)) {
    if (arity_[*old] != arity)
      throw Error(ErrorKind::ArityMismatch,
                  "symbol '" + std::string(name) + "' re-declared with arity " +
                      std::to_string(arity) + " (was " + std::to_string(arity_[*old]) + ")");
    return *old;
  }
  uint32_t id = table_.intern(name);
  arity_.push_back(arity);
  return id;
}

std::optional<uint32_t> RankedAlphabet::find(std::string_view name) const {
  return table_.find(name);
}

uint32_t RankedAlphabet::id(std::string_view name) const {
  if (auto v = table_.find(name)) return *v;
  throw Error(ErrorKind::UndeclaredSymbol,
              "symbol '" + std::string(name) + "' not in alphabet");
}

const std::string& RankedAlphabet::name(uint32_t id) const { return table_.name(id); }

uint32_t RankedAlphabet::arity(uint32_t id) const {
  if (id >= arity_.size())
    throw Error(ErrorKind::UndeclaredSymbol, "symbol id out of range");
  return arity_[id];
}

std::vector<uint32_t> RankedAlphabet::symbols_of_arity(uint32_t p) const {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < size(); ++i)
    if (arity_[i] == p) out.push_back(i);
  return out;
}

bool RankedAlphabet::has_nullary() const {
  for (uint32_t a : arity_)
    if (a == 0) return true;
  return false;
}

namespace {

struct RawParser {
  std::string_view s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorKind::Parse, msg + " at offset " + std::to_string(pos) + " in '" +
                                      std::string(s) + "'");
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (pos == start) fail("expected identifier");
    return std::string(s.substr(start, pos - start));
  }

  RawTree tree() {
    RawTree t;
    t.label = ident();
    skip_ws();
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      t.children.push_back(tree());
      skip_ws();
      while (pos < s.size() && s[pos] == ',') {
        ++pos;
        t.children.push_back(tree());
        skip_ws();
      }
      if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
      ++pos;
    }
    return t;
  }
};

}  // namespace

RawTree parse_raw_tree(std::string_view text) {
  RawParser p{text};
  RawTree t = p.tree();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return t;
}

std::string print_tree(const Tree& t, const RankedAlphabet& alpha) {
  return print_tree<SymbolLabelTag>(
      t, [&alpha](uint32_t id) -> const std::string& { return alpha.name(id); });
}

namespace {

void validate_arities(const Tree& t, const RankedAlphabet& alpha) {
  if (alpha.arity(t.label) != t.children.size())
    throw Error(ErrorKind::ArityMismatch,
                "symbol '" + alpha.name(t.label) + "' has arity " +
                    std::to_string(alpha.arity(t.label)) + " but " +
                    std::to_string(t.children.size()) + " children");
  for (const auto& c : t.children) validate_arities(c, alpha);
}

}  // namespace

Tree parse_tree(std::string_view text, const RankedAlphabet& alpha) {
  RawTree raw = parse_raw_tree(text);
  Tree t = map_raw_tree<SymbolLabelTag>(
      raw, [&alpha](const std::string& n) { return alpha.id(n); });
  validate_arities(t, alpha);
  return t;
}

std::string tuple_symbol_name(std::span<const uint32_t> labels, const RankedAlphabet& base) {
  std::string name = "(";
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i) name += ',';
    name += base.name(labels[i]);
  }
  name += ')';
  return name;
}

namespace {

Tree product_rec(std::span<const Tree* const> nodes, const RankedAlphabet& base,
                 RankedAlphabet& out) {
  size_t nchildren = nodes[0]->children.size();
  uint32_t arity = base.arity(nodes[0]->label);
  std::vector<uint32_t> labels;
  labels.reserve(nodes.size());
  for (const Tree* n : nodes) {
    if (n->children.size() != nchildren)
      throw Error(ErrorKind::ShapeMismatch, "product inputs differ in shape");
    if (base.arity(n->label) != arity)
      throw Error(ErrorKind::ArityMismatch,
                  "product labels '" + base.name(nodes[0]->label) + "' and '" +
                      base.name(n->label) + "' differ in arity");
    labels.push_back(n->label);
  }
  Tree result(out.add(tuple_symbol_name(labels, base), arity));
  result.children.reserve(nchildren);
  std::vector<const Tree*> col(nodes.size());
  for (size_t i = 0; i < nchildren; ++i) {
    for (size_t j = 0; j < nodes.size(); ++j) col[j] = &nodes[j]->children[i];
    result.children.push_back(product_rec(col, base, out));
  }
  return result;
}

}  // namespace

Tree product(std::span<const Tree> ts, const RankedAlphabet& base, RankedAlphabet& out) {
  if (ts.empty()) throw Error(ErrorKind::InputError, "product of zero trees");
  std::vector<const Tree*> ptrs;
  ptrs.reserve(ts.size());
  for (const Tree& t : ts) ptrs.push_back(&t);
  return product_rec(ptrs, base, out);
}

Tree product_project(const Tree& prod, size_t i, const RankedAlphabet& prod_alpha,
                     const RankedAlphabet& base) {
  // Tuple names are "(a,b,...)"; split on commas at depth 0 of the name.
  const std::string& nm = prod_alpha.name(prod.label);
  if (nm.size() < 2 || nm.front() != '(' || nm.back() != ')')
    throw Error(ErrorKind::InputError, "not a tuple symbol: " + nm);
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (size_t p = 1; p + 1 < nm.size(); ++p) {
    char c = nm[p];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (i >= parts.size())
    throw Error(ErrorKind::InputError, "tuple index out of range for " + nm);
  Tree t(base.id(parts[i]));
  t.children.reserve(prod.children.size());
  for (const auto& c : prod.children)
    t.children.push_back(product_project(c, i, prod_alpha, base));
  return t;
}

}  // namespace treecert
