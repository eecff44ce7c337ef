#include "hamsolve/problem_file.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "hamsolve/benchmarks.hpp"
#include "hamsolve/errors.hpp"

namespace hamsolve {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

class Reader {
 public:
  Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ParseError(source_ + ":" + std::to_string(line) + ": " + msg, line);
  }

  Expr expr(const Entry& e) const {
    try {
      return parse_expr(e.value);
    } catch (const ParseError& err) {
      fail(e.line, err.what());
    }
  }

  double number(const Entry& e) const {
    const Expr x = expr(e);
    if (x.depends_on_u() || x.depends_on_r()) fail(e.line, "expected a constant, got '" + e.value + "'");
    try {
      return eval_expr(x, PointValues{});
    } catch (const Error& err) {
      fail(e.line, err.what());
    }
  }

  int integer(const Entry& e) const {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(e.value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != e.value.size()) fail(e.line, "expected an integer, got '" + e.value + "'");
    return v;
  }

 private:
  std::string source_;
};

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"domain", {"a", "b", "grid", "n"}},
      {"operator", {"L.c0", "L.c1", "L.c2", "L.c3", "L.c4", "N", "s"}},
      {"bcs", {}},
      {"ham", {"lopt", "lopt.c0", "lopt.c1", "lopt.c2", "lopt.c3", "lopt.c4", "hbar", "H", "M"}},
      {"exact", {"u"}},
  };
  return keys;
}

// left.u'' -> (Left, 2)
bool parse_bc_key(const std::string& key, BoundaryCondition& bc) {
  std::string rest;
  if (key.rfind("left.", 0) == 0) {
    bc.side = Side::Left;
    rest = key.substr(5);
  } else if (key.rfind("right.", 0) == 0) {
    bc.side = Side::Right;
    rest = key.substr(6);
  } else {
    return false;
  }
  if (rest.empty() || rest[0] != 'u') return false;
  for (std::size_t i = 1; i < rest.size(); ++i) {
    if (rest[i] != '\'') return false;
  }
  bc.derivative_order = static_cast<int>(rest.size()) - 1;
  return bc.derivative_order <= kMaxDerivativeOrder;
}

// Coefficients prefix.c0 .. prefix.c4; empty when none is given.
std::optional<LinearOperator> coefficient_operator(const Reader& rd, const Section& sec, const std::string& prefix,
                                                   int header_line) {
  std::vector<Expr> coeffs;
  int top = -1;
  for (int k = 0; k <= kMaxDerivativeOrder; ++k) {
    if (sec.count(prefix + ".c" + std::to_string(k))) top = k;
  }
  if (top < 0) return std::nullopt;
  for (int k = 0; k <= top; ++k) {
    const auto it = sec.find(prefix + ".c" + std::to_string(k));
    coeffs.push_back(it == sec.end() ? Expr::constant(0.0) : rd.expr(it->second));
  }
  try {
    return LinearOperator(std::move(coeffs));
  } catch (const Error& err) {
    rd.fail(header_line, err.what());
  }
}

}  // namespace

LoadedProblem parse_problem_text(std::string_view text, const std::string& source_name) {
  const Reader rd(source_name);
  std::map<std::string, Section> sections;
  std::map<std::string, int> section_lines;
  std::vector<std::pair<BoundaryCondition, int>> bc_entries;
  std::string current;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') rd.fail(line_no, "unterminated section header");
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known_keys().count(current)) rd.fail(line_no, "unknown section [" + current + "]");
      if (section_lines.count(current)) rd.fail(line_no, "duplicate section [" + current + "]");
      section_lines[current] = line_no;
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) rd.fail(line_no, "expected key = value");
    if (current.empty()) rd.fail(line_no, "key outside of any section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) rd.fail(line_no, "empty key");
    if (value.empty()) rd.fail(line_no, "empty value for '" + key + "'");
    if (current == "bcs") {
      BoundaryCondition bc;
      if (!parse_bc_key(key, bc)) rd.fail(line_no, "boundary key must look like left.u or right.u', got '" + key + "'");
      bc.value = rd.number(Entry{value, line_no});
      for (const auto& [prev, where] : bc_entries) {
        if (prev.side == bc.side && prev.derivative_order == bc.derivative_order) {
          rd.fail(line_no, "duplicate boundary condition '" + key + "' (first on line " + std::to_string(where) + ")");
        }
      }
      bc_entries.emplace_back(bc, line_no);
      continue;
    }
    const auto& allowed = known_keys().at(current);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      rd.fail(line_no, "unknown key '" + key + "' in [" + current + "]");
    }
    Section& sec = sections[current];
    if (sec.count(key)) rd.fail(line_no, "duplicate key '" + key + "'");
    sec[key] = Entry{value, line_no};
  }

  for (const char* required : {"domain", "operator", "bcs"}) {
    if (!sections.count(required)) rd.fail(line_no, std::string("missing section [") + required + "]");
  }

  LoadedProblem out;
  ProblemSpec& spec = out.spec;
  spec.name = source_name;

  const Section& dom = sections["domain"];
  const int dom_line = section_lines["domain"];
  auto need = [&](const Section& sec, const std::string& key, const std::string& where, int header) -> const Entry& {
    const auto it = sec.find(key);
    if (it == sec.end()) rd.fail(header, "[" + where + "] is missing '" + key + "'");
    return it->second;
  };
  spec.grid.a = rd.number(need(dom, "a", "domain", dom_line));
  spec.grid.b = rd.number(need(dom, "b", "domain", dom_line));
  if (dom.count("grid")) {
    try {
      spec.grid.kind = parse_grid_kind(dom.at("grid").value);
    } catch (const Error& err) {
      rd.fail(dom.at("grid").line, err.what());
    }
  }
  if (dom.count("n")) spec.grid.n = rd.integer(dom.at("n"));

  const Section& op = sections["operator"];
  const int op_line = section_lines["operator"];
  auto linear = coefficient_operator(rd, op, "L", op_line);
  if (!linear) rd.fail(op_line, "[operator] needs at least one coefficient L.c0 .. L.c4");
  spec.linear = std::move(*linear);
  spec.nonlinear = op.count("N") ? rd.expr(op.at("N")) : Expr::constant(0.0);
  spec.source = op.count("s") ? rd.expr(op.at("s")) : Expr::constant(0.0);

  for (const auto& [bc, where] : bc_entries) spec.bcs.push_back(bc);

  if (sections.count("exact")) {
    const Section& ex = sections["exact"];
    spec.exact = rd.expr(need(ex, "u", "exact", section_lines["exact"]));
  }

  try {
    spec.validate();
  } catch (const ConfigError& err) {
    rd.fail(op_line, err.what());
  }

  if (sections.count("ham")) {
    const Section& ham = sections["ham"];
    const int ham_line = section_lines["ham"];
    LoptMode mode = LoptMode::UseL;
    if (ham.count("lopt")) {
      try {
        mode = parse_lopt_mode(ham.at("lopt").value);
      } catch (const Error& err) {
        rd.fail(ham.at("lopt").line, err.what());
      }
    }
    auto user = coefficient_operator(rd, ham, "lopt", ham_line);
    if (mode == LoptMode::User && !user) rd.fail(ham_line, "lopt = file needs coefficients lopt.c0 .. lopt.c4");
    if (mode != LoptMode::User && user) rd.fail(ham_line, "lopt.cK coefficients are only used with lopt = file");
    const double hbar = ham.count("hbar") ? rd.number(ham.at("hbar")) : -1.0;
    const Expr aux = ham.count("H") ? rd.expr(ham.at("H")) : Expr::constant(1.0);
    const int order = ham.count("M") ? rd.integer(ham.at("M")) : 10;
    try {
      out.config = HamConfig(mode, hbar, aux, order, user);
    } catch (const ConfigError& err) {
      rd.fail(ham_line, err.what());
    }
  }
  return out;
}

LoadedProblem load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open problem file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  LoadedProblem p = parse_problem_text(buf.str(), path.string());
  p.spec.name = path.stem().string();
  return p;
}

LoadedProblem load_problem(const std::string& source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) {
    BenchmarkCase c = find_case(source.substr(prefix.size()));
    LoadedProblem p{std::move(c.spec), default_config()};
    return p;
  }
  return load_problem_file(source);
}

}  // namespace hamsolve
