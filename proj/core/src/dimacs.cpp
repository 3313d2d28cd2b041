#include "sublin/dimacs.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sublin/errors.hpp"

namespace sublin {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::int64_t parse_int(std::string_view token, std::size_t line_no) {
  std::int64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw InputError("line " + std::to_string(line_no) + ": expected integer, got '" + std::string(token) + "'");
  }
  return value;
}

template <class F>
void for_each_token(std::string_view line, F&& f) {
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) f(line.substr(i, j - i));
    i = j;
  }
}

}  // namespace

ParseResult parse_dimacs(std::string_view text) {
  bool have_header = false;
  std::int64_t declared_vars = 0;
  std::int64_t declared_clauses = 0;
  std::vector<std::vector<Literal>> clauses;
  std::vector<Literal> current;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    std::size_t first = 0;
    while (first < line.size() && is_space(line[first])) ++first;
    if (first == line.size()) continue;
    const char lead = line[first];
    if (lead == 'c') continue;
    if (lead == '%') break;
    if (lead == 'p') {
      if (have_header) throw InputError("line " + std::to_string(line_no) + ": duplicate header");
      std::vector<std::string_view> tokens;
      for_each_token(line, [&](std::string_view t) { tokens.push_back(t); });
      if (tokens.size() != 4 || tokens[0] != "p" || tokens[1] != "cnf") {
        throw InputError("line " + std::to_string(line_no) + ": malformed header, expected 'p cnf <n> <m>'");
      }
      declared_vars = parse_int(tokens[2], line_no);
      declared_clauses = parse_int(tokens[3], line_no);
      if (declared_vars < 0 || declared_clauses < 0 || declared_vars > (1ll << 30)) {
        throw InputError("line " + std::to_string(line_no) + ": malformed header counts");
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw InputError("line " + std::to_string(line_no) + ": clause data before header");

    for_each_token(line, [&](std::string_view token) {
      const std::int64_t lit = parse_int(token, line_no);
      if (lit == 0) {
        clauses.push_back(std::move(current));
        current.clear();
        return;
      }
      if (lit > declared_vars || -lit > declared_vars) {
        throw InputError("literal " + std::to_string(lit) + " out of range in clause " +
                         std::to_string(clauses.size() + 1));
      }
      current.push_back(Literal::from_dimacs(lit));
    });
  }
  if (!have_header) throw InputError("missing 'p cnf' header");

  ParseResult result;
  if (!current.empty()) {
    result.warnings.push_back("last clause not terminated by 0; accepted");
    clauses.push_back(std::move(current));
  }
  if (static_cast<std::int64_t>(clauses.size()) != declared_clauses) {
    result.warnings.push_back("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                              std::to_string(clauses.size()));
  }
  result.formula = Formula(static_cast<Var>(declared_vars), clauses);
  return result;
}

ParseResult read_dimacs_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dimacs(buffer.str());
}

std::string serialize_dimacs(const Formula& formula, const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) {
    out += "c ";
    out += c;
    out += '\n';
  }
  out += "p cnf " + std::to_string(formula.num_vars()) + " " + std::to_string(formula.num_clauses()) + "\n";
  for (ClauseIndex j = 0; j < formula.num_clauses(); ++j) {
    for (Literal lit : formula.clause(j)) {
      out += std::to_string(lit.dimacs());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

std::string format_assignment_line(const Assignment& phi) {
  std::string out = "v";
  for (Var v = 1; v <= phi.size(); ++v) {
    if (!phi.is_set(v)) continue;
    out += ' ';
    if (!phi.value(v)) out += '-';
    out += std::to_string(v);
  }
  out += " 0";
  return out;
}

Assignment parse_assignment_line(std::string_view line, Var num_vars) {
  Assignment phi(num_vars);
  bool first = true;
  bool terminated = false;
  for_each_token(line, [&](std::string_view token) {
    if (first) {
      first = false;
      if (token != "v") throw InputError("assignment line must start with 'v'");
      return;
    }
    if (terminated) throw InputError("tokens after terminating 0");
    const std::int64_t lit = parse_int(token, 1);
    if (lit == 0) {
      terminated = true;
      return;
    }
    const auto l = Literal::from_dimacs(lit);
    if (l.var() < 1 || l.var() > num_vars) throw InputError("assignment literal out of range");
    phi.set(l.var(), !l.negative());
  });
  if (!terminated) throw InputError("assignment line not terminated by 0");
  return phi;
}

}  // namespace sublin
