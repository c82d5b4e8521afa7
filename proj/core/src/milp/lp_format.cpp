#include "bessbid/milp/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bessbid/error.hpp"
#include "../text_util.hpp"

namespace bessbid::milp {

using detail::format_double;

namespace {

constexpr std::size_t kWrapColumn = 200;

bool valid_name(std::string_view s) {
  if (s.empty() || s.size() > 255) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  }
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower != "free" && lower != "inf" && lower != "infinity" && lower != "st" &&
         lower != "end" && lower != "bounds" && lower != "binaries" && lower != "generals";
}

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

class LineWriter {
 public:
  explicit LineWriter(std::string& out) : out_(out) {}
  void start(std::string_view head) {
    line_.assign(head);
  }
  void piece(std::string_view s) {
    if (line_.size() + s.size() > kWrapColumn && line_.size() > 1) {
      out_ += line_;
      out_ += '\n';
      line_ = " ";
      if (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    }
    line_ += s;
  }
  void finish() {
    out_ += line_;
    out_ += '\n';
    line_.clear();
  }

 private:
  std::string& out_;
  std::string line_;
};

void write_terms(LineWriter& w, const LinearProgram& lp, std::span<const Term> terms,
                 bool keep_zeros) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef == 0.0 && !keep_zeros) continue;
    const auto& name = lp.col_name(t.col);
    std::string s;
    const double a = std::abs(t.coef);
    const bool negative = std::signbit(t.coef);
    if (first) {
      s = " ";
      if (negative) s += "- ";
    } else {
      s = negative ? " - " : " + ";
    }
    if (a != 1.0) s += number(a) + " ";
    s += name;
    w.piece(s);
    first = false;
  }
  if (first) w.piece(" 0 " + lp.col_name(0));
}

}  // namespace

void validate_lp_names(const LinearProgram& lp) {
  std::unordered_set<std::string> seen;
  for (int j = 0; j < lp.num_cols(); ++j) {
    const auto& name = lp.col_name(j);
    if (!valid_name(name)) throw SolverError("invalid LP column name '" + name + "'");
    if (!seen.insert(name).second) throw SolverError("duplicate LP column name '" + name + "'");
  }
  std::unordered_set<std::string> rows;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& name = lp.row_name(i);
    if (!valid_name(name)) throw SolverError("invalid LP row name '" + name + "'");
    if (name == "obj") throw SolverError("row name 'obj' is reserved for the objective");
    if (!rows.insert(name).second) throw SolverError("duplicate LP row name '" + name + "'");
  }
}

std::string export_lp_text(const LinearProgram& lp) {
  if (lp.num_cols() == 0) throw SolverError("cannot export an LP without columns");
  validate_lp_names(lp);
  std::string out;
  LineWriter w(out);
  out += lp.sense == ObjectiveSense::Maximize ? "Maximize\n" : "Minimize\n";
  std::vector<Term> obj;
  for (int j = 0; j < lp.num_cols(); ++j) obj.push_back({j, lp.objective(j)});
  w.start(" obj:");
  write_terms(w, lp, obj, true);
  w.finish();

  out += "Subject To\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    w.start(" " + lp.row_name(i) + ":");
    write_terms(w, lp, lp.row(i), false);
    const char* op = lp.row_sense(i) == RowSense::LessEqual   ? " <= "
                     : lp.row_sense(i) == RowSense::Equal     ? " = "
                                                              : " >= ";
    w.piece(op + number(lp.rhs(i)));
    w.finish();
  }

  std::vector<std::string> bounds, binaries, generals;
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double lo = lp.col_lower(j), hi = lp.col_upper(j);
    const auto& name = lp.col_name(j);
    if (lp.is_integer(j)) {
      if (lo == 0.0 && hi == 1.0 && !std::signbit(lo)) {
        binaries.push_back(name);
        continue;
      }
      generals.push_back(name);
    }
    if (lo == 0.0 && !std::signbit(lo) && std::isinf(hi) && hi > 0) continue;
    if (lo == hi) {
      bounds.push_back(" " + name + " = " + number(lo));
    } else if (std::isinf(lo) && std::isinf(hi)) {
      bounds.push_back(" " + name + " free");
    } else if (std::isinf(hi)) {
      bounds.push_back(" " + name + " >= " + number(lo));
    } else {
      bounds.push_back(" " + number(lo) + " <= " + name + " <= " + number(hi));
    }
  }
  if (!bounds.empty()) {
    out += "Bounds\n";
    for (const auto& b : bounds) out += b + "\n";
  }
  auto list = [&](const char* head, const std::vector<std::string>& names) {
    if (names.empty()) return;
    out += head;
    out += '\n';
    w.start("");
    for (const auto& n : names) w.piece(" " + n);
    w.finish();
  };
  list("Binaries", binaries);
  list("Generals", generals);
  out += "End\n";
  return out;
}

void write_lp(std::ostream& out, const LinearProgram& lp) { out << export_lp_text(lp); }

namespace {

enum class TokKind { Name, Number, Sign, Op, Colon };

struct Token {
  TokKind kind;
  std::string text;
  double value = 0.0;
  int line = 0;
};

enum class Section { None, Objective, Constraints, Bounds, Binaries, Generals, End };

std::optional<Section> section_of(std::string_view line, ObjectiveSense& sense) {
  std::string s;
  for (char c : line) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  if (s == "maximize" || s == "maximise" || s == "max" || s == "maximum") {
    sense = ObjectiveSense::Maximize;
    return Section::Objective;
  }
  if (s == "minimize" || s == "minimise" || s == "min" || s == "minimum") {
    sense = ObjectiveSense::Minimize;
    return Section::Objective;
  }
  if (s == "subject to" || s == "such that" || s == "st" || s == "s.t.") return Section::Constraints;
  if (s == "bounds" || s == "bound") return Section::Bounds;
  if (s == "binaries" || s == "binary" || s == "bin") return Section::Binaries;
  if (s == "generals" || s == "general" || s == "gen" || s == "integers") return Section::Generals;
  if (s == "end") return Section::End;
  return std::nullopt;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw SolverError("LP parse error at line " + std::to_string(line) + ": " + what);
}

void tokenize(std::string_view line, int line_no, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '\\') break;  // comment
    if (c == '<' || c == '>' || c == '=') {
      std::size_t j = i;
      while (j < line.size() && (line[j] == '<' || line[j] == '>' || line[j] == '=')) ++j;
      std::string op(line.substr(i, j - i));
      if (op == "<" || op == "=<") op = "<=";
      if (op == ">" || op == "=>") op = ">=";
      if (op != "<=" && op != ">=" && op != "=") fail(line_no, "bad operator '" + op + "'");
      out.push_back({TokKind::Op, op, 0.0, line_no});
      i = j;
      continue;
    }
    if (c == '+' || c == '-') {
      out.push_back({TokKind::Sign, std::string(1, c), 0.0, line_no});
      ++i;
      continue;
    }
    if (c == ':') {
      out.push_back({TokKind::Colon, ":", 0.0, line_no});
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < line.size() && (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.')) ++j;
      if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
        if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
          while (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) ++k;
          j = k;
        }
      }
      const auto v = detail::parse_double(line.substr(i, j - i));
      if (!v) fail(line_no, "bad number '" + std::string(line.substr(i, j - i)) + "'");
      out.push_back({TokKind::Number, std::string(line.substr(i, j - i)), *v, line_no});
      i = j;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
           std::string_view("<>=+-:\\").find(line[j]) == std::string_view::npos) {
      ++j;
    }
    out.push_back({TokKind::Name, std::string(line.substr(i, j - i)), 0.0, line_no});
    i = j;
  }
}

bool is_inf_name(const std::string& s) {
  std::string l;
  for (char c : s) l += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return l == "inf" || l == "infinity";
}

struct Draft {
  ObjectiveSense sense = ObjectiveSense::Minimize;
  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;
  std::vector<double> obj;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<bool> integer;
  struct Row {
    std::string name;
    std::vector<Term> terms;
    RowSense sense;
    double rhs;
  };
  std::vector<Row> rows;

  int col(const std::string& name, int line) {
    if (!valid_name(name)) fail(line, "invalid name '" + name + "'");
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    const int j = static_cast<int>(names.size());
    names.push_back(name);
    index.emplace(name, j);
    obj.push_back(0.0);
    lo.push_back(0.0);
    hi.push_back(kInf);
    integer.push_back(false);
    return j;
  }
};

// Parses "[+|-] [number] name" repeatedly until a non-term token.
std::size_t parse_terms(const std::vector<Token>& t, std::size_t i, Draft& d,
                        std::vector<Term>& terms) {
  while (i < t.size()) {
    double sign = 1.0;
    std::size_t j = i;
    if (t[j].kind == TokKind::Sign) {
      sign = t[j].text == "-" ? -1.0 : 1.0;
      ++j;
    }
    double coef = 1.0;
    if (j < t.size() && t[j].kind == TokKind::Number) {
      coef = t[j].value;
      ++j;
    }
    if (j < t.size() && t[j].kind == TokKind::Name && !(j + 1 < t.size() && t[j + 1].kind == TokKind::Colon)) {
      terms.push_back({d.col(t[j].text, t[j].line), sign * coef});
      i = j + 1;
      continue;
    }
    if (j != i && j < t.size() && t[j].kind == TokKind::Op) fail(t[j].line, "constant terms are not supported");
    break;
  }
  return i;
}

double parse_value(const std::vector<Token>& t, std::size_t& i, int line) {
  double sign = 1.0;
  if (i < t.size() && t[i].kind == TokKind::Sign) {
    sign = t[i].text == "-" ? -1.0 : 1.0;
    ++i;
  }
  if (i >= t.size()) fail(line, "missing value");
  if (t[i].kind == TokKind::Number) return sign * t[i++].value;
  if (t[i].kind == TokKind::Name && is_inf_name(t[i].text)) {
    ++i;
    return sign * kInf;
  }
  fail(line, "expected a number, got '" + t[i].text + "'");
}

void parse_bound_line(const std::vector<Token>& t, Draft& d) {
  const int line = t.front().line;
  std::size_t i = 0;
  auto name_at = [&](std::size_t k) {
    return k < t.size() && t[k].kind == TokKind::Name && !is_inf_name(t[k].text);
  };
  if (name_at(0)) {
    const int j = d.col(t[0].text, line);
    const auto uj = static_cast<std::size_t>(j);
    if (t.size() == 2 && t[1].kind == TokKind::Name) {
      std::string l;
      for (char c : t[1].text) l += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (l != "free") fail(line, "unknown bound keyword '" + t[1].text + "'");
      d.lo[uj] = -kInf;
      d.hi[uj] = kInf;
      return;
    }
    if (t.size() < 3 || t[1].kind != TokKind::Op) fail(line, "malformed bound");
    i = 2;
    const double v = parse_value(t, i, line);
    if (t[1].text == "=") {
      d.lo[uj] = d.hi[uj] = v;
    } else if (t[1].text == "<=") {
      d.hi[uj] = v;
    } else {
      d.lo[uj] = v;
    }
    if (i != t.size()) fail(line, "trailing tokens in bound");
    return;
  }
  const double v = parse_value(t, i, line);
  if (i >= t.size() || t[i].kind != TokKind::Op) fail(line, "malformed bound");
  const std::string op1 = t[i++].text;
  if (!name_at(i)) fail(line, "bound without a variable");
  const auto uj = static_cast<std::size_t>(d.col(t[i].text, line));
  ++i;
  if (op1 == "<=") {
    d.lo[uj] = v;
  } else if (op1 == ">=") {
    d.hi[uj] = v;
  } else {
    d.lo[uj] = d.hi[uj] = v;
  }
  if (i < t.size()) {
    if (t[i].kind != TokKind::Op) fail(line, "malformed bound");
    const std::string op2 = t[i++].text;
    const double w = parse_value(t, i, line);
    if (op2 == "<=") {
      d.hi[uj] = w;
    } else if (op2 == ">=") {
      d.lo[uj] = w;
    } else {
      fail(line, "malformed double bound");
    }
  }
  if (i != t.size()) fail(line, "trailing tokens in bound");
}

}  // namespace

LinearProgram parse_lp_text(std::string_view text) {
  Draft d;
  Section section = Section::None;
  std::vector<Token> objective_tokens, constraint_tokens, binary_tokens, general_tokens;
  std::vector<std::vector<Token>> bound_lines;
  bool saw_objective = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size() && section != Section::End) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto s = section_of(line, d.sense)) {
      section = *s;
      if (section == Section::Objective) saw_objective = true;
      continue;
    }
    std::vector<Token> tokens;
    tokenize(line, line_no, tokens);
    if (tokens.empty()) continue;
    switch (section) {
      case Section::None: fail(line_no, "content before the objective section");
      case Section::Objective: objective_tokens.insert(objective_tokens.end(), tokens.begin(), tokens.end()); break;
      case Section::Constraints: constraint_tokens.insert(constraint_tokens.end(), tokens.begin(), tokens.end()); break;
      case Section::Bounds: bound_lines.push_back(std::move(tokens)); break;
      case Section::Binaries: binary_tokens.insert(binary_tokens.end(), tokens.begin(), tokens.end()); break;
      case Section::Generals: general_tokens.insert(general_tokens.end(), tokens.begin(), tokens.end()); break;
      case Section::End: break;
    }
    if (pos > text.size()) break;
  }
  if (!saw_objective) throw SolverError("LP parse error: no objective section");
  if (section != Section::End) throw SolverError("LP parse error: missing End");

  {
    auto& t = objective_tokens;
    std::size_t i = 0;
    if (t.size() >= 2 && t[0].kind == TokKind::Name && t[1].kind == TokKind::Colon) i = 2;
    std::vector<Term> terms;
    i = parse_terms(t, i, d, terms);
    if (i != t.size()) fail(t[i].line, "unexpected token '" + t[i].text + "' in objective");
    for (const auto& term : terms) d.obj[static_cast<std::size_t>(term.col)] += term.coef;
  }
  {
    auto& t = constraint_tokens;
    std::size_t i = 0;
    while (i < t.size()) {
      Draft::Row row;
      const int line = t[i].line;
      if (i + 1 < t.size() && t[i].kind == TokKind::Name && t[i + 1].kind == TokKind::Colon) {
        row.name = t[i].text;
        i += 2;
      } else {
        row.name = "R" + std::to_string(d.rows.size() + 1);
      }
      i = parse_terms(t, i, d, row.terms);
      if (i >= t.size() || t[i].kind != TokKind::Op) fail(line, "constraint '" + row.name + "' lacks a sense");
      row.sense = t[i].text == "<=" ? RowSense::LessEqual
                  : t[i].text == "=" ? RowSense::Equal
                                     : RowSense::GreaterEqual;
      ++i;
      row.rhs = parse_value(t, i, line);
      d.rows.push_back(std::move(row));
    }
  }
  for (const auto& bl : bound_lines) parse_bound_line(bl, d);
  for (const auto& tok : binary_tokens) {
    if (tok.kind != TokKind::Name) fail(tok.line, "expected a name in Binaries");
    const auto j = static_cast<std::size_t>(d.col(tok.text, tok.line));
    d.integer[j] = true;
    d.lo[j] = 0.0;
    d.hi[j] = 1.0;
  }
  for (const auto& tok : general_tokens) {
    if (tok.kind != TokKind::Name) fail(tok.line, "expected a name in Generals");
    d.integer[static_cast<std::size_t>(d.col(tok.text, tok.line))] = true;
  }

  LinearProgram lp;
  lp.sense = d.sense;
  for (std::size_t j = 0; j < d.names.size(); ++j) {
    lp.add_column(d.names[j], d.lo[j], d.hi[j], d.obj[j], d.integer[j]);
  }
  std::unordered_set<std::string> row_names;
  for (auto& r : d.rows) {
    if (!row_names.insert(r.name).second) throw SolverError("duplicate LP row name '" + r.name + "'");
    lp.add_row(r.name, r.terms, r.sense, r.rhs);
  }
  return lp;
}

}  // namespace bessbid::milp
