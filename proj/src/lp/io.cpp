#include "suffopt/lp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "suffopt/text.hpp"

namespace suffopt::lp {

namespace {

std::string lower_case(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string positional(char prefix, int k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%07d", prefix, k + 1);
  return buf;
}

[[noreturn]] void fail(const std::string& format, int line, const std::string& what) {
  throw std::runtime_error(format + " line " + std::to_string(line) + ": " + what);
}

}  // namespace

LpFormat parse_lp_format(std::string_view text) {
  const auto t = lower_case(text);
  if (t == "mps") return LpFormat::Mps;
  if (t == "lp" || t == "lp-text" || t == "lptext") return LpFormat::LpText;
  throw std::invalid_argument("unknown LP file format '" + std::string(text) + "'");
}

LpFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && lower_case(path.substr(dot)) == ".lp") return LpFormat::LpText;
  return LpFormat::Mps;
}

std::string mps_column_name(int j) { return positional('C', j); }
std::string mps_row_name(int i) { return positional('R', i); }

// ---------------------------------------------------------------- MPS

void write_mps(std::ostream& out, const LpInstance& lp) {
  out << "NAME          " << lp.name << '\n';
  for (int j = 0; j < lp.num_variables(); ++j) {
    out << "* alias " << mps_column_name(j) << ' ' << lp.variables()[j].name << '\n';
  }
  for (int i = 0; i < lp.num_rows(); ++i) {
    out << "* alias " << mps_row_name(i) << ' ' << lp.rows()[i].name << '\n';
  }
  out << "ROWS\n N  COST\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const char* type = "E";
    if (lp.rows()[i].sense == Sense::LessEqual) type = "L";
    if (lp.rows()[i].sense == Sense::GreaterEqual) type = "G";
    out << ' ' << type << "  " << mps_row_name(i) << '\n';
  }

  // Column-major entries, rows in ascending order within each column.
  std::vector<std::vector<std::pair<int, double>>> cols(lp.num_variables());
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.rows()[i];
    for (std::size_t k = 0; k < r.columns.size(); ++k) cols[r.columns[k]].emplace_back(i, r.values[k]);
  }
  out << "COLUMNS\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    const auto name = mps_column_name(j);
    const double c = lp.variables()[j].cost;
    if (c != 0.0 || cols[j].empty()) {
      out << "    " << name << "  " << pad("COST", 8) << "  " << format_double(c) << '\n';
    }
    for (const auto& [i, v] : cols[j]) {
      out << "    " << name << "  " << mps_row_name(i) << "  " << format_double(v) << '\n';
    }
  }
  out << "RHS\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const double b = lp.rows()[i].rhs;
    if (b != 0.0) out << "    RHS       " << mps_row_name(i) << "  " << format_double(b) << '\n';
  }
  out << "BOUNDS\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    const auto& v = lp.variables()[j];
    const auto name = mps_column_name(j);
    auto line = [&](const char* type) { out << ' ' << type << " BND       " << name; };
    if (v.lower == -kInf && v.upper == kInf) {
      line("FR");
      out << '\n';
    } else if (v.lower == v.upper) {
      line("FX");
      out << "  " << format_double(v.lower) << '\n';
    } else {
      if (v.lower == -kInf) {
        line("MI");
        out << '\n';
      }
      if (v.upper != kInf) {
        line("UP");
        out << "  " << format_double(v.upper) << '\n';
      }
      // Written after UP so readers that relax the lower bound on a negative
      // UP entry see the explicit value last.
      if (v.lower != -kInf && (v.lower != 0.0 || v.upper < 0.0)) {
        line("LO");
        out << "  " << format_double(v.lower) << '\n';
      }
    }
  }
  out << "ENDATA\n";
}

LpInstance read_mps(std::istream& in) {
  enum class Section { None, Rows, Columns, Rhs, Bounds, Done };
  Section section = Section::None;
  LpInstance lp;
  std::string objective_row;
  std::unordered_map<std::string, int> row_index, col_index;
  std::unordered_set<std::string> free_rows;
  std::unordered_map<std::string, std::string> alias;
  std::vector<bool> lower_set;
  std::vector<std::map<int, double>> entries;  // per row: column -> value

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '*') {
      const auto tok = tokenize(line);
      if (tok.size() >= 3 && tok[1] == "alias") {
        const auto pos = line.find(tok[2]) + tok[2].size() + 1;
        alias[std::string(tok[2])] = pos <= line.size() ? line.substr(pos) : std::string();
      }
      continue;
    }
    const auto tok = tokenize(line);
    if (tok.empty()) continue;
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      const auto head = std::string(tok[0]);
      if (head == "NAME") {
        const auto pos = line.find_first_not_of(' ', 4);
        lp.name = pos == std::string::npos ? std::string() : line.substr(pos);
      } else if (head == "ROWS") {
        section = Section::Rows;
      } else if (head == "COLUMNS") {
        section = Section::Columns;
      } else if (head == "RHS") {
        section = Section::Rhs;
      } else if (head == "BOUNDS") {
        section = Section::Bounds;
      } else if (head == "ENDATA") {
        section = Section::Done;
        break;
      } else if (head == "RANGES") {
        fail("MPS", line_no, "RANGES section is not supported");
      } else if (head == "OBJSENSE" || head == "OBJSENSE MAX") {
        fail("MPS", line_no, "OBJSENSE is not supported (minimization only)");
      } else {
        fail("MPS", line_no, "unknown section '" + head + "'");
      }
      continue;
    }
    switch (section) {
      case Section::Rows: {
        if (tok.size() != 2) fail("MPS", line_no, "expected row type and name");
        const auto type = std::string(tok[0]);
        const auto name = std::string(tok[1]);
        if (type == "N") {
          if (objective_row.empty()) {
            objective_row = name;
          } else {
            free_rows.insert(name);
          }
          continue;
        }
        Row r;
        r.name = name;
        if (type == "E") {
          r.sense = Sense::Equal;
        } else if (type == "L") {
          r.sense = Sense::LessEqual;
        } else if (type == "G") {
          r.sense = Sense::GreaterEqual;
        } else {
          fail("MPS", line_no, "unknown row type '" + type + "'");
        }
        if (!row_index.emplace(name, lp.num_rows()).second) fail("MPS", line_no, "duplicate row " + name);
        lp.add_row(std::move(r));
        entries.emplace_back();
        break;
      }
      case Section::Columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") fail("MPS", line_no, "integer markers are not supported");
        if (tok.size() != 3 && tok.size() != 5) fail("MPS", line_no, "expected column, row, value");
        const auto col = std::string(tok[0]);
        auto it = col_index.find(col);
        if (it == col_index.end()) {
          it = col_index.emplace(col, lp.num_variables()).first;
          lp.add_variable({col, 0.0, kInf, 0.0});
          lower_set.push_back(false);
        }
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          const auto row = std::string(tok[k]);
          double v = 0.0;
          try {
            v = parse_double(tok[k + 1]);
          } catch (const std::exception&) {
            fail("MPS", line_no, "bad number '" + std::string(tok[k + 1]) + "'");
          }
          if (row == objective_row) {
            lp.variable(it->second).cost = v;
          } else if (free_rows.count(row)) {
            continue;
          } else {
            const auto r = row_index.find(row);
            if (r == row_index.end()) fail("MPS", line_no, "unknown row " + row);
            if (!entries[r->second].emplace(it->second, v).second) {
              fail("MPS", line_no, "duplicate entry for " + col + " in " + row);
            }
          }
        }
        break;
      }
      case Section::Rhs: {
        // The RHS set name is optional; pairs follow it.
        const std::size_t first = tok.size() % 2 == 1 ? 1 : 0;
        for (std::size_t k = first; k + 1 < tok.size(); k += 2) {
          const auto row = std::string(tok[k]);
          double v = 0.0;
          try {
            v = parse_double(tok[k + 1]);
          } catch (const std::exception&) {
            fail("MPS", line_no, "bad number '" + std::string(tok[k + 1]) + "'");
          }
          if (row == objective_row) fail("MPS", line_no, "objective constants are not supported");
          if (free_rows.count(row)) continue;
          const auto r = row_index.find(row);
          if (r == row_index.end()) fail("MPS", line_no, "unknown row " + row);
          lp.row(r->second).rhs = v;
        }
        break;
      }
      case Section::Bounds: {
        const auto type = std::string(tok[0]);
        const bool valueless = type == "FR" || type == "MI" || type == "PL";
        // Layouts: TYPE SET COL [VALUE] or TYPE COL [VALUE].
        std::size_t name_pos = 0;
        if (valueless) {
          name_pos = tok.size() == 3 ? 2 : 1;
        } else {
          name_pos = tok.size() == 4 ? 2 : 1;
        }
        if (name_pos >= tok.size()) fail("MPS", line_no, "malformed bound");
        const auto col = std::string(tok[name_pos]);
        const auto it = col_index.find(col);
        if (it == col_index.end()) fail("MPS", line_no, "bound on unknown column " + col);
        auto& v = lp.variable(it->second);
        double value = 0.0;
        if (!valueless) {
          if (name_pos + 1 >= tok.size()) fail("MPS", line_no, "bound needs a value");
          try {
            value = parse_double(tok[name_pos + 1]);
          } catch (const std::exception&) {
            fail("MPS", line_no, "bad number '" + std::string(tok[name_pos + 1]) + "'");
          }
        }
        if (type == "UP") {
          v.upper = value;
          if (value < 0.0 && v.lower == 0.0 && !lower_set[it->second]) v.lower = -kInf;
        } else if (type == "LO") {
          v.lower = value;
          lower_set[it->second] = true;
        } else if (type == "FX") {
          v.lower = v.upper = value;
          lower_set[it->second] = true;
        } else if (type == "FR") {
          v.lower = -kInf;
          v.upper = kInf;
        } else if (type == "MI") {
          v.lower = -kInf;
        } else if (type == "PL") {
          v.upper = kInf;
        } else {
          fail("MPS", line_no, "unsupported bound type '" + type + "'");
        }
        break;
      }
      default:
        fail("MPS", line_no, "data outside a section");
    }
  }
  if (section != Section::Done) throw std::runtime_error("MPS: missing ENDATA");

  for (int i = 0; i < lp.num_rows(); ++i) {
    auto& r = lp.row(i);
    for (const auto& [j, v] : entries[i]) {
      r.columns.push_back(j);
      r.values.push_back(v);
    }
    if (const auto a = alias.find(r.name); a != alias.end()) r.name = a->second;
  }
  for (int j = 0; j < lp.num_variables(); ++j) {
    auto& v = lp.variable(j);
    if (const auto a = alias.find(v.name); a != alias.end()) v.name = a->second;
  }
  lp.validate();
  return lp;
}

// ---------------------------------------------------------------- LP text

namespace {

void write_terms(std::ostream& out, const std::vector<std::pair<int, double>>& terms) {
  int on_line = 0;
  for (const auto& [j, v] : terms) {
    if (on_line == 8) {
      out << "\n   ";
      on_line = 0;
    }
    out << (std::signbit(v) ? " - " : " + ") << format_double(std::abs(v)) << ' ' << mps_column_name(j);
    ++on_line;
  }
}

std::string sense_text(Sense s) {
  switch (s) {
    case Sense::Equal: return "=";
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
  }
  return "=";
}

}  // namespace

void write_lp_text(std::ostream& out, const LpInstance& lp) {
  out << "\\ " << lp.name << '\n';
  for (int j = 0; j < lp.num_variables(); ++j) {
    out << "\\ alias " << mps_column_name(j) << ' ' << lp.variables()[j].name << '\n';
  }
  for (int i = 0; i < lp.num_rows(); ++i) {
    out << "\\ alias " << mps_row_name(i) << ' ' << lp.rows()[i].name << '\n';
  }
  out << "Minimize\n obj:";
  // Every column appears in the objective, so column order survives a re-read.
  std::vector<std::pair<int, double>> terms;
  for (int j = 0; j < lp.num_variables(); ++j) terms.emplace_back(j, lp.variables()[j].cost);
  write_terms(out, terms);
  out << "\nSubject To\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.rows()[i];
    terms.clear();
    for (std::size_t k = 0; k < r.columns.size(); ++k) terms.emplace_back(r.columns[k], r.values[k]);
    if (terms.empty() && lp.num_variables() > 0) terms.emplace_back(0, 0.0);
    out << ' ' << mps_row_name(i) << ':';
    write_terms(out, terms);
    out << ' ' << sense_text(r.sense) << ' ' << format_double(r.rhs) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    const auto& v = lp.variables()[j];
    const auto name = mps_column_name(j);
    if (v.lower == -kInf && v.upper == kInf) {
      out << ' ' << name << " free\n";
    } else if (v.lower == v.upper) {
      out << ' ' << name << " = " << format_double(v.lower) << '\n';
    } else if (v.upper == kInf) {
      if (v.lower != 0.0) out << ' ' << name << " >= " << format_double(v.lower) << '\n';
    } else {
      out << ' ' << (v.lower == -kInf ? std::string("-inf") : format_double(v.lower)) << " <= " << name
          << " <= " << format_double(v.upper) << '\n';
    }
  }
  out << "End\n";
}

namespace {

bool is_sense(std::string_view t) { return t == "<=" || t == ">=" || t == "=" || t == "=<" || t == "=>" || t == "<" || t == ">"; }

Sense to_sense(std::string_view t) {
  if (t == "<=" || t == "=<" || t == "<") return Sense::LessEqual;
  if (t == ">=" || t == "=>" || t == ">") return Sense::GreaterEqual;
  return Sense::Equal;
}

bool try_number(std::string_view t, double& v) {
  try {
    v = parse_double(t);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

LpInstance read_lp_text(std::istream& in) {
  enum class Section { None, Objective, Constraints, Bounds, Done };
  LpInstance lp;
  std::unordered_map<std::string, std::string> alias;
  std::unordered_map<std::string, int> col_index;
  bool named = false;
  auto column = [&](std::string_view name) {
    const auto key = std::string(name);
    auto it = col_index.find(key);
    if (it == col_index.end()) {
      it = col_index.emplace(key, lp.num_variables()).first;
      lp.add_variable({key, 0.0, kInf, 0.0});
    }
    return it->second;
  };

  // Objective and constraint tokens, each with the line it came from.
  std::vector<std::pair<std::string, int>> obj_tokens, row_tokens;
  std::vector<std::pair<std::vector<std::string>, int>> bound_lines;
  Section section = Section::None;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const auto c = line.find('\\'); c != std::string::npos) {
      const auto comment = line.substr(c + 1);
      const auto tok = tokenize(comment);
      if (tok.size() >= 2 && tok[0] == "alias") {
        const auto pos = comment.find(tok[1]) + tok[1].size() + 1;
        alias[std::string(tok[1])] = pos <= comment.size() ? comment.substr(pos) : std::string();
      } else if (!named && c == 0 && section == Section::None) {
        lp.name = std::string(trim(comment));
        named = true;
      }
      line.erase(c);
    }
    const auto tok = tokenize(line);
    if (tok.empty()) continue;
    const auto head = lower_case(trim(line));
    if (head == "minimize" || head == "minimise" || head == "min") {
      section = Section::Objective;
      continue;
    }
    if (head == "maximize" || head == "maximise" || head == "max") fail("LP", line_no, "maximization is not supported");
    if (head == "subject to" || head == "such that" || head == "st" || head == "s.t.") {
      section = Section::Constraints;
      continue;
    }
    if (head == "bounds" || head == "bound") {
      section = Section::Bounds;
      continue;
    }
    if (head == "general" || head == "generals" || head == "binary" || head == "binaries") {
      fail("LP", line_no, "integer sections are not supported");
    }
    if (head == "end") {
      section = Section::Done;
      break;
    }
    switch (section) {
      case Section::Objective:
        for (auto t : tok) obj_tokens.emplace_back(std::string(t), line_no);
        break;
      case Section::Constraints:
        for (auto t : tok) row_tokens.emplace_back(std::string(t), line_no);
        break;
      case Section::Bounds: {
        std::vector<std::string> b;
        for (auto t : tok) b.emplace_back(t);
        bound_lines.emplace_back(std::move(b), line_no);
        break;
      }
      default:
        fail("LP", line_no, "text outside a section");
    }
  }
  if (section != Section::Done) throw std::runtime_error("LP: missing End");

  // Terms: [sign] [coefficient] name, repeated.
  auto parse_terms = [&](const std::vector<std::pair<std::string, int>>& toks, std::size_t& p,
                         std::vector<std::pair<int, double>>& out) {
    while (p < toks.size() && !is_sense(toks[p].first)) {
      double sign = 1.0;
      double coef = 1.0;
      const int where = toks[p].second;
      if (toks[p].first == "+" || toks[p].first == "-") {
        if (toks[p].first == "-") sign = -1.0;
        ++p;
      }
      if (p >= toks.size()) fail("LP", where, "dangling sign");
      double v = 0.0;
      if (try_number(toks[p].first, v)) {
        coef = v;
        ++p;
      }
      if (p >= toks.size() || is_sense(toks[p].first)) fail("LP", where, "coefficient without variable");
      out.emplace_back(column(toks[p].first), sign * coef);
      ++p;
    }
  };

  {
    std::size_t p = 0;
    if (p < obj_tokens.size() && obj_tokens[p].first.back() == ':') ++p;
    std::vector<std::pair<int, double>> terms;
    parse_terms(obj_tokens, p, terms);
    if (p != obj_tokens.size()) fail("LP", obj_tokens[p].second, "unexpected token in objective");
    for (const auto& [j, v] : terms) lp.variable(j).cost += v;
  }

  std::size_t p = 0;
  int unnamed = 0;
  while (p < row_tokens.size()) {
    Row r;
    const int where = row_tokens[p].second;
    if (row_tokens[p].first.back() == ':') {
      r.name = row_tokens[p].first.substr(0, row_tokens[p].first.size() - 1);
      ++p;
    } else {
      r.name = "c" + std::to_string(++unnamed);
    }
    std::vector<std::pair<int, double>> terms;
    parse_terms(row_tokens, p, terms);
    if (p + 1 >= row_tokens.size()) fail("LP", where, "constraint without sense and rhs");
    r.sense = to_sense(row_tokens[p].first);
    if (!try_number(row_tokens[p + 1].first, r.rhs)) fail("LP", row_tokens[p + 1].second, "bad rhs");
    p += 2;
    std::map<int, double> merged;
    for (const auto& [j, v] : terms) {
      if (!merged.emplace(j, v).second) fail("LP", where, "variable repeated in constraint " + r.name);
    }
    // Keep the written order of terms.
    for (const auto& [j, v] : terms) {
      r.columns.push_back(j);
      r.values.push_back(v);
    }
    if (const auto a = alias.find(r.name); a != alias.end()) r.name = a->second;
    lp.add_row(std::move(r));
  }

  for (const auto& [b, where] : bound_lines) {
    double v = 0.0;
    if (b.size() == 2 && lower_case(b[1]) == "free") {
      auto& var = lp.variable(column(b[0]));
      var.lower = -kInf;
      var.upper = kInf;
    } else if (b.size() == 3 && is_sense(b[1]) && try_number(b[2], v)) {
      auto& var = lp.variable(column(b[0]));
      const Sense s = to_sense(b[1]);
      if (s == Sense::Equal) {
        var.lower = var.upper = v;
      } else if (s == Sense::LessEqual) {
        var.upper = v;
      } else {
        var.lower = v;
      }
    } else if (b.size() == 3 && is_sense(b[1]) && try_number(b[0], v)) {
      // value <= x  /  value >= x
      auto& var = lp.variable(column(b[2]));
      if (to_sense(b[1]) == Sense::LessEqual) {
        var.lower = v;
      } else {
        var.upper = v;
      }
    } else if (b.size() == 5 && to_sense(b[1]) == Sense::LessEqual && to_sense(b[3]) == Sense::LessEqual) {
      double lo = 0.0, hi = 0.0;
      if (!try_number(b[0], lo) || !try_number(b[4], hi)) fail("LP", where, "bad bound values");
      auto& var = lp.variable(column(b[2]));
      var.lower = lo;
      var.upper = hi;
    } else {
      fail("LP", where, "unrecognized bound");
    }
  }
  for (int j = 0; j < lp.num_variables(); ++j) {
    auto& var = lp.variable(j);
    if (const auto a = alias.find(var.name); a != alias.end()) var.name = a->second;
  }
  lp.validate();
  return lp;
}

void export_lp(const LpInstance& lp, const std::string& path, LpFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (format == LpFormat::Mps) {
    write_mps(out, lp);
  } else {
    write_lp_text(out, lp);
  }
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

LpInstance import_lp(const std::string& path, LpFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return format == LpFormat::Mps ? read_mps(in) : read_lp_text(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace suffopt::lp
