#include "mdcrt/io.hpp"

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "mdcrt/error.hpp"

namespace mdcrt {

namespace {

const std::regex& integer_re() {
  static const std::regex re("^[+-]?[0-9]+$");
  return re;
}

const std::regex& rational_re() {
  static const std::regex re("^[+-]?[0-9]+(/[0-9]*[1-9][0-9]*)?$");
  return re;
}

[[noreturn]] void parse_fail(std::string_view what, const std::string& msg) {
  fail(ErrorCode::ParseError, std::string(what) + ": " + msg);
}

Int int_from_json(const Json& j, std::string_view what, const std::string& where) {
  if (j.is_number_integer()) return Int(j.dump());
  if (!j.is_string()) parse_fail(what, where + " must be a decimal integer string");
  std::string s = j.get<std::string>();
  if (!std::regex_match(s, integer_re())) parse_fail(what, where + " '" + s + "' is not a decimal integer");
  if (s[0] == '+') s.erase(0, 1);
  return Int(s);
}

Rat rat_from_json(const Json& j, std::string_view what, const std::string& where) {
  if (j.is_number_integer()) return Rat(Int(j.dump()));
  if (!j.is_string()) parse_fail(what, where + " must be a decimal integer or rational string");
  std::string s = j.get<std::string>();
  if (!std::regex_match(s, rational_re())) parse_fail(what, where + " '" + s + "' is not a rational number");
  if (s[0] == '+') s.erase(0, 1);
  Rat q(s);
  q.canonicalize();
  return q;
}

}  // namespace

Json parse_json_text(std::string_view text, std::string_view origin) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    parse_fail(origin, "malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

IntMat matrix_from_json(const Json& j, std::string_view what) {
  if (!j.is_array() || j.empty()) parse_fail(what, "matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) parse_fail(what, "row 0 must be a nonempty array");
  const std::size_t cols = j[0].size();
  IntMat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array()) parse_fail(what, "row " + std::to_string(i) + " is not an array");
    if (j[i].size() != cols)
      parse_fail(what, "ragged rows: row " + std::to_string(i) + " has " + std::to_string(j[i].size()) +
                           " entries, row 0 has " + std::to_string(cols));
    for (std::size_t k = 0; k < cols; ++k)
      m(i, k) = int_from_json(j[i][k], what, "entry (" + std::to_string(i) + "," + std::to_string(k) + ")");
  }
  return m;
}

IntVec vector_from_json(const Json& j, std::string_view what) {
  if (!j.is_array() || j.empty()) parse_fail(what, "vector must be a nonempty array");
  IntVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = int_from_json(j[i], what, "entry " + std::to_string(i));
  return v;
}

RatVec rat_vector_from_json(const Json& j, std::string_view what) {
  if (!j.is_array() || j.empty()) parse_fail(what, "vector must be a nonempty array");
  RatVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = rat_from_json(j[i], what, "entry " + std::to_string(i));
  return v;
}

std::vector<IntMat> matrix_list_from_json(const Json& j, std::string_view what) {
  if (!j.is_array() || j.empty()) parse_fail(what, "expected a nonempty array of matrices");
  std::vector<IntMat> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(matrix_from_json(j[i], std::string(what) + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<IntVec> vector_list_from_json(const Json& j, std::string_view what) {
  if (!j.is_array() || j.empty()) parse_fail(what, "expected a nonempty array of vectors");
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(vector_from_json(j[i], std::string(what) + "[" + std::to_string(i) + "]"));
  return out;
}

IntMat parse_matrix_file(const std::string& path) { return matrix_from_json(read_json_file(path), path); }

std::vector<IntMat> parse_matrix_list_file(const std::string& path) {
  return matrix_list_from_json(read_json_file(path), path);
}

Json to_json(const IntMat& m) {
  Json j = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).get_str());
    j.push_back(std::move(row));
  }
  return j;
}

Json to_json(const IntVec& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(x.get_str());
  return j;
}

Json to_json(const Rat& q) { return q.get_str(); }

Json to_json(const RatVec& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(x.get_str());
  return j;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void emit_csv(std::ostream& os, const std::string& meta, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
  os << "# meta: " << meta << '\n';
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) {
    if (r.size() != header.size()) fail(ErrorCode::ShapeMismatch, "emit_csv: row width differs from header");
    line(r);
  }
}

void emit_csv(const std::string& path, const std::string& meta, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  emit_csv(out, meta, header, rows);
  if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace mdcrt
