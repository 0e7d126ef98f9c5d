#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mdcrt/matrix.hpp"

namespace mdcrt {

using Json = nlohmann::ordered_json;

// Matrices are JSON arrays of rows of decimal integer strings.
Json parse_json_text(std::string_view text, std::string_view origin);
Json read_json_file(const std::string& path);

IntMat matrix_from_json(const Json& j, std::string_view what);
IntVec vector_from_json(const Json& j, std::string_view what);
RatVec rat_vector_from_json(const Json& j, std::string_view what);
std::vector<IntMat> matrix_list_from_json(const Json& j, std::string_view what);
std::vector<IntVec> vector_list_from_json(const Json& j, std::string_view what);

IntMat parse_matrix_file(const std::string& path);
std::vector<IntMat> parse_matrix_list_file(const std::string& path);

Json to_json(const IntMat& m);
Json to_json(const IntVec& v);
Json to_json(const RatVec& v);
Json to_json(const Rat& q);

// The CSV dialect: comma separated, '\n' line ends, fields quoted only when needed.
void emit_csv(std::ostream& os, const std::string& meta, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows);
void emit_csv(const std::string& path, const std::string& meta, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows);
std::string csv_field(std::string_view s);
std::string format_double(double x);

}  // namespace mdcrt
