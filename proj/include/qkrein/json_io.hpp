#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "qkrein/error.hpp"
#include "qkrein/qmatrix.hpp"

namespace qkrein {

/// Malformed matrix file; the message names the offending field.
class FormatError : public Error {
 public:
  using Error::Error;
};

inline nlohmann::json quaternion_to_json(const Quaternion& q) { return nlohmann::json::array({q.w, q.x, q.y, q.z}); }

inline Quaternion quaternion_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) throw FormatError(where + ": expected [w, x, y, z]");
  double c[4];
  for (std::size_t k = 0; k < 4; ++k) {
    if (!j[k].is_number()) throw FormatError(where + "[" + std::to_string(k) + "]: expected a number");
    c[k] = j[k].get<double>();
    if (!std::isfinite(c[k])) throw FormatError(where + "[" + std::to_string(k) + "]: not finite");
  }
  return {c[0], c[1], c[2], c[3]};
}

/// {"rows": m, "cols": n, "entries": [[[w,x,y,z], ...] per row]}
inline nlohmann::json matrix_to_json(const QMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(quaternion_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

inline QMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("matrix: expected a JSON object");
  for (const char* key : {"rows", "cols", "entries"})
    if (!j.contains(key)) throw FormatError(std::string("matrix: missing field \"") + key + "\"");
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
    throw FormatError("matrix: \"rows\" and \"cols\" must be non-negative integers");
  const auto rows = j["rows"].get<std::size_t>();
  const auto cols = j["cols"].get<std::size_t>();
  const auto& entries = j["entries"];
  if (!entries.is_array() || entries.size() != rows)
    throw FormatError("matrix: \"entries\" must hold " + std::to_string(rows) + " rows");
  QMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string where = "entries[" + std::to_string(r) + "]";
    if (!entries[r].is_array() || entries[r].size() != cols)
      throw FormatError(where + ": expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = quaternion_from_json(entries[r][c], where + "[" + std::to_string(c) + "]");
  }
  return m;
}

/// Parses matrix JSON text; syntax errors report line and column.
inline QMatrix parse_matrix(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  return matrix_from_json(j);
}

inline nlohmann::json vector_to_json(const std::vector<double>& v) { return nlohmann::json(v); }

}  // namespace qkrein
