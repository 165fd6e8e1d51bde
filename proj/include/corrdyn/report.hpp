#pragma once

// JSON and CSV rendering for experiment reports. Reals are rounded to 12
// significant digits so report bodies are byte-stable across runs.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corrdyn/maps.hpp"

namespace corrdyn {

using Json = nlohmann::ordered_json;

inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0 ? 0.0 : r;
}

/// Finite reals as numbers; infinities and NaN as strings, which JSON lacks.
inline Json real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

inline Json real(const std::optional<double>& x) { return x ? real(*x) : Json(nullptr); }

inline Json set_json(const AlgSet& S) {
  Json j;
  j["cardinality"] = S.cardinality();
  j["has_infinity"] = S.has_infinity();
  j["poly"] = to_string(S.poly());
  const auto pts = rational_points(S);
  if (static_cast<int>(pts.size()) == S.cardinality()) {
    Json arr = Json::array();
    for (const auto& p : pts) arr.push_back(to_string(p));
    j["points"] = arr;
  } else {
    j["points"] = nullptr;
  }
  return j;
}

/// A table of rows keyed by column name; CSV output follows `columns`.
struct Table {
  std::vector<std::string> columns;
  std::vector<Json> rows;
};

inline std::string csv_cell(const Json& v) {
  std::string s;
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
    return buf;
  }
  if (v.is_number()) return v.dump();
  s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      const auto it = row.find(t.columns[i]);
      os << (i ? "," : "") << (it == row.end() ? std::string() : csv_cell(*it));
    }
    os << "\n";
  }
}

inline void write_json(std::ostream& os, const Json& j) { os << j.dump(2) << "\n"; }

}  // namespace corrdyn
