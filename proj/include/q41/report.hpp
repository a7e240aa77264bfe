#ifndef Q41_REPORT_HPP
#define Q41_REPORT_HPP

// JSON and CSV serialization of reports. Output is a pure function of the report:
// no timestamps, fixed key order (nlohmann::json sorts object keys), %.17g numbers.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "q41/analysis.hpp"
#include "q41/transforms.hpp"

namespace q41 {

using Json = nlohmann::json;

inline Json to_json(const Domain& d) { return Json{{"u0", d.u0}, {"u1", d.u1}, {"v0", d.v0}, {"v1", d.v1}}; }

inline Json to_json(const GridSpec& g) {
  return Json{{"nu", g.nu}, {"nv", g.nv}, {"domain", to_json(g.domain)}};
}

/// The mask is emitted sparsely as [i, j] pairs of degenerate points.
inline Json to_json(const ResidualReport& r) {
  Json mask = Json::array();
  for (std::size_t k = 0; k < r.mask.size(); ++k) {
    if (r.mask[k]) {
      mask.push_back({static_cast<int>(k / static_cast<std::size_t>(r.grid.nv)),
                      static_cast<int>(k % static_cast<std::size_t>(r.grid.nv))});
    }
  }
  Json extras = Json::object();
  for (const auto& [k, v] : r.extras) extras[k] = v;
  return Json{{"identity", r.identity},   {"surface", r.surface},     {"grid", to_json(r.grid)},
              {"order", r.order},         {"max_abs", r.max_abs},     {"mean_abs", r.mean_abs},
              {"evaluated", r.evaluated()}, {"degenerate", r.degenerate}, {"degenerate_points", mask},
              {"extras", extras}};
}

inline Json to_json(const EnergyResult& e) {
  Json refs = Json::array();
  for (const auto& r : e.refinements) refs.push_back({{"nu", r.nu}, {"nv", r.nv}, {"value", r.value}});
  return Json{{"surface", e.surface}, {"value", e.value}, {"estimate", e.estimate}, {"refinements", refs}};
}

inline Json to_json(const DualityReport& d) {
  return Json{{"swillmore_dev", d.swillmore_dev},
              {"adjoint_coincidence", d.adjoint_coincidence},
              {"sigma_residual", d.sigma_residual},
              {"central_sphere_residual", d.central_sphere_residual},
              {"evaluated", d.evaluated},
              {"degenerate", d.degenerate}};
}

inline Json error_json(const Error& e) {
  Json j{{"error", std::string(e.name())}, {"message", e.what()}};
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    j["line"] = pe->line();
    j["column"] = pe->column();
  }
  return j;
}

/// Shortest text that reads back to the same double.
inline std::string format_double(double x) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

/// RFC 4180 writer: fields containing comma, quote, CR or LF are quoted; lines end in CRLF.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os_ << ',';
      os_ << quote(fields[i]);
    }
    os_ << "\r\n";
  }

  static std::string quote(const std::string& f) {
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + '"';
  }

 private:
  std::ostream& os_;
};

/// Rows are split on CRLF or LF; quoted fields may contain separators and doubled quotes.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(field);
      rows.push_back(row);
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace q41

#endif  // Q41_REPORT_HPP
