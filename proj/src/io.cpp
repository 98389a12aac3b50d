#include "lorentz/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace lorentz {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line_no) + ": not a finite number: '" + s + "'");
  }
  return v;
}

// Finite double, or ParseError naming the field.
double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ParseError(std::string("missing or non-numeric field '") + key + "'");
  }
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string("field '") + key + "' is not finite");
  return v;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// --- cone points ------------------------------------------------------------

json to_json(const ConePoint& x) {
  json w = json::array();
  for (Eigen::Index i = 0; i < x.w.size(); ++i) w.push_back(x.w(i));
  return json{{"lambda", x.lambda}, {"w", w}};
}

ConePoint cone_point_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("cone point must be a JSON object {\"lambda\": ..., \"w\": [...]}");
  const double lambda = number_field(j, "lambda");
  if (!j.contains("w") || !j.at("w").is_array() || j.at("w").empty()) {
    throw ParseError("cone point field 'w' must be a nonempty array");
  }
  const json& wj = j.at("w");
  Vector w(static_cast<Eigen::Index>(wj.size()));
  for (std::size_t i = 0; i < wj.size(); ++i) {
    if (!wj[i].is_number() || !std::isfinite(wj[i].get<double>())) {
      throw ParseError("cone point field 'w' has a non-numeric entry at index " + std::to_string(i));
    }
    w(static_cast<Eigen::Index>(i)) = wj[i].get<double>();
  }
  return ConePoint(lambda, std::move(w));
}

std::string csv_header(int m) {
  std::string h = "lambda";
  for (int i = 1; i <= m; ++i) h += ",w_" + std::to_string(i);
  return h;
}

void write_csv(std::ostream& os, const std::vector<ConePoint>& xs) {
  if (xs.empty()) throw std::invalid_argument("write_csv: no points");
  const int m = xs.front().m();
  os << csv_header(m) << '\n';
  for (const ConePoint& x : xs) {
    if (x.m() != m) throw std::invalid_argument("write_csv: mixed dimensions");
    os << format_double(x.lambda);
    for (int i = 0; i < m; ++i) os << ',' << format_double(x.w(i));
    os << '\n';
  }
}

std::vector<ConePoint> read_csv(std::istream& is, std::optional<int> expected_m) {
  std::string line;
  std::size_t line_no = 0;
  int m = -1;
  std::vector<ConePoint> out;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto cells = split_commas(t);
    if (m < 0) {
      if (cells.size() < 2 || cells[0] != "lambda") {
        throw ParseError("line " + std::to_string(line_no) + ": expected header lambda,w_1,...,w_m");
      }
      for (std::size_t i = 1; i < cells.size(); ++i) {
        if (cells[i] != "w_" + std::to_string(i)) {
          throw ParseError("line " + std::to_string(line_no) + ": bad header column '" + cells[i] + "', expected w_" +
                           std::to_string(i));
        }
      }
      m = static_cast<int>(cells.size()) - 1;
      if (expected_m && *expected_m != m) {
        throw ParseError("line " + std::to_string(line_no) + ": header has m = " + std::to_string(m) +
                         " but --m is " + std::to_string(*expected_m));
      }
      continue;
    }
    if (static_cast<int>(cells.size()) != m + 1) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(m + 1) + " fields, got " +
                       std::to_string(cells.size()));
    }
    Vector w(m);
    const double lambda = parse_number(cells[0], line_no);
    for (int i = 0; i < m; ++i) w(i) = parse_number(cells[i + 1], line_no);
    out.emplace_back(lambda, std::move(w));
  }
  if (m < 0) throw ParseError("empty input: no header");
  return out;
}

void write_json_points(std::ostream& os, const std::vector<ConePoint>& xs) {
  json arr = json::array();
  for (const ConePoint& x : xs) arr.push_back(to_json(x));
  os << arr.dump() << '\n';
}

std::vector<ConePoint> read_json_points(std::istream& is, std::optional<int> expected_m) {
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (j.is_object()) j = json::array({j});
  if (!j.is_array()) throw ParseError("expected a JSON array of cone points");
  std::vector<ConePoint> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    ConePoint x;
    try {
      x = cone_point_from_json(j[i]);
    } catch (const ParseError& e) {
      throw ParseError("element " + std::to_string(i) + ": " + e.what());
    }
    if (!out.empty() && x.m() != out.front().m()) {
      throw ParseError("element " + std::to_string(i) + ": dimension differs from element 0");
    }
    if (expected_m && x.m() != *expected_m) {
      throw ParseError("element " + std::to_string(i) + ": has m = " + std::to_string(x.m()) + " but --m is " +
                       std::to_string(*expected_m));
    }
    out.push_back(std::move(x));
  }
  return out;
}

// --- group elements -----------------------------------------------------------

json to_json(const GroupElement& g) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < g.A.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < g.A.cols(); ++k) row.push_back(g.A(i, k));
    rows.push_back(row);
  }
  return json{{"a", g.a}, {"A", rows}};
}

GroupElement group_element_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("group element must be a JSON object");
  GroupElement g;
  g.a = number_field(j, "a");
  if (!j.contains("A") || !j.at("A").is_array() || j.at("A").empty()) {
    throw ParseError("group element field 'A' must be a nonempty array of rows");
  }
  const json& rows = j.at("A");
  const auto n = static_cast<Eigen::Index>(rows.size());
  g.A.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError("group element field 'A' must be square");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!row[static_cast<std::size_t>(k)].is_number()) throw ParseError("group element field 'A' has a non-number");
      g.A(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
  }
  return g;
}

// --- model config ---------------------------------------------------------------

json to_json(const ModelConfig& c) { return json{{"eta", c.eta}, {"sigma", to_json(c.sigma)}, {"m", c.m}}; }

ModelConfig model_config_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("model config must be a JSON object");
  ModelConfig c;
  c.eta = number_field(j, "eta");
  if (!j.contains("sigma")) throw ParseError("model config is missing 'sigma'");
  c.sigma = cone_point_from_json(j.at("sigma"));
  c.m = c.sigma.m();
  if (j.contains("m")) {
    if (!j.at("m").is_number_integer() || j.at("m").get<int>() != c.m) {
      throw ParseError("model config 'm' does not match the dimension of sigma");
    }
  }
  return c;
}

// --- reports --------------------------------------------------------------------

json to_json(const CheckReport& r) {
  return json{{"name", r.name},
              {"statistic", number_or_null(r.statistic)},
              {"threshold", number_or_null(r.threshold)},
              {"passed", r.passed},
              {"n_samples", r.n_samples},
              {"seed", r.seed},
              {"details", r.details}};
}

json t1_report(const SubconeTestResult& r, const ConePoint& x, const SubconeSplit& split, double eta) {
  return json{{"test", "T1"},
              {"statistic", r.m_stat},
              {"p_value", r.p_value},
              {"q_lr", r.q_lr},
              {"beta_params", {r.beta_params.alpha, r.beta_params.beta}},
              {"mle", to_json(r.t_stat)},
              {"mle_full", to_json(mle_full(x))},
              {"eta", eta},
              {"m", split.m()},
              {"m0", split.m0()},
              {"anomalies", json::array()}};
}

json t2_report(const EqualityTestResult& r, int m, double eta, const NullCalibration& calib,
               const std::vector<std::string>& anomalies) {
  return json{{"test", "T2"},
              {"statistic", r.lr},
              {"p_value", r.p_value},
              {"xi", {r.eigen.xi1, r.eigen.xi2}},
              {"mle", to_json(r.pooled_mle)},
              {"eta", eta},
              {"m", m},
              {"m0", nullptr},
              {"n_calibration", calib.n()},
              {"calibration_seed", calib.seed()},
              {"anomalies", anomalies}};
}

}  // namespace lorentz
