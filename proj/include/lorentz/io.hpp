#pragma once

// CSV and JSON encodings for cone points, group elements, model configs and
// test/check reports. Doubles are written with 17 significant digits in CSV;
// JSON uses the shortest representation that round-trips exactly.

#include "lorentz/cone.hpp"
#include "lorentz/group.hpp"
#include "lorentz/invariant_tests.hpp"
#include "lorentz/mc_verify.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorentz {

/// Malformed input. Messages name the offending line where one exists.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double v);

// --- cone points ------------------------------------------------------------

nlohmann::json to_json(const ConePoint& x);
/// {"lambda": l, "w": [...]}. Does not check cone membership.
ConePoint cone_point_from_json(const nlohmann::json& j);

/// `lambda,w_1,...,w_m`
std::string csv_header(int m);
void write_csv(std::ostream& os, const std::vector<ConePoint>& xs);

/// Reads a header plus one point per row. The dimension comes from the
/// header; if expected_m is set it must agree. Blank lines are skipped.
std::vector<ConePoint> read_csv(std::istream& is, std::optional<int> expected_m = std::nullopt);

void write_json_points(std::ostream& os, const std::vector<ConePoint>& xs);
std::vector<ConePoint> read_json_points(std::istream& is, std::optional<int> expected_m = std::nullopt);

// --- group elements -----------------------------------------------------------

nlohmann::json to_json(const GroupElement& g);
GroupElement group_element_from_json(const nlohmann::json& j);

// --- model config ---------------------------------------------------------------

struct ModelConfig {
  double eta = 0.0;
  ConePoint sigma;
  int m = 0;
};

nlohmann::json to_json(const ModelConfig& c);
/// {"eta": ..., "sigma": {...}, "m": ...}; m is optional and cross-checked.
ModelConfig model_config_from_json(const nlohmann::json& j);

// --- reports --------------------------------------------------------------------

nlohmann::json to_json(const CheckReport& r);
nlohmann::json t1_report(const SubconeTestResult& r, const ConePoint& x, const SubconeSplit& split, double eta);
nlohmann::json t2_report(const EqualityTestResult& r, int m, double eta, const NullCalibration& calib,
                         const std::vector<std::string>& anomalies = {});

}  // namespace lorentz
