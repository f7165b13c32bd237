#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace geodetica::cli {

using Json = nlohmann::ordered_json;

/// Sampled path: one row per sample, named columns.
struct Trajectory {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string command;
  std::vector<std::string> argv;
  Json inputs = Json::object();
  Json results = Json::object();
  Json residuals = Json::object();
  Json tolerances = Json::object();
  std::optional<Trajectory> trajectory;
  /// Some residual exceeded its tolerance.
  bool failed = false;
  double wall_time = 0.0;
};

/// 17 significant digits; non-finite values print as null in JSON.
std::string format_number(double v);

/// JSON with every floating value printed by format_number.
std::string json_text(const Json& j, int indent = 2);

std::string render_text(const Report& r);
std::string render_json(const Report& r);
/// The trajectory table when present, otherwise flattened key,value rows.
std::string render_csv(const Report& r);

/// 2-D projection of the columns `cx`, `cy` as a polyline with axes.
std::string render_svg(const Trajectory& t, const std::string& cx, const std::string& cy);

}  // namespace geodetica::cli
