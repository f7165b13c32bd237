#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace geodetica::cli {

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

bool flat_array(const Json& j) {
  return j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
}

void write_json(const Json& j, std::ostream& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad << Json(k).dump() << ": ";
        write_json(v, out, indent, depth + 1);
      }
      out << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Rows of numbers stay on one line.
      if (flat_array(j)) {
        out << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out << ", ";
          write_json(j[i], out, indent, depth + 1);
        }
        out << "]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        write_json(j[i], out, indent, depth + 1);
      }
      out << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? format_number(v) : "null");
      return;
    }
    default:
      out << j.dump();
  }
}

std::string leaf_text(const Json& j) {
  if (j.is_number_float()) return format_number(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  if (flat_array(j)) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + leaf_text(j[i]);
    return s + "]";
  }
  return j.dump();
}

void flatten(const Json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !flat_array(j)) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, leaf_text(j));
  }
}

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& a : v) s += (s.empty() ? "" : " ") + a;
  return s;
}

const char* status(const Report& r) { return r.failed ? "residual_above_tolerance" : "ok"; }

}  // namespace

std::string json_text(const Json& j, int indent) {
  std::ostringstream out;
  write_json(j, out, indent, 0);
  out << "\n";
  return out.str();
}

std::string render_json(const Report& r) {
  Json j = Json::object();
  j["command"] = r.command;
  j["argv"] = r.argv;
  j["inputs"] = r.inputs;
  j["results"] = r.results;
  j["residuals"] = r.residuals;
  j["tolerances"] = r.tolerances;
  if (r.trajectory) {
    j["trajectory"]["columns"] = r.trajectory->columns;
    j["trajectory"]["rows"] = r.trajectory->rows;
  }
  j["status"] = status(r);
  j["wall_time_s"] = r.wall_time;
  return json_text(j);
}

std::string render_text(const Report& r) {
  std::ostringstream out;
  out << "command: " << joined(r.argv) << "\n";
  const std::pair<const char*, const Json*> sections[] = {
      {"inputs", &r.inputs}, {"results", &r.results}, {"residuals", &r.residuals},
      {"tolerances", &r.tolerances}};
  for (const auto& [title, j] : sections) {
    if (j->empty()) continue;
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(*j, "", rows);
    std::size_t w = 0;
    for (const auto& row : rows) w = std::max(w, row.first.size());
    out << title << ":\n";
    for (const auto& [k, v] : rows) out << "  " << k << std::string(w - k.size(), ' ') << " = " << v << "\n";
  }
  if (r.trajectory) {
    out << "trajectory (" << r.trajectory->rows.size() << " samples):\n";
    out << "  " << joined(r.trajectory->columns) << "\n";
    for (const auto& row : r.trajectory->rows) {
      out << " ";
      for (double v : row) out << " " << format_number(v);
      out << "\n";
    }
  }
  out << "status: " << status(r) << "\n";
  out << "wall_time_s: " << format_number(r.wall_time) << "\n";
  return out.str();
}

std::string render_csv(const Report& r) {
  std::ostringstream out;
  if (r.trajectory) {
    for (std::size_t i = 0; i < r.trajectory->columns.size(); ++i)
      out << (i ? "," : "") << r.trajectory->columns[i];
    out << "\n";
    for (const auto& row : r.trajectory->rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
      out << "\n";
    }
    return out.str();
  }
  out << "key,value\n";
  std::vector<std::pair<std::string, std::string>> rows;
  Json all = Json::object();
  all["results"] = r.results;
  all["residuals"] = r.residuals;
  flatten(all, "", rows);
  for (auto [k, v] : rows) {
    if (v.find(',') != std::string::npos) v = "\"" + v + "\"";
    out << k << "," << v << "\n";
  }
  return out.str();
}

std::string render_svg(const Trajectory& t, const std::string& cx, const std::string& cy) {
  const auto col = [&](const std::string& name) {
    const auto it = std::find(t.columns.begin(), t.columns.end(), name);
    if (it == t.columns.end()) throw std::invalid_argument("trajectory has no column '" + name + "'");
    return static_cast<std::size_t>(it - t.columns.begin());
  };
  const std::size_t ix = col(cx), iy = col(cy);
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& r : t.rows) {
    x0 = std::min(x0, r[ix]);
    x1 = std::max(x1, r[ix]);
    y0 = std::min(y0, r[iy]);
    y1 = std::max(y1, r[iy]);
  }
  const double W = 640, H = 480, m = 60;
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double scale = std::min(W - 2 * m, H - 2 * m) / span;
  const auto px = [&](double v) { return m + (v - x0) * scale; };
  const auto py = [&](double v) { return H - m - (v - y0) * scale; };
  const double ax = px(x1), ay = py(y1);

  char buf[128];
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "  <line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", m,
                H - m, std::max(ax, m + 1), H - m);
  out << buf;
  std::snprintf(buf, sizeof buf, "  <line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", m,
                H - m, m, std::min(ay, H - m - 1));
  out << buf;
  const auto label = [&](double x, double y, const std::string& anchor, const std::string& text) {
    std::snprintf(buf, sizeof buf, "  <text x=\"%g\" y=\"%g\" font-size=\"12\" text-anchor=\"%s\">", x, y,
                  anchor.c_str());
    out << buf << text << "</text>\n";
  };
  char num[32];
  std::snprintf(num, sizeof num, "%.6g", x0);
  label(m, H - m + 16, "middle", num);
  std::snprintf(num, sizeof num, "%.6g", x1);
  label(ax, H - m + 16, "middle", num);
  std::snprintf(num, sizeof num, "%.6g", y0);
  label(m - 6, H - m + 4, "end", num);
  std::snprintf(num, sizeof num, "%.6g", y1);
  label(m - 6, ay + 4, "end", num);
  label((m + ax) / 2, H - m + 36, "middle", cx);
  label(m - 40, (H - m + ay) / 2, "middle", cy);

  out << "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", i ? " " : "", px(t.rows[i][ix]), py(t.rows[i][iy]));
    out << buf;
  }
  out << "\"/>\n</svg>\n";
  return out.str();
}

}  // namespace geodetica::cli
