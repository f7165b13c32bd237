#include "definition.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "geodetica/error.hpp"

namespace geodetica::cli {

namespace {

const std::set<std::string> kKinds{"chart", "surface", "curve3d", "surface_curve", "field"};

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool valid_key(std::string_view key) {
  bool start = true;
  for (char c : key) {
    if (c == '.') {
      if (start) return false;
      start = true;
      continue;
    }
    const bool alpha = std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    if (start ? !alpha : !(alpha || std::isdigit(static_cast<unsigned char>(c)))) return false;
    start = false;
  }
  return !start;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(trim(part));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const Entry& e) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw SchemaError("'" + e.key + "' must be a number, got '" + e.value + "'", e.line);
  return v;
}

const char* const kXyz[] = {"x", "y", "z"};

std::vector<std::string> map_keys(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(std::string("expr.") + kXyz[i]);
  return out;
}

}  // namespace

DefinitionFile DefinitionFile::parse(std::string_view text, std::filesystem::path origin) {
  DefinitionFile def;
  def.origin_ = std::move(origin);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw SchemaError("expected 'key = value'", line_no);
    Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (!valid_key(e.key)) throw SchemaError("malformed key '" + e.key + "'", line_no);
    if (e.value.empty()) throw SchemaError("empty value for '" + e.key + "'", line_no);
    if (const auto it = def.entries_.find(e.key); it != def.entries_.end())
      throw SchemaError("duplicate key '" + e.key + "' (first on line " +
                            std::to_string(it->second.line) + ")",
                        line_no);
    def.entries_.emplace(e.key, e);
  }
  if (!def.has("kind")) throw SchemaError("missing field 'kind'", 0);
  const Entry& kind = def.entry("kind");
  if (!kKinds.count(kind.value)) throw SchemaError("unknown kind '" + kind.value + "'", kind.line);
  def.kind_ = kind.value;
  def.validate_keys();

  if (def.kind_ == "chart")
    (void)def.chart();
  else if (def.kind_ == "surface")
    (void)def.surface();
  else if (def.kind_ == "curve3d")
    (void)def.curve();
  else if (def.kind_ == "surface_curve")
    (void)def.surface_curve();
  else
    (void)def.field();
  return def;
}

DefinitionFile DefinitionFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read definition file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str(), path.parent_path());
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what(), 0);
  }
}

const Entry& DefinitionFile::entry(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw SchemaError("missing field '" + key + "'", 0);
  return it->second;
}

std::vector<std::string> DefinitionFile::names(const std::string& key, std::size_t count) const {
  const Entry& e = entry(key);
  auto out = split(e.value, ',');
  if (count && out.size() != count)
    throw SchemaError("'" + key + "' needs " + std::to_string(count) + " names", e.line);
  for (const auto& n : out)
    if (!is_valid_variable_name(n)) throw SchemaError("invalid name '" + n + "' in '" + key + "'", e.line);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (out[i] == out[j]) throw SchemaError("repeated name '" + out[i] + "' in '" + key + "'", e.line);
  return out;
}

std::vector<std::string> DefinitionFile::canonical_keys() const {
  std::vector<std::string> keys{"kind", "name"};
  if (kind_ == "chart") {
    keys.push_back("coords");
    const auto coords = names("coords", 0);
    if (coords.size() != 2 && coords.size() != 3)
      throw SchemaError("'coords' needs 2 or 3 names", entry("coords").line);
    for (const auto& k : map_keys(static_cast<int>(coords.size()))) keys.push_back(k);
    for (const auto& c : coords) keys.push_back("box." + c);
    keys.insert(keys.end(), {"orientation", "margin"});
  } else if (kind_ == "surface") {
    keys.push_back("params");
    for (const auto& k : map_keys(3)) keys.push_back(k);
    for (const auto& p : names("params", 2)) keys.push_back("box." + p);
    keys.push_back("orientation");
  } else if (kind_ == "curve3d") {
    keys.push_back("parameter");
    for (const auto& k : map_keys(3)) keys.push_back(k);
    keys.push_back("domain");
  } else if (kind_ == "surface_curve") {
    keys.insert(keys.end(), {"surface", "parameter", "expr.u1", "expr.u2", "domain"});
  } else {
    keys.push_back("chart");
    const int n = has("chart") ? Chart::builtin(entry("chart").value).dim() : 3;
    for (int i = 1; i <= n; ++i) keys.push_back("expr.A" + std::to_string(i));
  }
  if (kind_ != "surface_curve")
    for (const auto& [k, e] : entries_)
      if (k.rfind("const.", 0) == 0) keys.push_back(k);
  return keys;
}

void DefinitionFile::validate_keys() const {
  if (kind_ == "field" && has("chart")) {
    try {
      (void)Chart::builtin(entry("chart").value);
    } catch (const InputError& e) {
      throw SchemaError(e.what(), entry("chart").line);
    }
  }
  const auto keys = canonical_keys();
  for (const auto& [k, e] : entries_) {
    if (std::find(keys.begin(), keys.end(), k) != keys.end()) continue;
    throw SchemaError("unknown key '" + k + "' for kind '" + kind_ + "'", e.line);
  }
  static const std::set<std::string> optional{"name", "orientation", "margin", "parameter", "chart"};
  for (const auto& k : keys)
    if (!optional.count(k) && !has(k)) throw SchemaError("missing field '" + k + "'", 0);
}

std::string DefinitionFile::dump() const {
  std::string out;
  for (const auto& k : canonical_keys())
    if (has(k)) out += k + " = " + entry(k).value + "\n";
  return out;
}

Bindings DefinitionFile::constants() const {
  Bindings out;
  for (const auto& [k, e] : entries_) {
    if (k.rfind("const.", 0) != 0) continue;
    const std::string name = k.substr(6);
    if (!is_valid_variable_name(name)) throw SchemaError("invalid constant name '" + name + "'", e.line);
    out[name] = parse_number(e);
  }
  return out;
}

Expression DefinitionFile::expression(const std::string& key) const {
  const Entry& e = entry(key);
  try {
    return Expression::parse(e.value);
  } catch (const ParseError& err) {
    throw SchemaError("'" + key + "': " + err.what(), e.line);
  }
}

Interval DefinitionFile::interval(const std::string& key, const Bindings& constants) const {
  const Entry& e = entry(key);
  const auto parts = split(e.value, ',');
  if (parts.size() != 2) throw SchemaError("'" + key + "' needs 'lo, hi'", e.line);
  double v[2];
  for (int i = 0; i < 2; ++i) {
    try {
      v[i] = Expression::parse(parts[i]).eval(constants);
    } catch (const Error& err) {
      throw SchemaError("'" + key + "': " + err.what(), e.line);
    }
  }
  if (!(v[0] < v[1])) throw SchemaError("'" + key + "' is empty", e.line);
  return {v[0], v[1]};
}

std::optional<int> DefinitionFile::orientation() const {
  if (!has("orientation")) return std::nullopt;
  const Entry& e = entry("orientation");
  if (e.value == "1" || e.value == "+1") return 1;
  if (e.value == "-1") return -1;
  throw SchemaError("'orientation' must be 1 or -1", e.line);
}

namespace {

// Rethrows unbound-name errors from object construction as schema errors.
template <class F>
auto building(F&& f) {
  try {
    return f();
  } catch (const UnboundVariable& e) {
    std::string names;
    for (const auto& n : e.names()) names += (names.empty() ? "" : ", ") + n;
    throw SchemaError("undeclared names: " + names, 0);
  }
}

}  // namespace

Chart DefinitionFile::chart() const {
  const auto coords = names("coords", 0);
  const Bindings k = constants();
  std::vector<Expression> maps;
  for (const auto& key : map_keys(static_cast<int>(coords.size()))) maps.push_back(expression(key));
  std::vector<Interval> box;
  for (const auto& c : coords) box.push_back(interval("box." + c, k));
  const std::string name = has("name") ? entry("name").value : "custom";
  Chart out = building([&] { return Chart(name, coords, maps, box, k, orientation()); });
  if (has("margin")) {
    const double m = parse_number(entry("margin"));
    if (!(m >= 0.0)) throw SchemaError("'margin' must be nonnegative", entry("margin").line);
    out.set_exclusion_margin(m);
  }
  return out;
}

Surface DefinitionFile::surface() const {
  const auto p = names("params", 2);
  const Bindings k = constants();
  const std::array<Interval, 2> box{interval("box." + p[0], k), interval("box." + p[1], k)};
  const std::array<Expression, 3> maps{expression("expr.x"), expression("expr.y"), expression("expr.z")};
  return building([&] { return Surface({p[0], p[1]}, maps, box, orientation().value_or(1), k); });
}

SpaceCurve DefinitionFile::curve() const {
  const std::string t = has("parameter") ? names("parameter", 1)[0] : "t";
  const Bindings k = constants();
  const Interval d = interval("domain", k);
  return building([&] {
    return SpaceCurve(expression("expr.x"), expression("expr.y"), expression("expr.z"), d.lo, d.hi,
                      k, t);
  });
}

SurfaceCurve DefinitionFile::surface_curve() const {
  const Entry& s = entry("surface");
  const DefinitionFile host = load(origin_ / s.value);
  if (host.kind() != "surface")
    throw SchemaError("'surface' must name a surface definition", s.line);
  const Surface surf = host.surface();
  const std::string t = has("parameter") ? names("parameter", 1)[0] : "t";
  const Interval d = interval("domain", surf.constants());
  return building(
      [&] { return SurfaceCurve(surf, expression("expr.u1"), expression("expr.u2"), d.lo, d.hi, t); });
}

FieldDefinition DefinitionFile::field() const {
  const Chart chart = Chart::builtin(has("chart") ? entry("chart").value : "cartesian");
  const Bindings k = constants();
  std::vector<Expression> comps;
  for (int i = 1; i <= chart.dim(); ++i) comps.push_back(expression("expr.A" + std::to_string(i)));
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto unbound = unbound_names(comps[i], chart.coords(), k);
    if (!unbound.empty()) building([&]() -> int { throw UnboundVariable(unbound); });
  }
  return {chart, comps, k};
}

}  // namespace geodetica::cli
