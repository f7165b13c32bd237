#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "geodetica/chart.hpp"
#include "geodetica/curve.hpp"
#include "geodetica/surface.hpp"
#include "geodetica/surface_curve.hpp"

namespace geodetica::cli {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Vector field in the coordinates of a chart.
struct FieldDefinition {
  Chart chart;
  std::vector<Expression> components;
  Bindings constants;
};

/// Line-oriented `key = value` definition of a chart, surface, space curve,
/// surface curve or vector field. Parsing validates the keys for the kind
/// and builds the object once, so a parsed file always describes exactly one
/// valid object.
class DefinitionFile {
 public:
  /// `origin` resolves relative paths inside the file.
  static DefinitionFile parse(std::string_view text, std::filesystem::path origin = {});
  static DefinitionFile load(const std::filesystem::path& path);

  const std::string& kind() const { return kind_; }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const Entry& entry(const std::string& key) const;

  /// Canonical text: fixed key order, `key = value` lines, no comments.
  std::string dump() const;

  Chart chart() const;
  Surface surface() const;
  SpaceCurve curve() const;
  SurfaceCurve surface_curve() const;
  FieldDefinition field() const;

 private:
  std::vector<std::string> canonical_keys() const;
  void validate_keys() const;
  Bindings constants() const;
  Expression expression(const std::string& key) const;
  std::vector<std::string> names(const std::string& key, std::size_t count) const;
  Interval interval(const std::string& key, const Bindings& constants) const;
  std::optional<int> orientation() const;

  std::string kind_;
  std::map<std::string, Entry> entries_;
  std::filesystem::path origin_;
};

}  // namespace geodetica::cli
