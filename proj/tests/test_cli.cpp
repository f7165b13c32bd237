#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "commands.hpp"

namespace fs = std::filesystem;
using geodetica::cli::run;
using Json = nlohmann::ordered_json;

namespace {

const std::string kData = GEODETICA_TEST_DATA;
const std::string kGolden = GEODETICA_TEST_GOLDEN;

std::string data(const std::string& name) { return kData + "/" + name; }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "geodetica_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove(p);
  return p;
}

// Every number in `a` must equal the one in `b` to the last bit.
void require_same_numbers(const Json& a, const Json& b, const std::string& where) {
  INFO(where);
  REQUIRE(a.type() == b.type());
  if (a.is_object()) {
    REQUIRE(a.size() == b.size());
    auto ib = b.begin();
    for (auto ia = a.begin(); ia != a.end(); ++ia, ++ib) {
      REQUIRE(ia.key() == ib.key());
      require_same_numbers(*ia, *ib, where + "." + ia.key());
    }
  } else if (a.is_array()) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      require_same_numbers(a[i], b[i], where + "[" + std::to_string(i) + "]");
  } else if (a.is_number()) {
    CHECK(a.get<double>() == b.get<double>());
  } else {
    CHECK(a == b);
  }
}

// Same keys in the same order, numbers within a relative 1e-12.
void require_matches_golden(const Json& got, const Json& want, const std::string& where) {
  INFO(where);
  if (want.is_number()) {
    REQUIRE(got.is_number());
    const double g = got.get<double>(), w = want.get<double>();
    CHECK(std::abs(g - w) <= 1e-12 * std::max(1.0, std::abs(w)));
    return;
  }
  REQUIRE(got.type() == want.type());
  if (want.is_object()) {
    REQUIRE(got.size() == want.size());
    auto ig = got.begin();
    for (auto iw = want.begin(); iw != want.end(); ++iw, ++ig) {
      REQUIRE(ig.key() == iw.key());
      require_matches_golden(*ig, *iw, where + "." + iw.key());
    }
  } else if (want.is_array()) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
      require_matches_golden(got[i], want[i], where + "[" + std::to_string(i) + "]");
  } else {
    CHECK(got == want);
  }
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size()))
    s.replace(p, from.size(), to);
  return s;
}

void check_golden(const std::string& name, std::vector<std::string> args) {
  for (auto& a : args) a = replace_all(a, "@DATA@", kData);
  args.push_back("--format");
  args.push_back("json");
  const Outcome r = cli(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  Json got = Json::parse(replace_all(r.out, kData, "@DATA@"));
  REQUIRE(got.contains("wall_time_s"));
  got.erase("wall_time_s");

  const std::string path = kGolden + "/" + name + ".json";
  if (std::getenv("GEODETICA_UPDATE_GOLDEN") != nullptr) {
    std::ofstream(path) << got.dump(2) << "\n";
    return;
  }
  REQUIRE_MESSAGE(fs::exists(path), "missing golden file " << path);
  require_matches_golden(got, Json::parse(slurp(path)), name);
}

}  // namespace

TEST_CASE("usage and parse failures exit with 2") {
  const std::vector<std::vector<std::string>> cases{
      {"curve", "--expr", "sin(", "--expr", "t", "--expr", "0", "--domain", "0,1"},
      {"curve", "--expr", "cos(t)", "--expr", "sin(t)", "--expr", "t*", "--domain", "0,1"},
      {"curve", "--expr", "t", "--expr", "t", "--expr", "q", "--domain", "0,1"},
      {"curve", "--file", data("bad_expr.def"), "--at", "0.5"},
      {"curve", "--file", data("unknown_key.def"), "--at", "0.5"},
      {"surface", "--file", data("missing_z.def"), "--point", "1,1"},
      {"surface", "--file", data("undeclared.def"), "--point", "1,1"},
      {"surface", "--file", data("does_not_exist.def"), "--point", "1,1"},
      {"surface", "--file", data("sphere.def"), "--point", "1,x"},
      {"surface", "--file", data("sphere.def"), "--point", "1"},
      {"surface", "--file", data("sphere.def"), "--point", "1,1", "--bogus"},
      {"surface", "--file", data("sphere.def"), "--point", "1,1", "--format", "yaml"},
      {"chart", "--builtin", "toroidal", "--point", "1,1,1"},
      {"chart", "--builtin", "spherical", "--point", "1,1"},
      {"geodesic", "--file", data("sphere.def"), "--start", "1,0", "--direction", "0,1"},
      {"frobnicate"},
      {},
      {"potential", "--field", "x1", "--field", "x2"},
      {"surface", "--file", data("sphere.def"), "--point", "1,1", "--steps", "0"},
      {"surface", "--dump"},
      {"bonnet", "--file", data("sphere.def"), "--vertex", "0.5,0", "--vertex", "1.2,0"},
  };
  for (const auto& args : cases) {
    std::string line;
    for (const auto& a : args) line += a + " ";
    INFO(line);
    const Outcome r = cli(args);
    CHECK(r.code == 2);
  }
}

TEST_CASE("schema errors name the offending field or names") {
  Outcome r = cli({"surface", "--file", data("missing_z.def"), "--point", "1,1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("expr.z") != std::string::npos);

  r = cli({"surface", "--file", data("undeclared.def"), "--point", "1,1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("R, w") != std::string::npos);

  r = cli({"curve", "--file", data("unknown_key.def"), "--at", "0.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("colour") != std::string::npos);
  CHECK(r.err.find("line 6") != std::string::npos);

  r = cli({"curve", "--file", data("bad_expr.def"), "--at", "0.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("numeric failures exit with 1") {
  const std::vector<std::vector<std::string>> cases{
      // outside the parameter box
      {"surface", "--file", data("sphere.def"), "--point", "4,0"},
      // pole of the sphere
      {"surface", "--file", data("sphere.def"), "--point", "0,0"},
      // chart singularity on the axis
      {"chart", "--builtin", "spherical", "--point", "1,0,0.3"},
      // cusp of a semicubical parabola
      {"curve", "--expr", "t^2", "--expr", "t^3", "--expr", "0", "--domain", "-1,1", "--at", "0"},
      // tolerance that no computation meets
      {"bonnet", "--file", data("sphere.def"), "--vertex", "0.5,0", "--vertex", "1.2,0", "--vertex",
       "1.2,1", "--vertex", "0.5,1", "--tol", "1e-300"},
      {"potential", "--field", "x2", "--field", "-x1", "--field", "0", "--point", "0.1,0.2,0.3"},
      {"potential", "--kind", "vector", "--field", "x1", "--field", "x2", "--field", "x3", "--point",
       "0.1,0.2,0.3"},
  };
  for (const auto& args : cases) {
    std::string line;
    for (const auto& a : args) line += a + " ";
    INFO(line);
    const Outcome r = cli(args);
    CHECK(r.code == 1);
    CHECK(!r.err.empty());
  }
}

TEST_CASE("successful commands exit with 0") {
  const std::vector<std::vector<std::string>> cases{
      {"chart", "--builtin", "spherical", "--point", "1,0.7,0.3", "--show", "all"},
      {"chart", "--file", data("elliptic.def"), "--point", "1,0.5,0", "--scalar", "mu*nu"},
      {"curve", "--file", data("helix.def"), "--at", "1", "--report", "all"},
      {"surface", "--file", data("torus.def"), "--point", "0.3,2.5", "--report", "all"},
      {"geodesic", "--file", data("sphere.def"), "--start", "1,0", "--direction", "0.2,1",
       "--length", "2"},
      {"transport", "--file", data("cap.def"), "--vector", "1,0", "--steps", "200"},
      {"transport", "--file", data("cap.def"), "--vector", "1,0", "--covector", "--steps", "200"},
      {"potential", "--file", data("field.def"), "--point", "0.1,0.2,0.3"},
      {"surface", "--help"},
  };
  for (const auto& args : cases) {
    std::string line;
    for (const auto& a : args) line += a + " ";
    INFO(line);
    const Outcome r = cli(args);
    CHECK_MESSAGE(r.code == 0, r.err);
  }
}

TEST_CASE("tolerance flag is honoured") {
  const std::vector<std::string> base{"bonnet", "--file", data("sphere.def"), "--vertex", "0.5,0",
                                      "--vertex", "1.2,0", "--vertex", "1.2,1", "--vertex", "0.5,1"};
  CHECK(cli(base).code == 0);
  auto tight = base;
  tight.insert(tight.end(), {"--tol", "1e-300"});
  CHECK(cli(tight).code == 1);
}

TEST_CASE("dump round-trips byte-identically") {
  const std::string original = slurp(data("sphere.def"));
  const Outcome r = cli({"surface", "--file", data("sphere.def"), "--dump"});
  REQUIRE(r.code == 0);
  CHECK(r.out == original);

  // canonical output is a fixed point for every kind
  for (const char* f : {"cap.def", "helix.def", "elliptic.def", "field.def", "torus.def"}) {
    INFO(f);
    const Outcome first = cli({"chart", "--file", data(f), "--dump"});
    REQUIRE(first.code == 0);
    const fs::path copy = fs::path(kData) / (std::string(".roundtrip_") + f);
    std::ofstream(copy, std::ios::binary) << first.out;
    const Outcome second = cli({"chart", "--file", copy.string(), "--dump"});
    fs::remove(copy);
    REQUIRE(second.code == 0);
    CHECK(second.out == first.out);
  }
}

TEST_CASE("json output re-parses to the same numbers as the text report") {
  const Outcome j = cli({"surface", "--file", data("sphere.def"), "--point", "1.2,0.5", "--format",
                         "json"});
  REQUIRE(j.code == 0);
  const Json doc = Json::parse(j.out);
  CHECK(doc["command"] == "surface");
  CHECK(doc["status"] == "ok");
  const double K = doc["results"]["curvature"]["K"].get<double>();
  CHECK(std::abs(K - 1.0 / (1.2 * 1.2)) < 1e-12);
  CHECK(doc["residuals"]["gauss_residual"].get<double>() < 1e-8);

  // printing each number with 17 digits and reading it back is lossless
  const Json again = Json::parse(doc.dump());
  require_same_numbers(doc, again, "doc");

  const Outcome t = cli({"surface", "--file", data("sphere.def"), "--point", "1.2,0.5"});
  REQUIRE(t.code == 0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", K);
  CHECK(t.out.find(std::string("curvature.K ") ) != std::string::npos);
  CHECK(t.out.find(buf) != std::string::npos);
}

TEST_CASE("christoffel example from the command line") {
  const Outcome r = cli({"chart", "--builtin", "spherical", "--point", "1,0.7,0.3", "--show",
                         "christoffel", "--format", "json"});
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(r.out);
  const double v = doc["results"]["christoffel"]["Gamma^2_33"].get<double>();
  CHECK(std::abs(v + std::sin(1.4) / 2.0) < 1e-12);
}

TEST_CASE("geodesic csv schema and plot output") {
  const fs::path svg = scratch("geo.svg");
  const Outcome r = cli({"geodesic", "--file", data("sphere.def"), "--start", "1,0", "--direction",
                         "0.3,1", "--length", "3", "--steps", "50", "--format", "csv", "--plot",
                         svg.string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,u1,u2,x,y,z");
  int rows = 0;
  for (std::string l; std::getline(lines, l);)
    if (!l.empty()) ++rows;
  CHECK(rows == 51);

  REQUIRE(fs::exists(svg));
  const std::string text = slurp(svg.string());
  CHECK(text.rfind("<svg", 0) == 0);
  CHECK(text.find("<polyline") != std::string::npos);
  CHECK(text.find(">x<") != std::string::npos);
  CHECK(text.find(">y<") != std::string::npos);
}

TEST_CASE("transport csv schema") {
  const Outcome r = cli({"transport", "--file", data("cap.def"), "--vector", "1,0", "--steps", "400",
                         "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("t,u1,u2,x,y,z,a1,a2,ax,ay,az\n", 0) == 0);
}

TEST_CASE("empty trajectory warns and writes no plot") {
  const fs::path svg = scratch("empty.svg");
  const Outcome r = cli({"geodesic", "--file", data("sphere.def"), "--start", "1,0", "--direction",
                         "0,1", "--length", "0", "--plot", svg.string()});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(!fs::exists(svg));
}

TEST_CASE("unwritable output is a usage error") {
  const Outcome r = cli({"geodesic", "--file", data("sphere.def"), "--start", "1,0", "--direction",
                         "0,1", "--length", "1", "--plot", "/nonexistent_dir/x/plot.svg"});
  CHECK(r.code == 2);
  const Outcome o = cli({"surface", "--file", data("sphere.def"), "--point", "1,1", "--output",
                         "/nonexistent_dir/x/report.txt"});
  CHECK(o.code == 2);
}

TEST_CASE("structured output matches the golden files") {
  check_golden("chart_spherical",
               {"chart", "--builtin", "spherical", "--point", "1,0.7,0.3", "--show", "all"});
  check_golden("surface_sphere",
               {"surface", "--file", "@DATA@/sphere.def", "--point", "1.2,0.5", "--report", "all"});
  check_golden("curve_helix", {"curve", "--file", "@DATA@/helix.def", "--at", "1", "--interval",
                               "0,6.283185307179586", "--report", "all"});
  check_golden("geodesic_sphere", {"geodesic", "--file", "@DATA@/sphere.def", "--start", "1,0",
                                   "--direction", "0.3,1", "--length", "1", "--steps", "8"});
  check_golden("transport_cap",
               {"transport", "--file", "@DATA@/cap.def", "--vector", "1,0", "--steps", "12",
                "--tol", "1e-3"});
  check_golden("bonnet_sphere",
               {"bonnet", "--file", "@DATA@/sphere.def", "--vertex", "0.5,0", "--vertex", "1.2,0",
                "--vertex", "1.2,1", "--vertex", "0.5,1", "--nodes", "16", "--steps", "200"});
  check_golden("potential_field",
               {"potential", "--file", "@DATA@/field.def", "--point", "0.1,0.2,0.3"});
}
