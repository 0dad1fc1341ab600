#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <degenlab/report_io.hpp>

#include "test_support.hpp"

using namespace degenlab;

TEST_CASE("report_io: g17 formatting round-trips any finite double") {
  const double samples[] = {0.1,    1.0 / 3.0, 3.14159265358979324,
                            5e-324, DBL_MAX,   -17.25,
                            2.0,    1e300,     0.0};
  for (const double v : samples) {
    const double back = std::strtod(format_g17(v).c_str(), nullptr);
    CHECK(back == v);
  }
  CHECK(format_g17(0.25) == "0.25");
  CHECK(format_g17(2.0) == "2");
  CHECK(format_g17(3.14159265358979324) == "3.1415926535897931");
}

TEST_CASE("report_io: atomic writes leave no temporaries behind") {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / "degenlab_report_io_test";
  fs::create_directories(dir);
  const fs::path target = dir / "report.json";

  write_file_atomic(target.string(), "first");
  write_file_atomic(target.string(), "second");
  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "second");

  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++entries;
    CHECK(e.path().filename() == "report.json");
  }
  CHECK(entries == 1);
  fs::remove_all(dir);

  CHECK_THROWS_AS(
      write_file_atomic("/nonexistent_dir_zz/x.json", "content"),
      std::runtime_error);
}

TEST_CASE("report_io: output directory precedence") {
  const char* saved = std::getenv("DEGENLAB_OUT");
  const std::string keep = saved ? saved : "";

  unsetenv("DEGENLAB_OUT");
  CHECK(resolve_output_dir("") == ".");
  CHECK(resolve_output_dir("given") == "given");
  setenv("DEGENLAB_OUT", "/tmp/degenlab_env", 1);
  CHECK(resolve_output_dir("") == "/tmp/degenlab_env");
  CHECK(resolve_output_dir("given") == "given");

  if (saved) {
    setenv("DEGENLAB_OUT", keep.c_str(), 1);
  } else {
    unsetenv("DEGENLAB_OUT");
  }
}

TEST_CASE("report_io: geometry spec strings") {
  const Geometry a = parse_geometry("Fks:3,0.5");
  CHECK(a.kind() == ProfileKind::PowerLog);
  CHECK(a.log_depth() == 3);
  CHECK(a.sigma() == 0.5);

  const Geometry b = parse_geometry("Dsigma:1.5");
  CHECK(b.kind() == ProfileKind::InversePower);
  CHECK(b.sigma() == 1.5);

  const Geometry c = parse_geometry("finite:2");
  CHECK(c.kind() == ProfileKind::FiniteType);
  CHECK(c.alpha() == 2.0);

  const Geometry d = parse_geometry("constant");
  CHECK(d.kind() == ProfileKind::Constant);
  CHECK(d.constant_f() == 1.0);
  CHECK(parse_geometry("constant:0.5").constant_f() == 0.5);

  CHECK_THROWS_AS(parse_geometry("Fks:0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry("Fks:-1,0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry("Dsigma:"), std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry("finite:xyz"), std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry("bogus:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry(""), std::invalid_argument);
}

TEST_CASE("report_io: geometry JSON configs") {
  const Geometry a =
      parse_geometry_json(R"({"family":"power_log","k":3,"sigma":0.5})");
  CHECK(a.kind() == ProfileKind::PowerLog);
  CHECK(a.log_depth() == 3);
  CHECK(a.R() == Geometry::kDefaultR);

  const Geometry b = parse_geometry_json(
      R"({"family":"inverse_power","sigma":1.0,"R":0.5})");
  CHECK(b.kind() == ProfileKind::InversePower);
  CHECK(b.R() == 0.5);

  CHECK(parse_geometry_json(R"({"family":"finite_type","alpha":2.0})")
            .alpha() == 2.0);
  CHECK(parse_geometry_json(R"({"family":"constant","f0":0.5})")
            .constant_f() == 0.5);

  // Unknown keys, foreign parameters, and malformed documents are
  // rejected outright.
  CHECK_THROWS_AS(parse_geometry_json(R"({"family":"constant","zzz":1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_geometry_json(R"({"family":"constant","sigma":0.5})"),
      std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry_json(R"({"k":3,"sigma":0.5})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry_json(R"({"family":"power_log","k":3})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry_json(R"({"family":"unknown"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry_json("[1,2]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry_json("{not json"), std::invalid_argument);
}

TEST_CASE("report_io: volume csv quotes fields with commas") {
  VolumeRow row;
  row.geometry = "Fks:3,0.5";
  row.n = 2;
  row.x1 = 0.25;
  row.r = 0.5;
  row.regime = "small";
  row.analytic = 2.0;
  row.numeric = 1.0;
  row.ratio = 0.5;
  CHECK(volume_csv({row}) ==
        "geometry,n,x1,r,regime,analytic,numeric,ratio\n"
        "\"Fks:3,0.5\",2,0.25,0.5,small,2,1,0.5\n");

  row.geometry = "say \"hi\"";
  const std::string out = volume_csv({row});
  CHECK(out.find("\"say \"\"hi\"\"\",2,") != std::string::npos);
}

TEST_CASE("report_io: inequality and field csv layouts") {
  InequalityCsvRow row;
  row.inequality = "poincare";
  row.geometry = "Fks:3,0.5";
  row.x1 = 0.25;
  row.r = 0.0625;
  row.seed = 7;
  row.lhs = 1.5;
  row.rhs = 2.0;
  row.implied_constant = 0.75;
  row.applicable = true;
  CHECK(inequality_csv({row}) ==
        "inequality,geometry,x1,r,seed,lhs,rhs,implied_constant,"
        "applicable\n"
        "poincare,\"Fks:3,0.5\",0.25,0.0625,7,1.5,2,0.75,1\n");

  FieldCsvRow f;
  f.i = 1;
  f.j = 2;
  f.x1 = 0.25;
  f.x2 = 0.5;
  f.u = -3.0;
  CHECK(field_csv({f}) == "i,j,x1,x2,u\n1,2,0.25,0.5,-3\n");
}

TEST_CASE("report_io: plot data") {
  CHECK(plot_data("r", "osc", {0.25, 0.5}, {1.0, 2.0}) ==
        "# r osc\n0.25 1\n0.5 2\n");
  CHECK(plot_data("a", "b", {}, {}) == "# a b\n");
  CHECK_THROWS_AS(plot_data("a", "b", {1.0}, {}), std::invalid_argument);
}

TEST_CASE("report_io: json escaping and validation") {
  CHECK(json_escape("ab") == "\"ab\"");
  CHECK(json_escape("a\"b\\c\nd") == "\"a\\\"b\\\\c\\nd\"");
  CHECK(is_valid_json(json_escape("any \"text\" \\ here")));
  CHECK(is_valid_json(R"({"a": [1, 2.5, "x"]})"));
  CHECK_FALSE(is_valid_json("{broken"));
  CHECK_FALSE(is_valid_json(""));
}
