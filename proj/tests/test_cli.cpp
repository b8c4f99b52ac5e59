#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dkz/cli.hpp"

using namespace dkz;

namespace {

RunConfig base(const std::string& cmd) {
  RunConfig c;
  c.command = cmd;
  c.m = 2;
  c.n = 2;
  c.u = {{0, 1}, {0, -1}};
  c.kappa = 2.5;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  RunConfig c = base("compute-stokes");
  CHECK_NOTHROW(validate(c));
  c.u = {{0, 1}, {0, 1}};
  try {
    validate(c);
    FAIL("duplicate u accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("distinct diagonal elements") != std::string::npos);
  }
  c = base("compute-stokes");
  c.u = {1.0, -1.0};
  CHECK_THROWS_AS(validate(c), ValidationError);
  c.permissive = true;
  CHECK_NOTHROW(validate(c));
  c = base("check-braid");
  CHECK_THROWS_AS(validate(c), ValidationError);
  c = base("compute-stokes");
  c.m = 4;
  c.n = 7;
  c.u = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  CHECK_THROWS_AS(validate(c), ValidationError);
  c = base("nonsense");
  CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("config JSON round trip") {
  const Json j = Json::parse(R"({"m": 2, "n": 3, "u": [[0, 1], [0, -1]], "kappa": [2.5, 0],
                                 "tolerances": {"rel_tol": 1e-12}, "seed": 7})");
  const RunConfig c = config_from_json(j);
  CHECK(c.n == 3);
  CHECK(c.u[1] == Complex(0, -1));
  CHECK(c.tol.rel_tol == 1e-12);
  CHECK(c.seed == 7);
  const RunConfig back = config_from_json(config_to_json(c));
  CHECK(back.u == c.u);
  CHECK(back.kappa == c.kappa);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"mm": 2})")), ValidationError);
}

TEST_CASE("exit codes and reports") {
  RunResult r = run(base("compute-stokes"));
  CHECK(r.exit_code == kExitPass);
  CHECK(r.report["pass"].get<bool>());
  CHECK(r.report["inputs"]["m"] == 2);
  CHECK(r.report["outputs"].contains("S_plus"));

  RunConfig dup = base("compute-stokes");
  dup.u = {{0, 1}, {0, 1}};
  r = run(dup);
  CHECK(r.exit_code == kExitValidation);
  CHECK(r.report["error"]["message"].get<std::string>().find("distinct diagonal elements") != std::string::npos);

  RunConfig pinched = base("compute-stokes");
  pinched.tol.max_steps = 5;
  CHECK(run(pinched).exit_code == kExitNumerical);

  CHECK(run(base("selftest")).exit_code == kExitPass);
}

TEST_CASE("reports are byte-identical across runs and written atomically") {
  RunConfig c = base("check-ybe");
  c.seed = 3;
  const std::string a = dump_json(run(c).report);
  const std::string b = dump_json(run(c).report);
  CHECK(a == b);
  const auto path = std::filesystem::temp_directory_path() / "dkz_report_test.json";
  write_json_atomic(path, run(c).report);
  CHECK(read_json_file(path)["pass"].get<bool>());
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove(path);
}

TEST_CASE("17 significant digits and complex pairs") {
  const Json j = {{"x", 0.1}, {"z", complex_to_json({1.0, -2.0})}};
  const std::string s = dump_json(j, 0);
  CHECK(s == R"({"x":0.10000000000000001,"z":[1.0,-2.0]})");
  CHECK(Json::parse(s)["x"].get<double>() == 0.1);
}

TEST_CASE("path JSON") {
  ComplexPath p;
  p.then(LineSegment{Complex(2, 0), Complex(1, 0)}).then(ArcSegment{0.0, 1.0, 0.0, -3.0});
  const ComplexPath q = path_from_json(Json::parse(dump_json(path_to_json(p))));
  REQUIRE(q.segments().size() == 2);
  CHECK(std::abs(q.end() - p.end()) == 0.0);
  CHECK_THROWS_AS(path_from_json(Json::parse(R"({"segments":[{"type":"spiral"}]})")), ValidationError);
}
