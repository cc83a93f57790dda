#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "msint/config.hpp"
#include "msint/errors.hpp"

using namespace msint;

namespace {

const char* kMinimal = R"(model:
  b: 0.2
  d: 0.2
grid:
  length: 10
  nodes: 16
)";

std::string error_of(const std::string& text, const std::string& base = ".") {
  try {
    parse_config(text, base);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("numbers and fractions") {
  CHECK(parse_number("0.25") == 0.25);
  CHECK(parse_number("1/6") == 1.0 / 6);
  CHECK(parse_number("-1/3") == -1.0 / 3);
  CHECK(parse_number(" 3 ") == 3.0);
  CHECK_THROWS_AS(parse_number("1/0"), ConfigError);
  CHECK_THROWS_AS(parse_number("abc"), ConfigError);
  CHECK_THROWS_AS(parse_number("1/6x"), ConfigError);
}

TEST_CASE("minimal document gets the documented defaults") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.scheme.fp_tol == 1e-12);
  CHECK(c.scheme.fp_max_iters == 100);
  CHECK(c.scheme.dt == 0.1);
  CHECK(c.scheme.kind == SchemeKind::ImrReduced);
  CHECK(c.scheme.op == OperatorChoice::Spectral);
  CHECK(c.output.stride == 10);
  CHECK(c.output.dir == "out");
  CHECK(c.t_end == 100);
  CHECK(c.grid.x0 == 0);
  CHECK(c.grid.n == 16);
  CHECK(c.initial.kind == InitialKind::Solitary);
  CHECK(c.model.alpha12 == 0);
  CHECK(!c.tangent);
}

TEST_CASE("shipped configurations parse") {
  for (const char* name : {"csw_b6_d6", "gsw_a6", "csw_b4_d12", "gsw_a9_b9", "dispersion", "full_tangent", "convergence"}) {
    const std::string path = std::string(MSINT_SOURCE_DIR) + "/configs/" + name + ".yaml";
    CAPTURE(path);
    CHECK_NOTHROW(load_config(path));
  }
  const RunConfig c = load_config(std::string(MSINT_SOURCE_DIR) + "/configs/csw_b6_d6.yaml");
  CHECK(c.model.b == doctest::Approx(1.0 / 6));
  CHECK(c.model.d == doctest::Approx(1.0 / 6));
  CHECK(c.model.a == 0);
  CHECK(c.grid.x0 == -256);
  CHECK(c.grid.h() == 0.125);
  CHECK(c.initial.c_s == 1.2);
}

TEST_CASE("invalid values are rejected with a field name") {
  const std::string bad_b = "model:\n  b: -0.1\ngrid:\n  length: 10\n  nodes: 16\n";
  CHECK(error_of(bad_b).find("line 2") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "scheme:\n  dt: 0\n").find("dt") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "scheme:\n  kind: rk4\n").find("scheme.kind") != std::string::npos);
  CHECK(error_of("model:\n  b: 1\ngrid:\n  length: 10\n  nodes: 1\n") != "");
  CHECK(error_of("grid:\n  length: 10\n  nodes: 16\n").find("model") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "initial:\n  kind: gaussian\n  width: 0\n").find("width") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "output:\n  diagnostics: [E_h, energy]\n").find("energy") != std::string::npos);
  CHECK(error_of("model:\n  b: 1\n  nonlinearity: reference\n  alpha: [0, 1, 0]\ngrid:\n  length: 10\n  nodes: 16\n") != "");
}

TEST_CASE("unknown keys are rejected with their line") {
  const std::string e = error_of(std::string(kMinimal) + "scheme:\n  dt: 0.1\n  dtt: 0.2\n");
  CHECK(e.find("line 9") != std::string::npos);
  CHECK(e.find("dtt") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "initial:\n  kind: gaussian\n  c_s: 1.2\n").find("c_s") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "extra: 1\n").find("extra") != std::string::npos);
}

TEST_CASE("syntax errors carry a line number") {
  const std::string e = error_of("model:\n  b: [1, 2\ngrid: {\n");
  CHECK(e.find("line") != std::string::npos);
  CHECK(e.find("syntax") != std::string::npos);
}

TEST_CASE("referenced files must exist") {
  const auto dir = std::filesystem::temp_directory_path() / "msint_config_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string doc = std::string(kMinimal) + "initial:\n  kind: file\n  path: prof.csv\n";
  CHECK(error_of(doc, dir.string()).find("does not exist") != std::string::npos);
  std::ofstream(dir / "prof.csv") << "x,eta,u\n";
  const RunConfig c = parse_config(doc, dir.string());
  CHECK(c.initial.path == (dir / "prof.csv").string());
  CHECK_THROWS_AS(load_config((dir / "missing.yaml").string()), ConfigError);
}

TEST_CASE("serialize then parse is the identity") {
  RunConfig c = parse_config(std::string(kMinimal) + R"(scheme:
  kind: imr_full
  operator: central
  dt: 1/30
  fp_tol: 1e-13
initial:
  kind: symmetric_random
  seed: 12
  decay: 0.3
  amplitude: 0.2
  remove_mean: true
output:
  stride: 3
  diagnostics: [E_h, symplecticity]
tangent:
  seed: 5
dispersion:
  modes: [1, 3, 5]
convergence:
  time_steps: [0.1, 0.05]
)");
  c.model.a = c.model.c = 1.0 / 7;
  c.model.beta22 = 0.1 + 0.2;
  const RunConfig r = parse_config(serialize_config(c));
  CHECK(r == c);
  const RunConfig f = load_config(std::string(MSINT_SOURCE_DIR) + "/configs/gsw_a9_b9.yaml");
  CHECK(parse_config(serialize_config(f)) == f);
}

TEST_CASE("generator triples set the linear coefficients") {
  const RunConfig c = parse_config("model:\n  generators: {theta: 0.8, nu: 0.1, mu: 0.2}\ngrid:\n  length: 10\n  nodes: 16\n");
  const auto m = coefficients_from_generators(0.8, 0.1, 0.2);
  CHECK(c.model.a == m.a);
  CHECK(c.model.b == m.b);
  CHECK(c.model.d == m.d);
}
