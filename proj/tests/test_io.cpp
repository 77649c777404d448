#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "staticlab/boundary.hpp"
#include "staticlab/catalog.hpp"
#include "staticlab/errors.hpp"
#include "staticlab/grid.hpp"
#include "staticlab/model_io.hpp"
#include "staticlab/report.hpp"
#include "staticlab/riccati.hpp"
#include "staticlab/svg.hpp"

using namespace staticlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "staticlab_test_io";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RiccatiTrace hemisphere_trace() {
  const auto m = build("hemisphere").model;
  const RiccatiOptions o;
  const GeodesicState st = make_start(m, 0.0, 0.0);
  const auto tr = integrate_geodesic(m, st, 100.0, o.geodesic);
  return evolve_riccati(m, tr, init_shape_operator(m, st, o.rho0, o.geodesic), o);
}

}  // namespace

TEST_CASE("catalog reference documents") {
  CHECK(model_from_json(nlohmann::json::parse(R"j({"catalog": "hemisphere"})j")).name == "hemisphere");
  const auto e = model_from_json(nlohmann::json::parse(R"j({"schema": "staticlab/1", "catalog": "dss", "params": {"m": 0.05}})j"));
  CHECK(e.name == "dss");
  CHECK(e.params.at("m") == 0.05);
}

TEST_CASE("explicit model round trip") {
  for (const char* name : {"hemisphere", "dss", "hyperbolic", "horowitz_myers", "cosh_cylinder"}) {
    CAPTURE(name);
    const auto original = build(name).model;
    const auto doc = model_to_json(original);
    const auto back = model_from_json(nlohmann::json::parse(doc.dump()));
    CHECK(dump_json(model_to_json(back.model)) == dump_json(doc));
    const auto g = chebyshev_grid(original.grid_domain(), 50);
    const auto a = static_residual(original, g);
    const auto b = static_residual(back.model, g);
    CHECK(a.sup_norm == doctest::Approx(b.sup_norm).epsilon(1e-12).scale(1e-12));
    CHECK(back.model.potential(g[7]) == original.potential(g[7]));
  }
}

TEST_CASE("explicit hyperbolic document verifies") {
  const auto e = model_from_json(nlohmann::json::parse(R"j({
    "schema": "staticlab/1", "name": "h3", "epsilon": -1,
    "domain": [0, "inf"], "sample_domain": [0, 5],
    "lapse": "1", "potential": "cosh(r)",
    "blocks": [{"fiber": "sphere", "dim": 2, "warp": "sinh(r)"}],
    "boundary_locus": []})j"));
  CHECK(static_residual(e.model, chebyshev_grid(e.model.grid_domain(), 100)).sup_norm < 1e-8);
}

TEST_CASE("malformed model documents") {
  const char* bad[] = {
      R"j({"schema": "staticlab/2", "catalog": "dss"})j",
      R"j({"schema": "staticlab/1", "catalog": "nope"})j",
      R"j({"schema": "staticlab/1", "name": "x", "epsilon": 0, "domain": [0, 1], "lapse": "1", "potential": "1 +", "blocks": []})j",
      R"j({"schema": "staticlab/1", "name": "x", "epsilon": 0, "domain": [0], "lapse": "1", "potential": "1", "blocks": []})j",
      R"j({"schema": "staticlab/1", "name": "x", "epsilon": 0, "domain": [0, 1], "lapse": "1", "potential": "1", "blocks": [{"fiber": "torus", "dim": 2, "warp": "r"}]})j",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(text)), Error);
  }
  CHECK_THROWS_AS(load_model(scratch_dir() / "missing.json"), Error);
  const fs::path garbage = scratch_dir() / "garbage.json";
  write_file_atomic(garbage, "{not json");
  try {
    load_model(garbage);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
  }
}

TEST_CASE("models without expression forms cannot be serialized") {
  StaticModel m = build("hemisphere").model;
  m.potential = Profile::from_jet([](const Jet& x) { return cos(x); });
  CHECK_THROWS_AS(model_to_json(m), Error);
}

TEST_CASE("error documents") {
  const auto j = error_json(Error(ErrorCode::Parameter, "bad m"));
  CHECK(j["schema"] == kSchemaVersion);
  CHECK(j["error"] == "parameter");
  CHECK(j["message"] == "bad m");
  CHECK(error_json(std::runtime_error("x"))["error"] == "internal");
}

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) CHECK(std::stod(format_double(x)) == x);
  CHECK(json_number(INFINITY) == "inf");
  CHECK(json_number(NAN) == "nan");
}

TEST_CASE("CSV tables") {
  CsvTable t({"a", "b"});
  t.add_row({1.0, 0.5});
  t.add_row({2.0, 0.25});
  CHECK(t.rows() == 2);
  CHECK(t.str().rfind("a,b\n", 0) == 0);
  CHECK_THROWS_AS(t.add_row({1.0}), Error);
}

TEST_CASE("atomic writes replace files") {
  const fs::path p = scratch_dir() / "atomic.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  CHECK(slurp(p) == "two");
  write_file_atomic(scratch_dir() / "nested" / "dir" / "x.txt", "y");
  CHECK(slurp(scratch_dir() / "nested" / "dir" / "x.txt") == "y");
  // A regular file where a directory is needed.
  CHECK_THROWS_AS(write_file_atomic(p / "child.txt", "z"), Error);
}

TEST_CASE("theta plot is deterministic and carries the overlay") {
  const auto rt = hemisphere_trace();
  const std::string a = theta_plot(rt, 3);
  const std::string b = theta_plot(hemisphere_trace(), 3);
  CHECK(a == b);
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a.find("stroke-dasharray") != std::string::npos);
  CHECK(a.find("(n-1)/s") != std::string::npos);
}

TEST_CASE("equality case: theta curve and overlay coincide") {
  // Both series are drawn on the same axes, so identical data gives identical paths.
  const auto rt = hemisphere_trace();
  const std::string svg = theta_plot(rt, 3);
  std::vector<std::string> paths;
  for (std::size_t p = svg.find(" d=\""); p != std::string::npos; p = svg.find(" d=\"", p + 1)) {
    paths.push_back(svg.substr(p + 4, svg.find('"', p + 4) - p - 4));
  }
  REQUIRE(paths.size() == 2);
  CHECK(paths[0] == paths[1]);
}

TEST_CASE("empty plots are rejected") {
  RiccatiTrace empty;
  CHECK_THROWS_AS(theta_plot(empty, 3), Error);
  PlotSpec spec{"t", "x", "y", false, false, {PlotSeries{"s", {NAN}, {1.0}}}, -1};
  try {
    render_svg(spec);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Precondition);
  }
}

TEST_CASE("s(eps) plot") {
  const auto m = build("hyperbolic").model;
  const auto rep = superharmonicity_check(m, INFINITY, chebyshev_grid(m.grid_domain(), 40));
  const std::string svg = s_of_eps_plot(rep);
  CHECK(svg == s_of_eps_plot(rep));
  CHECK(svg.find("<circle") != std::string::npos);
}
