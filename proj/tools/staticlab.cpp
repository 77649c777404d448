// staticlab: verification suites for static triples from the command line.
//
//   staticlab verify hemisphere
//   staticlab verify hemisphere --break-potential 1.5
//   staticlab riccati dss --m 0.1
//   staticlab boundary hyperbolic
//   staticlab solve-warped --n 4 --init 1,0.3,1,0.2
//   staticlab catalog list | dump <name>
//   staticlab all
//
// Exit status: 0 when every enabled check passes, 1 when a check fails, 2 on
// errors (a JSON error document is written to standard error).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "staticlab/acceptance.hpp"
#include "staticlab/boundary.hpp"
#include "staticlab/catalog.hpp"
#include "staticlab/errors.hpp"
#include "staticlab/grid.hpp"
#include "staticlab/model_io.hpp"
#include "staticlab/report.hpp"
#include "staticlab/riccati.hpp"
#include "staticlab/svg.hpp"
#include "staticlab/warped.hpp"

using namespace staticlab;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string command;
  std::string model;
  std::map<std::string, double> params;
  std::optional<double> break_potential;
  int grid = 1000;
  double tol = 1e-8;
  double rtol = 1e-12;
  double atol = 1e-14;
  std::string out = "staticlab_out";
  std::vector<std::string> emit{"json", "csv", "svg"};
  // riccati
  std::string geodesic;
  std::string init = "point";
  std::size_t suite = 0;
  // boundary
  std::optional<double> end;
  // solve-warped
  int n = 4;
  std::string initial = "1,0.3,1,0.2";
  double span = 5.0;
  // catalog
  std::string catalog_action = "list";
  std::size_t suite_count = 100;
};

bool emits(const RunConfig& c, const std::string& kind) {
  return std::find(c.emit.begin(), c.emit.end(), kind) != c.emit.end();
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::Parse, what + ": cannot parse '" + item + "'");
    }
  }
  if (out.size() != expected) {
    fail(ErrorCode::Parse, what + " needs " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

void apply_config(RunConfig& c, const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::Parse, "config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "model") c.model = v.get<std::string>();
      else if (key == "params") {
        for (const auto& [k, p] : v.items()) c.params[k] = p.get<double>();
      } else if (key == "break_potential") c.break_potential = v.get<double>();
      else if (key == "grid") c.grid = v.get<int>();
      else if (key == "tol") c.tol = v.get<double>();
      else if (key == "rtol") c.rtol = v.get<double>();
      else if (key == "atol") c.atol = v.get<double>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "emit") c.emit = v.get<std::vector<std::string>>();
      else if (key == "geodesic") c.geodesic = v.get<std::string>();
      else if (key == "init") c.init = v.get<std::string>();
      else if (key == "suite") c.suite = v.get<std::size_t>();
      else if (key == "end") c.end = v.get<double>();
      else if (key == "n") c.n = v.get<int>();
      else if (key == "initial") c.initial = v.get<std::string>();
      else if (key == "span") c.span = v.get<double>();
      else if (key == "suite_count") c.suite_count = v.get<std::size_t>();
      else if (key != "command" && key != "schema") fail(ErrorCode::Parse, "unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void validate(const RunConfig& c) {
  if (c.grid < 16) fail(ErrorCode::Parameter, "grid size must be at least 16");
  if (!(c.tol > 0) || !(c.rtol > 0) || !(c.atol > 0)) fail(ErrorCode::Parameter, "tolerances must be positive");
  for (const auto& e : c.emit) {
    if (e != "json" && e != "csv" && e != "svg") fail(ErrorCode::Parameter, "unknown emit kind '" + e + "'");
  }
}

CatalogEntry resolve_model(const RunConfig& c) {
  if (c.model.empty()) fail(ErrorCode::Parameter, "no model given");
  CatalogEntry e = c.model.size() > 5 && c.model.substr(c.model.size() - 5) == ".json" ? load_model(c.model)
                                                                                      : build(c.model, c.params);
  if (c.break_potential) {
    e.model = break_potential(e.model, *c.break_potential);
    e.name = e.model.name;
    e.static_claim = false;
  }
  return e;
}

class Artifacts {
 public:
  explicit Artifacts(const RunConfig& c) : dir_(c.out) {}

  void write(const std::string& name, const std::string& contents) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) fail(ErrorCode::Io, "cannot create " + dir_.string() + ": " + ec.message());
    write_file_atomic(dir_ / name, contents);
    std::cout << "wrote " << (dir_ / name).string() << "\n";
  }

 private:
  fs::path dir_;
};

GeodesicOptions geodesic_options(const RunConfig& c) {
  GeodesicOptions g = riccati_geodesic_defaults();
  g.rtol = c.rtol;
  g.atol = c.atol;
  return g;
}

int cmd_verify(const RunConfig& c) {
  const CatalogEntry e = resolve_model(c);
  const auto grid = chebyshev_grid(e.model.grid_domain(), c.grid);
  const ResidualReport rep = static_residual(e.model, grid);
  const TraceSystemReport trace = trace_system_residual(e.model, grid);
  const double scalar = scalar_constancy(e.model, grid);
  const bool pass = rep.sup_norm < c.tol;

  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["command"] = "verify";
  j["model"] = e.name;
  j["static"] = rep.to_json();
  j["trace_tensor_sup_norm"] = json_number(trace.tensor.sup_norm);
  j["trace_laplacian_sup_norm"] = json_number(trace.laplacian.sup_norm);
  j["trace_equivalent"] = trace.equivalent(c.tol);
  j["scalar_variation"] = json_number(scalar);
  j["tolerance"] = json_number(c.tol);
  j["pass"] = pass;
  Artifacts out(c);
  if (emits(c, "json")) out.write("verify_" + e.name + ".json", dump_json(j));
  if (emits(c, "csv")) out.write("verify_" + e.name + ".csv", rep.to_csv());
  std::cout << "verify " << e.name << ": sup_norm " << format_double(rep.sup_norm) << (pass ? " PASS" : " FAIL")
            << "\n";
  return pass ? 0 : 1;
}

int cmd_riccati(const RunConfig& c) {
  const CatalogEntry e = resolve_model(c);
  const int n = e.model.dim();
  RiccatiOptions ro;
  ro.geodesic = geodesic_options(c);
  Artifacts out(c);
  bool pass = true;
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["command"] = "riccati";
  j["model"] = e.name;

  const Interval d = e.model.grid_domain();
  double r = 0.5 * (d.lo + d.hi), heading = 0.5;
  if (!c.geodesic.empty()) {
    const auto v = parse_list(c.geodesic, 2, "--geodesic");
    r = v[0];
    heading = v[1];
  }
  const GeodesicState start = make_start(e.model, r, heading);
  const GeodesicTrace tr = integrate_geodesic(e.model, start, 100.0, ro.geodesic);
  ShapeOperatorState init;
  if (c.init == "point") {
    init = init_shape_operator(e.model, start, ro.rho0, ro.geodesic);
  } else if (c.init == "level") {
    if (std::abs(std::sin(heading)) > 0) fail(ErrorCode::Parameter, "level-set initialization needs a radial heading");
    init = init_level_set(e.model, r, std::cos(heading) > 0 ? 1 : -1);
  } else {
    fail(ErrorCode::Parameter, "--init must be 'point' or 'level'");
  }
  const RiccatiTrace rt = evolve_riccati(e.model, tr, init, ro);
  const InequalityReport ineq = check_inequality(rt, n);
  const ComparisonReport comp = check_comparison(rt, n);
  const NullLiftReport lift = null_lift_check(e.model, tr);
  pass = ineq.pass && comp.pass;
  j["summary"] = riccati_summary(rt, ineq, comp);
  j["null_lift"] = lift.to_json();
  if (lift.max_null < 1e-7 && lift.max_geodesic < 1e-7) {
    j["raychaudhuri"] = raychaudhuri_check(e.model, tr, rt).to_json();
  }
  if (c.suite > 0) {
    SuiteOptions so;
    so.count = c.suite;
    so.riccati = ro;
    const SuiteResult s = inequality_suite(e.model, so);
    j["suite"] = s.to_json();
    pass = pass && s.inequality_pass && s.comparison_pass;
  }
  j["pass"] = pass;
  if (emits(c, "json")) out.write("riccati_" + e.name + ".json", dump_json(j));
  if (emits(c, "csv")) out.write("riccati_" + e.name + ".csv", rt.to_csv());
  if (emits(c, "svg")) out.write("riccati_" + e.name + ".svg", theta_plot(rt, n));
  std::cout << "riccati " << e.name << ": min slack " << format_double(ineq.min_slack) << ", comparison excess "
            << format_double(comp.max_excess) << (pass ? " PASS" : " FAIL") << "\n";
  return pass ? 0 : 1;
}

int cmd_boundary(const RunConfig& c) {
  const CatalogEntry e = resolve_model(c);
  const double end = c.end ? *c.end : (e.conformal_end ? *e.conformal_end : e.model.metric.domain().hi);
  const BoundarySuite suite = boundary_suite(e.model, end, std::min(c.grid, 400));
  Artifacts out(c);
  if (emits(c, "json")) out.write("boundary_" + e.name + ".json", dump_json(suite.to_json()));
  if (emits(c, "svg")) out.write("boundary_" + e.name + ".svg", s_of_eps_plot(suite.superharmonicity));
  std::cout << "boundary " << e.name << ": min(-Lu) " << format_double(suite.superharmonicity.min_neg_lu)
            << ", slope " << format_double(suite.superharmonicity.slope) << (suite.pass() ? " PASS" : " FAIL") << "\n";
  return suite.pass() ? 0 : 1;
}

int cmd_solve_warped(const RunConfig& c) {
  const auto v = parse_list(c.initial, 4, "--init");
  WarpedOptions wo;
  wo.rtol = c.rtol;
  wo.atol = c.atol;
  const WarpedTrajectory t = integrate_warped({0.0, v[0], v[1], v[2], v[3]}, c.n, c.span, wo);
  const ConstructionReport rep = verify_construction(t);
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["command"] = "solve-warped";
  j["n"] = c.n;
  j["initial"] = json_array(v);
  j["stop"] = t.boundary_log();
  j["verification"] = rep.to_json();
  j["pass"] = rep.pass();
  Artifacts out(c);
  const std::string stem = "warped_n" + std::to_string(c.n);
  if (emits(c, "json")) out.write(stem + ".json", dump_json(j));
  if (emits(c, "csv")) out.write(stem + ".csv", t.to_csv());
  std::cout << "solve-warped n=" << c.n << ": stop " << to_string(t.stop) << ", residuals "
            << format_double(rep.reduced.sup_norm) << " / " << format_double(rep.full.sup_norm)
            << (rep.pass() ? " PASS" : " FAIL") << "\n";
  return rep.pass() ? 0 : 1;
}

int cmd_catalog(const RunConfig& c) {
  if (c.catalog_action == "list") {
    for (const auto& name : catalog_names()) std::cout << name << "\n";
    return 0;
  }
  if (c.catalog_action == "dump") {
    const CatalogEntry e = resolve_model(c);
    std::cout << dump_json(model_to_json(e.model));
    return 0;
  }
  fail(ErrorCode::Parameter, "catalog action must be 'list' or 'dump'");
}

int cmd_all(const RunConfig& c) {
  AcceptanceOptions o;
  o.suite_count = c.suite_count;
  const auto results = run_acceptance(o);
  for (const auto& r : results) std::cout << r.line() << "\n";
  Artifacts out(c);
  if (emits(c, "json")) out.write("acceptance.json", dump_json(acceptance_json(results)));
  const bool pass = acceptance_passed(results);
  std::cout << (pass ? "all PASS" : "all FAIL") << "\n";
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Verification suites for static triples"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config;
  std::string emit;
  app.add_option("--config", config, "JSON file whose keys override the flags");
  app.add_option("--out", c.out, "Output directory");
  app.add_option("--emit", emit, "Comma-separated artifact kinds: json,csv,svg");

  auto model_options = [&](CLI::App* sub) {
    sub->add_option("model", c.model, "Catalog name or model JSON path");
    sub->add_option("--m", [&](const CLI::results_t& r) { c.params["m"] = std::stod(r[0]); return true; }, "dss mass");
    sub->add_option("--dim", [&](const CLI::results_t& r) { c.params["n"] = std::stod(r[0]); return true; },
                    "Model dimension");
    sub->add_option("--r0", [&](const CLI::results_t& r) { c.params["r0"] = std::stod(r[0]); return true; },
                    "Horowitz-Myers r0");
    sub->add_option("--break-potential", c.break_potential, "Replace V by V^k (negative control)");
    sub->add_option("--grid", c.grid, "Grid size (>= 16)");
    sub->add_option("--tol", c.tol, "Pass tolerance");
    sub->add_option("--rtol", c.rtol, "Integrator relative tolerance");
    sub->add_option("--atol", c.atol, "Integrator absolute tolerance");
  };
  CLI::App* verify = app.add_subcommand("verify", "Static residual suite");
  model_options(verify);
  CLI::App* riccati = app.add_subcommand("riccati", "Geodesic flow, Riccati engine and inequality checks");
  model_options(riccati);
  riccati->add_option("--geodesic", c.geodesic, "Start as r,heading (heading in radians from the radial direction)");
  riccati->add_option("--init", c.init, "Shape operator initialization: point or level");
  riccati->add_option("--suite", c.suite, "Also run a randomized suite of this many geodesics");
  CLI::App* boundary = app.add_subcommand("boundary", "Superharmonicity and boundary convexity");
  model_options(boundary);
  boundary->add_option("--end", c.end, "Radial end (default: the conformal end)");
  CLI::App* warped = app.add_subcommand("solve-warped", "Integrate and verify the reduced warped system");
  warped->add_option("--n", c.n, "Dimension n >= 3");
  warped->add_option("--init", c.initial, "f,f',V,V' at s = 0");
  warped->add_option("--span", c.span, "Integration length");
  warped->add_option("--rtol", c.rtol, "Integrator relative tolerance");
  warped->add_option("--atol", c.atol, "Integrator absolute tolerance");
  CLI::App* catalog = app.add_subcommand("catalog", "List models or dump one as JSON");
  catalog->add_option("action", c.catalog_action, "list or dump");
  model_options(catalog);
  CLI::App* all = app.add_subcommand("all", "Full acceptance run");
  all->add_option("--suite-count", c.suite_count, "Geodesics per randomized suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    nlohmann::ordered_json err{{"schema", kSchemaVersion}, {"error", "parse"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  }

  try {
    for (const auto* sub : app.get_subcommands()) c.command = sub->get_name();
    if (!emit.empty()) {
      c.emit.clear();
      std::stringstream ss(emit);
      std::string item;
      while (std::getline(ss, item, ',')) c.emit.push_back(item);
    }
    if (!config.empty()) apply_config(c, config);
    validate(c);
    if (c.command == "verify") return cmd_verify(c);
    if (c.command == "riccati") return cmd_riccati(c);
    if (c.command == "boundary") return cmd_boundary(c);
    if (c.command == "solve-warped") return cmd_solve_warped(c);
    if (c.command == "catalog") return cmd_catalog(c);
    if (c.command == "all") return cmd_all(c);
    fail(ErrorCode::Parameter, "unknown command");
  } catch (const std::exception& e) {
    std::cerr << error_json(e).dump() << "\n";
    return 2;
  }
}
