#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "staticlab/static_check.hpp"

namespace staticlab {

struct ExpectedForms {
  std::optional<double> scalar;
  // θ as a function of s along radial traces from the model's start end.
  std::function<double(double)> theta_of_s;
  std::function<double(double)> s_of_r;
};

struct CatalogEntry {
  CatalogEntry(std::string entry_name, std::map<std::string, double> entry_params, StaticModel entry_model)
      : name(std::move(entry_name)), params(std::move(entry_params)), model(std::move(entry_model)) {}

  std::string name;
  std::map<std::string, double> params;
  StaticModel model;
  // False for entries that carry no static claim (Einstein example, broken
  // negative controls).
  bool static_claim = true;
  // Radial end toward which g/V² has a conformal boundary, if any.
  std::optional<double> conformal_end;
  ExpectedForms expected;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

std::vector<std::string> catalog_names();

// Known names: hemisphere {n}, cylinder {n}, dss {m}, hyperbolic {n},
// horowitz_myers {n, r0}, cosh_cylinder {n}, broken {k} (hemisphere with V^k).
CatalogEntry build(const std::string& name, const std::map<std::string, double>& params = {});

// Positive roots r₁ < r₂ of r − r³ − 2m for m ∈ (0, 1/(3√3)).
std::pair<double, double> dss_horizons(double m, int n = 3);

// V → V^k; the result keeps the metric and ε of the original.
StaticModel break_potential(const StaticModel& model, double k);

}  // namespace staticlab
