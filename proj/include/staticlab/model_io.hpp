#pragma once

// Model documents (schema "staticlab/1"). Either a catalog reference
//   {"schema": "staticlab/1", "catalog": "dss", "params": {"m": 0.1}}
// or an explicit radial model
//   {"schema": "staticlab/1", "name": "...", "epsilon": -1,
//    "domain": [0, "inf"], "sample_domain": [0, 5], "params": {...},
//    "lapse": "1", "potential": "cosh(r)",
//    "blocks": [{"fiber": "sphere", "dim": 2, "warp": "sinh(r)"}],
//    "boundary_locus": []}
// Einstein blocks carry "lambda".

#include <filesystem>
#include <string>

#include "json.hpp"
#include "staticlab/catalog.hpp"

namespace staticlab {

CatalogEntry model_from_json(const nlohmann::json& doc);
CatalogEntry load_model(const std::filesystem::path& path);

// Throws Unsupported when a profile has no expression form.
nlohmann::ordered_json model_to_json(const StaticModel& model);

// Error document written to standard error by the command-line tool.
nlohmann::ordered_json error_json(const std::exception& e);

}  // namespace staticlab
