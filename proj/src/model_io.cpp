#include "staticlab/model_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "staticlab/errors.hpp"
#include "staticlab/report.hpp"

namespace staticlab {

namespace {

double number(const nlohmann::json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  fail(ErrorCode::Parse, what + " must be a number or \"inf\"/\"-inf\"");
}

const nlohmann::json& field(const nlohmann::json& doc, const std::string& key) {
  if (!doc.contains(key)) fail(ErrorCode::Parse, "missing field '" + key + "'");
  return doc.at(key);
}

Interval interval(const nlohmann::json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2) fail(ErrorCode::Parse, what + " must be a two-element array");
  return {number(v[0], what), number(v[1], what)};
}

std::string text(const nlohmann::json& v, const std::string& what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_double(v.get<double>());
  fail(ErrorCode::Parse, what + " must be an expression string");
}

std::map<std::string, double> parameters(const nlohmann::json& doc) {
  std::map<std::string, double> p;
  if (!doc.contains("params")) return p;
  const auto& obj = doc.at("params");
  if (!obj.is_object()) fail(ErrorCode::Parse, "params must be an object");
  for (const auto& [k, v] : obj.items()) p[k] = number(v, "params." + k);
  return p;
}

std::string expression_text(const Profile& p, const std::string& what) {
  if (!p.expression_form()) fail(ErrorCode::Unsupported, what + " has no expression form");
  return p.expression_form()->source();
}

}  // namespace

CatalogEntry model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) fail(ErrorCode::Parse, "model document must be a JSON object");
  if (doc.contains("schema") && doc.at("schema") != kSchemaVersion) {
    fail(ErrorCode::Parse, "unsupported schema " + doc.at("schema").dump());
  }
  const auto params = parameters(doc);
  if (doc.contains("catalog")) return build(text(doc.at("catalog"), "catalog"), params);

  const std::string name = text(field(doc, "name"), "name");
  const Interval domain = interval(field(doc, "domain"), "domain");
  std::vector<WarpedBlock> blocks;
  const auto& jb = field(doc, "blocks");
  if (!jb.is_array() || jb.empty()) fail(ErrorCode::Parse, "blocks must be a non-empty array");
  for (const auto& b : jb) {
    const FiberKind kind = fiber_kind_from_string(text(field(b, "fiber"), "fiber"));
    const auto& jd = field(b, "dim");
    if (!jd.is_number_integer() || jd.get<int>() < 1) fail(ErrorCode::Parse, "block dim must be a positive integer");
    const int dim = jd.get<int>();
    FiberBlock fiber = kind == FiberKind::Einstein ? FiberBlock::einstein(dim, number(field(b, "lambda"), "lambda"))
                                                   : FiberBlock::constant_curvature(dim, kind);
    blocks.push_back({fiber, Profile::expression(text(field(b, "warp"), "warp"), params)});
  }
  const Profile lapse = doc.contains("lapse") ? Profile::expression(text(doc.at("lapse"), "lapse"), params)
                                              : Profile::constant(1.0);
  const Profile potential = Profile::expression(text(field(doc, "potential"), "potential"), params);
  const auto& je = field(doc, "epsilon");
  if (!je.is_number_integer()) fail(ErrorCode::Parse, "epsilon must be -1, 0 or 1");
  std::vector<double> locus;
  if (doc.contains("boundary_locus")) {
    for (const auto& v : doc.at("boundary_locus")) locus.push_back(number(v, "boundary_locus"));
  }
  std::optional<Interval> sample;
  if (doc.contains("sample_domain")) sample = interval(doc.at("sample_domain"), "sample_domain");

  StaticModel model{name, RadialMetric(domain, lapse, std::move(blocks)), potential, je.get<int>(), locus, sample};
  validate_model(model);
  CatalogEntry e{name, params, std::move(model)};
  if (doc.contains("static_claim")) e.static_claim = doc.at("static_claim").get<bool>();
  if (doc.contains("conformal_end")) e.conformal_end = number(doc.at("conformal_end"), "conformal_end");
  return e;
}

CatalogEntry load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  return model_from_json(doc);
}

nlohmann::ordered_json model_to_json(const StaticModel& model) {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["name"] = model.name;
  j["epsilon"] = model.epsilon;
  j["domain"] = {json_number(model.metric.domain().lo), json_number(model.metric.domain().hi)};
  if (model.sample_domain) j["sample_domain"] = {json_number(model.sample_domain->lo), json_number(model.sample_domain->hi)};
  // Parameters of all expressions, merged.
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  auto collect = [&](const Profile& p) {
    if (p.expression_form()) {
      for (const auto& [k, v] : p.expression_form()->parameters()) params[k] = json_number(v);
    }
  };
  collect(model.metric.lapse());
  collect(model.potential);
  for (const auto& b : model.metric.blocks()) collect(b.warp);
  j["params"] = params;
  j["lapse"] = expression_text(model.metric.lapse(), "lapse");
  j["potential"] = expression_text(model.potential, "potential");
  auto blocks = nlohmann::ordered_json::array();
  for (const auto& b : model.metric.blocks()) {
    nlohmann::ordered_json jb;
    jb["fiber"] = to_string(b.fiber.kind());
    jb["dim"] = b.fiber.dim();
    if (b.fiber.kind() == FiberKind::Einstein) jb["lambda"] = json_number(b.fiber.ricci());
    jb["warp"] = expression_text(b.warp, "warp");
    blocks.push_back(jb);
  }
  j["blocks"] = blocks;
  j["boundary_locus"] = json_array(model.boundary_locus);
  return j;
}

nlohmann::ordered_json error_json(const std::exception& e) {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    j["error"] = std::string(to_string(err->code()));
  } else {
    j["error"] = "internal";
  }
  j["message"] = e.what();
  return j;
}

}  // namespace staticlab
