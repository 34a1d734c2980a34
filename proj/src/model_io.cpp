#include "inertia/model_io.hpp"

#include <fstream>
#include <map>

#include <json.hpp>

namespace inertia::est {

using nlohmann::json;

void save_model(const std::filesystem::path& path, const InertiaSolution& sol,
                std::span<const Plant> fleet) {
  std::map<PlantId, const Plant*> by_id;
  for (const auto& p : fleet) by_id[p.id] = &p;

  json plants = json::array();
  for (const auto& [id, w] : sol.w) {
    json entry;
    entry["plant_id"] = id;
    const auto it = by_id.find(id);
    entry["fuel"] = std::string(to_string(it != by_id.end() ? it->second->fuel : FuelType::other));
    entry["w_gvas"] = w;
    if (it != by_id.end()) {
      entry["h_seconds"] = h_constant(w, it->second->nameplate_mva);
    } else {
      entry["h_seconds"] = nullptr;
    }
    plants.push_back(std::move(entry));
  }

  json groups = json::array();
  for (const auto& g : sol.groups) groups.push_back(g);

  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["lambda"] = sol.lambda;
  doc["w_dem_gvas_per_gw"] = sol.w_dem;
  doc["plants"] = std::move(plants);
  doc["groups"] = std::move(groups);
  doc["diagnostics"] = {
      {"rmse_gvas", sol.diagnostics.rmse_gvas},
      {"mae_gvas", sol.diagnostics.mae_gvas},
      {"n_nonzero", sol.diagnostics.n_nonzero},
      {"exact", sol.diagnostics.exact},
  };

  std::ofstream out(path);
  if (!out) throw ModelError("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw ModelError("failed writing " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ModelError(path.string() + ": malformed model JSON: " + e.what());
  }
  try {
    ModelFile model;
    model.schema_version = doc.at("schema_version").get<int>();
    if (model.schema_version != kModelSchemaVersion) {
      throw ModelError(path.string() + ": model schema version " +
                       std::to_string(model.schema_version) + " not supported (expected " +
                       std::to_string(kModelSchemaVersion) + ")");
    }
    model.lambda = doc.at("lambda").get<double>();
    model.w_dem_gvas_per_gw = doc.at("w_dem_gvas_per_gw").get<double>();
    for (const auto& entry : doc.at("plants")) {
      ModelPlant p;
      p.id = entry.at("plant_id").get<std::string>();
      p.fuel = entry.at("fuel").get<std::string>();
      p.w_gvas = entry.at("w_gvas").get<double>();
      if (!entry.at("h_seconds").is_null()) {
        p.h_seconds = entry.at("h_seconds").get<double>();
      }
      model.plants.push_back(std::move(p));
    }
    for (const auto& g : doc.at("groups")) {
      model.groups.push_back(g.get<std::vector<PlantId>>());
    }
    const auto& diag = doc.at("diagnostics");
    model.diagnostics.rmse_gvas = diag.at("rmse_gvas").get<double>();
    model.diagnostics.mae_gvas = diag.at("mae_gvas").get<double>();
    model.diagnostics.n_nonzero = diag.at("n_nonzero").get<int>();
    model.diagnostics.exact = diag.at("exact").get<bool>();
    return model;
  } catch (const json::exception& e) {
    throw ModelError(path.string() + ": invalid model document: " + e.what());
  }
}

InertiaSolution solution_from_model(const ModelFile& model) {
  InertiaSolution sol;
  sol.lambda = model.lambda;
  sol.w_dem = model.w_dem_gvas_per_gw;
  sol.diagnostics = model.diagnostics;
  for (const auto& p : model.plants) sol.w[p.id] = p.w_gvas;
  sol.groups = model.groups;
  return sol;
}

}  // namespace inertia::est
