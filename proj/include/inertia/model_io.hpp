#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "inertia/domain.hpp"
#include "inertia/estimator.hpp"

namespace inertia::est {

inline constexpr int kModelSchemaVersion = 1;

struct ModelPlant {
  PlantId id;
  std::string fuel;
  double w_gvas = 0.0;
  std::optional<double> h_seconds;  // absent when the nameplate is unknown
};

struct ModelFile {
  int schema_version = kModelSchemaVersion;
  double lambda = 0.0;
  double w_dem_gvas_per_gw = 0.0;
  std::vector<ModelPlant> plants;
  std::vector<std::vector<PlantId>> groups;
  SolveDiagnostics diagnostics;
};

// The fleet supplies fuel and nameplate for H reporting; plants absent from
// it are written with fuel "other" and a null h_seconds.
void save_model(const std::filesystem::path& path, const InertiaSolution& sol,
                std::span<const Plant> fleet);

ModelFile load_model(const std::filesystem::path& path);  // throws ModelError

// Minimal solution view for forecasting from a persisted model.
InertiaSolution solution_from_model(const ModelFile& model);

}  // namespace inertia::est
