#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "inertia/domain.hpp"

namespace inertia::anticipate {

inline constexpr double kDefaultTriggerGvas = 140.0;
inline constexpr std::size_t kEnumerationLimit = 20;

enum class ActionKind : std::uint8_t { keep_running, start };

std::string_view to_string(ActionKind k) noexcept;
ActionKind action_kind_from_string(std::string_view s);  // throws ParseError

struct ActionCandidate {
  PlantId plant;
  ActionKind kind = ActionKind::keep_running;
  double w_gvas = 0.0;            // inertia added when selected
  double cost = 0.0;              // currency, exogenous
  double notice_minutes = 0.0;
  double ramp_mw_per_min = 1.0;   // > 0
  double stable_export_mw = 1.0;  // > 0
  bool currently_on = false;
};

struct ActionPlan {
  std::vector<std::pair<PlantId, ActionKind>> selected;
  double achieved_gvas = 0.0;
  double total_cost = 0.0;
  bool feasible = false;
  double baseline_gvas = 0.0;
  double trigger_gvas = kDefaultTriggerGvas;
};

// plant_id,kind,w_gvas,cost,notice_minutes,ramp_mw_per_min,stable_export_mw,currently_on
std::vector<ActionCandidate> load_candidates(const std::filesystem::path& path);

// keep_running candidates always pass; a start candidate passes iff
// notice + stable_export / ramp fits inside the lead time.
std::vector<ActionCandidate> filter_feasible(std::span<const ActionCandidate> candidates,
                                             double lead_time_minutes);

// Minimum-cost subset lifting baseline to the trigger; exact branch-and-bound
// over candidates in cost-per-GVAs order. Cost ties resolve to the
// lexicographically smallest plant-id set. When the trigger is out of reach
// the maximal-inertia subset is returned with feasible = false.
ActionPlan plan(std::span<const ActionCandidate> candidates, double baseline_gvas,
                double trigger_gvas = kDefaultTriggerGvas, double lead_time_minutes = 180.0);

// Full 2^n enumeration with the same tie rule; the verification oracle for
// plan(). Throws SizeError above kEnumerationLimit candidates.
ActionPlan brute_force_plan(std::span<const ActionCandidate> candidates, double baseline_gvas,
                            double trigger_gvas = kDefaultTriggerGvas,
                            double lead_time_minutes = 180.0);

// Recomputes achieved inertia and cost from scratch and checks them against
// the plan fields and the feasibility flag.
bool verify_plan(const ActionPlan& plan, std::span<const ActionCandidate> candidates,
                 double baseline_gvas, double trigger_gvas);

std::string plan_to_json(const ActionPlan& plan);

}  // namespace inertia::anticipate
