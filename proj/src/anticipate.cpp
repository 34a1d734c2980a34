#include "inertia/anticipate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "inertia/csv.hpp"

namespace inertia::anticipate {

std::string_view to_string(ActionKind k) noexcept {
  return k == ActionKind::keep_running ? "keep_running" : "start";
}

ActionKind action_kind_from_string(std::string_view s) {
  if (s == "keep_running") return ActionKind::keep_running;
  if (s == "start") return ActionKind::start;
  throw ParseError("unknown action kind '" + std::string(s) + "'");
}

namespace {

void validate(const ActionCandidate& c, const std::string& where) {
  auto bad = [&](const std::string& what) { throw ParseError(where + ": " + what); };
  if (c.plant.empty()) bad("empty plant_id");
  if (!std::isfinite(c.w_gvas) || c.w_gvas < 0.0) bad("w_gvas must be non-negative");
  if (!std::isfinite(c.cost) || c.cost < 0.0) bad("cost must be non-negative");
  if (!std::isfinite(c.notice_minutes) || c.notice_minutes < 0.0) {
    bad("notice_minutes must be non-negative");
  }
  if (!(c.ramp_mw_per_min > 0.0)) bad("ramp_mw_per_min must be strictly positive");
  if (!(c.stable_export_mw > 0.0)) bad("stable_export_mw must be strictly positive");
  if (c.kind == ActionKind::keep_running && !c.currently_on) {
    bad("keep_running candidate must be currently on");
  }
  if (c.kind == ActionKind::start && c.currently_on) {
    bad("start candidate must not be currently on");
  }
}

using Selection = std::vector<std::size_t>;  // indices into the candidate list

std::vector<PlantId> sorted_ids(const Selection& sel,
                                std::span<const ActionCandidate> candidates) {
  std::vector<PlantId> ids;
  ids.reserve(sel.size());
  for (const auto i : sel) ids.push_back(candidates[i].plant);
  std::sort(ids.begin(), ids.end());
  return ids;
}

ActionPlan plan_from_selection(const Selection& sel, std::span<const ActionCandidate> candidates,
                               double baseline, double trigger) {
  ActionPlan plan;
  plan.baseline_gvas = baseline;
  plan.trigger_gvas = trigger;
  plan.achieved_gvas = baseline;
  for (const auto i : sel) {
    plan.selected.emplace_back(candidates[i].plant, candidates[i].kind);
    plan.achieved_gvas += candidates[i].w_gvas;
    plan.total_cost += candidates[i].cost;
  }
  std::sort(plan.selected.begin(), plan.selected.end());
  plan.feasible = plan.achieved_gvas >= trigger;
  return plan;
}

// all feasible candidates that add inertia; the unique maximal-achieved set
Selection maximal_inertia_selection(std::span<const ActionCandidate> feasible) {
  Selection sel;
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    if (feasible[i].w_gvas > 0.0) sel.push_back(i);
  }
  return sel;
}

struct CoverSearch {
  std::span<const ActionCandidate> cands;  // sorted by cost-per-GVAs
  double need = 0.0;
  std::vector<double> suffix_w;
  double best_cost = std::numeric_limits<double>::infinity();
  Selection best;
  std::vector<PlantId> best_ids;
  Selection current;
  double tie_eps = 0.0;

  // LP bound: fill the remaining gap fractionally in ratio order.
  double fractional_bound(std::size_t i, double gap) const {
    double cost = 0.0;
    for (std::size_t k = i; k < cands.size() && gap > 0.0; ++k) {
      if (cands[k].w_gvas <= 0.0) continue;
      if (cands[k].w_gvas >= gap) {
        cost += cands[k].cost * (gap / cands[k].w_gvas);
        gap = 0.0;
      } else {
        cost += cands[k].cost;
        gap -= cands[k].w_gvas;
      }
    }
    return cost;
  }

  void offer(double cost) {
    if (cost < best_cost - tie_eps) {
      best_cost = cost;
      best = current;
      best_ids = sorted_ids(current, cands);
      return;
    }
    if (cost <= best_cost + tie_eps) {
      auto ids = sorted_ids(current, cands);
      if (ids < best_ids) {
        best_cost = std::min(best_cost, cost);
        best = current;
        best_ids = std::move(ids);
      }
    }
  }

  void search(std::size_t i, double cost, double covered) {
    if (covered >= need) {
      offer(cost);
      return;  // costs are non-negative, no superset improves
    }
    if (i == cands.size()) return;
    if (covered + suffix_w[i] < need) return;
    if (cost + fractional_bound(i, need - covered) > best_cost + tie_eps) return;

    current.push_back(i);
    search(i + 1, cost + cands[i].cost, covered + cands[i].w_gvas);
    current.pop_back();
    search(i + 1, cost, covered);
  }
};

}  // namespace

std::vector<ActionCandidate> load_candidates(const std::filesystem::path& path) {
  csv::Reader r(path);
  const int c_plant = r.require("plant_id");
  const int c_kind = r.require("kind");
  const int c_w = r.require("w_gvas");
  const int c_cost = r.require("cost");
  const int c_notice = r.require("notice_minutes");
  const int c_ramp = r.require("ramp_mw_per_min");
  const int c_stable = r.require("stable_export_mw");
  const int c_on = r.require("currently_on");

  std::vector<ActionCandidate> out;
  while (r.next()) {
    ActionCandidate c;
    c.plant = std::string(r.field(c_plant));
    c.kind = action_kind_from_string(r.field(c_kind));
    c.w_gvas = r.number(c_w);
    c.cost = r.number(c_cost);
    c.notice_minutes = r.number(c_notice);
    c.ramp_mw_per_min = r.number(c_ramp);
    c.stable_export_mw = r.number(c_stable);
    const auto on = r.field(c_on);
    if (on == "1" || on == "true") {
      c.currently_on = true;
    } else if (on == "0" || on == "false") {
      c.currently_on = false;
    } else {
      throw ParseError(path.string() + ":" + std::to_string(r.line()) +
                       ": currently_on must be 0/1/true/false");
    }
    validate(c, path.string() + ":" + std::to_string(r.line()));
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ActionCandidate> filter_feasible(std::span<const ActionCandidate> candidates,
                                             double lead_time_minutes) {
  if (!(lead_time_minutes >= 0.0)) {
    throw std::invalid_argument("lead time must be non-negative");
  }
  std::vector<ActionCandidate> out;
  for (const auto& c : candidates) {
    if (c.kind == ActionKind::keep_running) {
      out.push_back(c);
      continue;
    }
    const double time_to_stable = c.notice_minutes + c.stable_export_mw / c.ramp_mw_per_min;
    if (time_to_stable <= lead_time_minutes) out.push_back(c);
  }
  return out;
}

ActionPlan plan(std::span<const ActionCandidate> candidates, double baseline_gvas,
                double trigger_gvas, double lead_time_minutes) {
  auto feasible = filter_feasible(candidates, lead_time_minutes);

  if (baseline_gvas >= trigger_gvas) {
    return plan_from_selection({}, feasible, baseline_gvas, trigger_gvas);
  }

  const double need = trigger_gvas - baseline_gvas;
  double total_w = 0.0;
  for (const auto& c : feasible) total_w += c.w_gvas;
  if (total_w < need) {
    return plan_from_selection(maximal_inertia_selection(feasible), feasible, baseline_gvas,
                               trigger_gvas);
  }

  // zero-inertia candidates only add cost; sort the rest by cost-per-GVAs
  std::vector<ActionCandidate> sorted;
  for (const auto& c : feasible) {
    if (c.w_gvas > 0.0) sorted.push_back(c);
  }
  std::sort(sorted.begin(), sorted.end(), [](const ActionCandidate& a, const ActionCandidate& b) {
    const double ra = a.cost / a.w_gvas;
    const double rb = b.cost / b.w_gvas;
    if (ra != rb) return ra < rb;
    if (a.plant != b.plant) return a.plant < b.plant;
    return a.kind < b.kind;
  });

  CoverSearch search;
  search.cands = sorted;
  search.need = need;
  search.suffix_w.assign(sorted.size() + 1, 0.0);
  for (std::size_t i = sorted.size(); i-- > 0;) {
    search.suffix_w[i] = search.suffix_w[i + 1] + sorted[i].w_gvas;
  }
  double cost_scale = 1.0;
  for (const auto& c : sorted) cost_scale = std::max(cost_scale, c.cost);
  search.tie_eps = 1e-9 * cost_scale;
  search.search(0, 0.0, 0.0);

  return plan_from_selection(search.best, sorted, baseline_gvas, trigger_gvas);
}

ActionPlan brute_force_plan(std::span<const ActionCandidate> candidates, double baseline_gvas,
                            double trigger_gvas, double lead_time_minutes) {
  auto feasible = filter_feasible(candidates, lead_time_minutes);
  if (feasible.size() > kEnumerationLimit) {
    throw SizeError("brute_force_plan limited to " + std::to_string(kEnumerationLimit) +
                    " candidates");
  }
  if (baseline_gvas >= trigger_gvas) {
    return plan_from_selection({}, feasible, baseline_gvas, trigger_gvas);
  }

  const double need = trigger_gvas - baseline_gvas;
  double cost_scale = 1.0;
  for (const auto& c : feasible) cost_scale = std::max(cost_scale, c.cost);
  const double tie_eps = 1e-9 * cost_scale;

  const std::size_t n_masks = std::size_t(1) << feasible.size();
  double best_cost = std::numeric_limits<double>::infinity();
  Selection best;
  std::vector<PlantId> best_ids;
  bool found = false;
  for (std::size_t mask = 0; mask < n_masks; ++mask) {
    double cost = 0.0;
    double covered = 0.0;
    Selection sel;
    for (std::size_t i = 0; i < feasible.size(); ++i) {
      if ((mask >> i) & 1u) {
        cost += feasible[i].cost;
        covered += feasible[i].w_gvas;
        sel.push_back(i);
      }
    }
    if (covered < need) continue;
    if (!found || cost < best_cost - tie_eps) {
      found = true;
      best_cost = cost;
      best = sel;
      best_ids = sorted_ids(sel, feasible);
    } else if (cost <= best_cost + tie_eps) {
      auto ids = sorted_ids(sel, feasible);
      if (ids < best_ids) {
        best_cost = std::min(best_cost, cost);
        best = sel;
        best_ids = std::move(ids);
      }
    }
  }
  if (!found) {
    return plan_from_selection(maximal_inertia_selection(feasible), feasible, baseline_gvas,
                               trigger_gvas);
  }
  return plan_from_selection(best, feasible, baseline_gvas, trigger_gvas);
}

bool verify_plan(const ActionPlan& plan, std::span<const ActionCandidate> candidates,
                 double baseline_gvas, double trigger_gvas) {
  double achieved = baseline_gvas;
  double cost = 0.0;
  std::vector<std::pair<PlantId, ActionKind>> seen;
  for (const auto& [id, kind] : plan.selected) {
    const auto it = std::find_if(candidates.begin(), candidates.end(), [&](const auto& c) {
      return c.plant == id && c.kind == kind;
    });
    if (it == candidates.end()) return false;
    if (std::find(seen.begin(), seen.end(), std::make_pair(id, kind)) != seen.end()) return false;
    seen.emplace_back(id, kind);
    achieved += it->w_gvas;
    cost += it->cost;
  }
  if (std::abs(achieved - plan.achieved_gvas) > 1e-9) return false;
  if (std::abs(cost - plan.total_cost) > 1e-9) return false;
  if (plan.feasible != (achieved >= trigger_gvas)) return false;
  return true;
}

std::string plan_to_json(const ActionPlan& plan) {
  nlohmann::json selected = nlohmann::json::array();
  for (const auto& [id, kind] : plan.selected) {
    selected.push_back({{"plant_id", id}, {"kind", std::string(to_string(kind))}});
  }
  nlohmann::json doc;
  doc["baseline_gvas"] = plan.baseline_gvas;
  doc["trigger_gvas"] = plan.trigger_gvas;
  doc["selected"] = std::move(selected);
  doc["achieved_gvas"] = plan.achieved_gvas;
  doc["total_cost"] = plan.total_cost;
  doc["feasible"] = plan.feasible;
  return doc.dump(2);
}

}  // namespace inertia::anticipate
