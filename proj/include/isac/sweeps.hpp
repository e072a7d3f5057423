#pragma once

#include <vector>

#include "isac/scenario.hpp"

namespace isac {

enum class SweepDirection { TowardEdges, TowardPslOpt };

const char* to_string(SweepDirection d);

struct PslSweepRow {
  double gamma_psl_db = 0.0;
  bool feasible = true;
  double capacity_bits = 0.0;
  double capacity_loss = 0.0;
  double psl_db = 0.0;
  double mlw_bins = 0.0;
  double accuracy_loss_pct = 0.0;
  PowerAllocation allocation;  // empty when infeasible
  Vec profile_magnitude;       // oversampled dump for the range-profile plot
};

struct AlphaSweepRow {
  SweepDirection direction = SweepDirection::TowardEdges;
  double alpha = 0.0;
  double capacity_ratio = 1.0;
  double suppression_db = 0.0;
  double mlw_ratio = 1.0;
};

struct SurfaceRow {
  double gamma_psl_db = 0.0;
  double mlw_bound_bins = 0.0;
  Mode mode = Mode::CommOnly;
  double capacity_bits = 0.0;
  double alpha = 0.0;
};

/// Capacity-vs-side-lobe trade-off rows, one per gamma in
/// sweep.gamma_psl_list (which must be ordered loose -> tight). Infeasible
/// bounds yield flagged rows rather than dropping them.
std::vector<PslSweepRow> run_psl_sweep(const ScenarioConfig& config);

/// Metric ratios along the blend from water filling toward one endpoint.
std::vector<AlphaSweepRow> run_alpha_sweep(const ScenarioConfig& config, SweepDirection direction);

/// Dynamic-decision capacity over the (gamma_psl x mlw-bound) grid. Cells
/// where no feasible blend exists record the water-filling capacity with
/// mode CommOnly. Row order: mlw bounds tight -> loose, then gamma tight -> loose.
std::vector<SurfaceRow> run_capacity_surface(const ScenarioConfig& config);

/// Index-ordered parallel map: deterministic regardless of thread count.
void parallel_for_index(int count, int threads, const std::function<void(int)>& fn);

}  // namespace isac
