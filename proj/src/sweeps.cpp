#include "isac/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>

#include "isac/allocators.hpp"
#include "isac/dynamic.hpp"
#include "isac/metrics.hpp"
#include "isac/model.hpp"

namespace isac {

const char* to_string(SweepDirection d) {
  return d == SweepDirection::TowardEdges ? "toward_edges" : "toward_psl_opt";
}

void parallel_for_index(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(threads, count);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<PslSweepRow> run_psl_sweep(const ScenarioConfig& config) {
  const auto& gammas = config.sweep.gamma_psl_list;
  for (size_t i = 1; i < gammas.size(); ++i)
    if (gammas[i] > gammas[i - 1])
      throw ConfigError("sweep.gamma_psl_list must be ordered loose -> tight");

  const OfdmConfig& cfg = config.ofdm;
  const ChannelRealization chan = generate_channel(config.channel, cfg);
  const PowerAllocation wf = water_filling(chan, cfg);
  const RangeProfile wf_profile = expected_range_profile(cfg, wf);
  const double c_wf = capacity(wf, chan, cfg);
  const double mlw_wf = mlw_3db(wf_profile);
  const PowerAllocation psl_opt = psl_min_allocation(cfg, config.solver).allocation;

  std::vector<PslSweepRow> rows(gammas.size());
  parallel_for_index(static_cast<int>(gammas.size()), config.sweep.threads, [&](int i) {
    PslSweepRow& row = rows[i];
    row.gamma_psl_db = gammas[i];
    try {
      const SolverResult res =
          psl_constrained_capacity(chan, cfg, gammas[i], config.solver, &psl_opt);
      ProfileEngine engine(cfg);
      const RangeProfile profile = engine.profile(res.allocation);
      row.capacity_bits = capacity(res.allocation, chan, cfg);
      row.capacity_loss = capacity_loss(row.capacity_bits, c_wf);
      row.psl_db = psl_db(profile);
      row.mlw_bins = mlw_3db(profile);
      row.accuracy_loss_pct = accuracy_loss_pct(row.mlw_bins, mlw_wf);
      row.allocation = res.allocation;
      row.profile_magnitude = profile.magnitude;
    } catch (const InfeasibleError&) {
      row.feasible = false;
    }
  });
  return rows;
}

std::vector<AlphaSweepRow> run_alpha_sweep(const ScenarioConfig& config,
                                           SweepDirection direction) {
  const OfdmConfig& cfg = config.ofdm;
  const ChannelRealization chan = generate_channel(config.channel, cfg);
  const PowerAllocation wf = water_filling(chan, cfg);
  const PowerAllocation endpoint = direction == SweepDirection::TowardEdges
                                       ? edges_allocation(cfg)
                                       : psl_min_allocation(cfg, config.solver).allocation;
  const double c_wf = capacity(wf, chan, cfg);
  const double mlw_wf = mlw_3db(expected_range_profile(cfg, wf));

  const auto& grid = config.sweep.alpha_grid;
  std::vector<AlphaSweepRow> rows(grid.size());
  parallel_for_index(static_cast<int>(grid.size()), config.sweep.threads, [&](int i) {
    const PowerAllocation p = blend(wf, endpoint, grid[i]);
    ProfileEngine engine(cfg);
    const RangeProfile profile = engine.profile(p);
    AlphaSweepRow& row = rows[i];
    row.direction = direction;
    row.alpha = grid[i];
    row.capacity_ratio = capacity(p, chan, cfg) / c_wf;
    row.suppression_db = -psl_db(profile);
    row.mlw_ratio = mlw_3db(profile) / mlw_wf;
  });
  return rows;
}

std::vector<SurfaceRow> run_capacity_surface(const ScenarioConfig& config) {
  const OfdmConfig& cfg = config.ofdm;
  const ChannelRealization chan = generate_channel(config.channel, cfg);

  DynamicEndpoints endpoints;
  endpoints.wf = water_filling(chan, cfg);
  endpoints.edges = edges_allocation(cfg);
  endpoints.psl_opt = psl_min_allocation(cfg, config.solver).allocation;
  const double mlw_wf = mlw_3db(expected_range_profile(cfg, endpoints.wf));

  // gamma tight -> loose along each row, mlw-bound tight -> loose across rows
  std::vector<double> gammas = config.sweep.surface_gamma_psl;
  std::sort(gammas.begin(), gammas.end());
  std::vector<double> bounds;
  bounds.reserve(config.sweep.surface_mlw_scales.size());
  for (double s : config.sweep.surface_mlw_scales) bounds.push_back(s * mlw_wf);
  std::sort(bounds.begin(), bounds.end());

  const int cols = static_cast<int>(gammas.size());
  const int cells = cols * static_cast<int>(bounds.size());
  std::vector<SurfaceRow> rows(cells);
  parallel_for_index(cells, config.sweep.threads, [&](int idx) {
    const int bi = idx / cols;
    const int gi = idx % cols;
    Thresholds th = config.thresholds;
    th.gamma_psl_db = gammas[gi];
    th.mlw_bound_bins = bounds[bi];
    const DecisionOutcome outcome = dynamic_allocate(chan, cfg, th, endpoints);
    SurfaceRow& row = rows[idx];
    row.gamma_psl_db = gammas[gi];
    row.mlw_bound_bins = bounds[bi];
    row.mode = outcome.mode;
    row.capacity_bits = outcome.report.capacity_bits;
    row.alpha = outcome.alpha;
  });
  return rows;
}

}  // namespace isac
