#pragma once

#include "isac/types.hpp"

namespace isac {

/// Entry-wise convex combination (1-alpha) * base + alpha * target.
PowerAllocation blend(const PowerAllocation& base, const PowerAllocation& target,
                      double alpha);

struct BlendSearch {
  double alpha_sol = 0.0;
  bool found = false;
};

/// Smallest blend weight alpha on the epsilon grid, blending p_wf toward
/// p_edges, at which the accuracy, side-lobe and capacity-loss constraints
/// all hold. With improve_accuracy_when_satisfied set, returns the largest
/// feasible alpha instead (accuracy bought with allowed capacity loss).
BlendSearch binary_search_crb(const PowerAllocation& p_wf, const PowerAllocation& p_edges,
                              const ChannelRealization& chan, const OfdmConfig& cfg,
                              const Thresholds& th);

/// Smallest feasible alpha blending p_wf toward p_psl_opt. The side-lobe
/// level is not provably monotone along the blend, so monotonicity is probed
/// on a coarse grid first; a full grid scan is the fallback.
BlendSearch binary_search_psl(const PowerAllocation& p_wf, const PowerAllocation& p_psl_opt,
                              const ChannelRealization& chan, const OfdmConfig& cfg,
                              const Thresholds& th);

/// Precomputed blend endpoints, for callers that evaluate many threshold
/// combinations against one channel.
struct DynamicEndpoints {
  PowerAllocation wf;
  PowerAllocation edges;
  PowerAllocation psl_opt;
};

/// The dynamic allocation decision: start from water filling, check the two
/// sensing constraints, blend toward the edge or minimum-side-lobe endpoint
/// when exactly one is violated, and fall back to communication-only when
/// both are violated or no feasible blend exists.
DecisionOutcome dynamic_allocate(const ChannelRealization& chan, const OfdmConfig& cfg,
                                 const Thresholds& th, const SolverSettings& solver = {});

DecisionOutcome dynamic_allocate(const ChannelRealization& chan, const OfdmConfig& cfg,
                                 const Thresholds& th, const DynamicEndpoints& endpoints);

}  // namespace isac
