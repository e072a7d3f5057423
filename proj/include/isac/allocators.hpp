#pragma once

#include "isac/types.hpp"

namespace isac {

/// p_total spread evenly over all carriers.
PowerAllocation uniform_allocation(const OfdmConfig& cfg);

/// p_total/2 on the first and last carrier — the accuracy-proxy maximizer
/// among symmetric allocations.
PowerAllocation edges_allocation(const OfdmConfig& cfg);

/// Powers proportional to a Hann window, normalized to p_total. Throws for
/// K = 2, where the window vanishes identically.
PowerAllocation hann_allocation(const OfdmConfig& cfg);

/// Capacity-optimal allocation P_k = max(0, mu - 1/g_k); the water level mu
/// is found by bisection so the budget holds to 1e-10 relative. Throws
/// InfeasibleError when every channel gain is zero.
PowerAllocation water_filling(const ChannelRealization& chan, const OfdmConfig& cfg);

/// Approximately minimizes the worst side-lobe magnitude over the budget
/// simplex by projected subgradient descent with restarts. The side-lobe
/// region is recomputed from each iterate's profile; the lobe walk is capped
/// at a quarter circle per side, which keeps near-single-tone iterates (whose
/// nominal lobe swallows the circle) scored on their shoulder bins.
SolverResult psl_min_allocation(const OfdmConfig& cfg, const SolverSettings& settings = {});

/// Maximizes capacity subject to every side-lobe magnitude staying below
/// gamma_psl_db (relative to the peak), via projected gradient ascent with an
/// exterior penalty whose weight doubles whenever the converged iterate still
/// violates the bound (at most 20 rounds). Throws InfeasibleError when the
/// bound is tighter than the unconstrained minimum PSL.
///
/// `psl_opt_hint`, when given, must be a feasible-for-the-frontier allocation
/// (typically a cached psl_min_allocation result); it skips the internal
/// frontier solve, which sweeps use to avoid recomputing it per row.
SolverResult psl_constrained_capacity(const ChannelRealization& chan, const OfdmConfig& cfg,
                                      double gamma_psl_db, const SolverSettings& settings = {},
                                      const PowerAllocation* psl_opt_hint = nullptr);

/// Euclidean projection onto {x >= 0, sum x = total} (sort-based).
Vec project_to_simplex(const Eigen::Ref<const Vec>& v, double total);

}  // namespace isac
