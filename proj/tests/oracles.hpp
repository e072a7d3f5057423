// Test-only reference implementations, kept independent of the library's
// FFT/solver paths so they can vouch for them.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "isac/dynamic.hpp"
#include "isac/metrics.hpp"
#include "isac/model.hpp"
#include "isac/types.hpp"

namespace oracle {

// O(K*N) double-loop evaluation of the expected pulse-compression output
inline isac::CVec direct_profile(const isac::OfdmConfig& cfg, const isac::Vec& p) {
  const isac::Index n_bins = cfg.n_bins();
  isac::CVec r(n_bins);
  for (isac::Index n = 0; n < n_bins; ++n) {
    std::complex<double> acc(0.0, 0.0);
    for (isac::Index k = 0; k < cfg.k; ++k) {
      const double phase = -2.0 * std::numbers::pi * k * cfg.delta_f * cfg.tau +
                           2.0 * std::numbers::pi * static_cast<double>(n) * k / n_bins;
      acc += p[k] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    r[n] = acc;
  }
  return r;
}

// |sin(pi K x) / sin(pi x)| / K, the magnitude of the uniform-allocation
// profile at continuous fraction x
inline double dirichlet(double x, int k) {
  const double num = std::sin(std::numbers::pi * k * x);
  const double den = std::sin(std::numbers::pi * x);
  if (std::abs(den) < 1e-14) return 1.0;
  return std::abs(num / den) / k;
}

// first side-lobe peak of the Dirichlet kernel in dB, located by fine scan
// between the first two nulls
inline double dirichlet_first_sidelobe_db(int k) {
  const double lo = 1.0 / k, hi = 2.0 / k;
  double best = 0.0;
  const int steps = 200000;
  for (int i = 1; i < steps; ++i) {
    const double x = lo + (hi - lo) * i / steps;
    best = std::max(best, dirichlet(x, k));
  }
  return 20.0 * std::log10(best);
}

// enumerates symmetric allocations p_i = p_{K-1-i} on a grid of `units`
// steps of size p_total/units distributed over the K/2 mirror pairs
inline void for_each_symmetric_grid_point(int k, double p_total, int units,
                                          const std::function<void(const isac::Vec&)>& fn) {
  const int pairs = k / 2;
  std::vector<int> counts(pairs, 0);
  isac::Vec p(k);
  const double step = p_total / (2.0 * units);  // per mirror half
  std::function<void(int, int)> rec = [&](int idx, int remaining) {
    if (idx == pairs - 1) {
      counts[idx] = remaining;
      for (int i = 0; i < pairs; ++i) {
        p[i] = counts[i] * step;
        p[k - 1 - i] = p[i];
      }
      fn(p);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[idx] = c;
      rec(idx + 1, remaining - c);
    }
  };
  rec(0, units);
}

// ---- exhaustive epsilon-grid re-implementation of the dynamic decision ----

struct Decision {
  isac::Mode mode = isac::Mode::CommOnly;
  double alpha = 0.0;
};

inline bool feasible_point(const isac::OfdmConfig& cfg, const isac::ChannelRealization& chan,
                           const isac::Thresholds& th, const isac::PowerAllocation& p,
                           double c_wf) {
  if (isac::capacity_loss(isac::capacity(p, chan, cfg), c_wf) > th.gamma_c) return false;
  isac::RangeProfile profile;
  try {
    profile = isac::expected_range_profile(cfg, p);
  } catch (const std::domain_error&) {
    return false;
  }
  if (isac::psl_db(profile) > th.gamma_psl_db) return false;
  if (th.mlw_bound_bins) return isac::mlw_3db(profile) <= *th.mlw_bound_bins;
  return isac::accuracy_proxy(p) >= th.gamma_acc;
}

inline Decision grid_decision(const isac::OfdmConfig& cfg, const isac::ChannelRealization& chan,
                              const isac::Thresholds& th, const isac::DynamicEndpoints& ep) {
  using isac::Mode;
  const double c_wf = isac::capacity(ep.wf, chan, cfg);
  const isac::RangeProfile wf_profile = isac::expected_range_profile(cfg, ep.wf);
  const bool psl_ok = isac::psl_db(wf_profile) <= th.gamma_psl_db;
  const bool acc_ok = th.mlw_bound_bins
                          ? isac::mlw_3db(wf_profile) <= *th.mlw_bound_bins
                          : isac::accuracy_proxy(ep.wf) >= th.gamma_acc;
  if (!psl_ok && !acc_ok) return {Mode::CommOnly, 0.0};

  const int last = static_cast<int>(std::ceil(1.0 / th.epsilon - 1e-12));
  auto alpha_at = [&](int i) { return i >= last ? 1.0 : i * th.epsilon; };

  if (psl_ok && (!acc_ok || th.improve_accuracy_when_satisfied)) {
    if (th.improve_accuracy_when_satisfied) {
      for (int i = last; i >= 0; --i)
        if (feasible_point(cfg, chan, th, isac::blend(ep.wf, ep.edges, alpha_at(i)), c_wf))
          return {Mode::Isac, alpha_at(i)};
    } else {
      for (int i = 0; i <= last; ++i)
        if (feasible_point(cfg, chan, th, isac::blend(ep.wf, ep.edges, alpha_at(i)), c_wf))
          return {Mode::Isac, alpha_at(i)};
    }
    return {Mode::CommOnly, 0.0};
  }
  if (!psl_ok) {
    for (int i = 0; i <= last; ++i)
      if (feasible_point(cfg, chan, th, isac::blend(ep.wf, ep.psl_opt, alpha_at(i)), c_wf))
        return {Mode::Isac, alpha_at(i)};
    return {Mode::CommOnly, 0.0};
  }
  return {Mode::Isac, 0.0};
}

}  // namespace oracle
