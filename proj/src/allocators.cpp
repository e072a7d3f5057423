#include "isac/allocators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "isac/metrics.hpp"
#include "isac/model.hpp"

namespace isac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct LobeState {
  double ratio = 1.0;  // worst side-lobe amplitude / peak amplitude
  Index worst_bin = -1;
  std::complex<double> worst_value{0.0, 0.0};
  double peak = 0.0;
  LobeExtents ext;
  bool flat = false;  // no lobe structure at all (e.g. single-tone iterate)
};

LobeState evaluate_lobes(ProfileEngine& engine, const Vec& p, Index cap_per_side) {
  LobeState st;
  const CVec& r = engine.complex_bins(p);
  const Vec mag = r.cwiseAbs();
  try {
    st.ext = lobe_extents(mag, cap_per_side);
  } catch (const std::domain_error&) {
    st.flat = true;
    return st;
  }
  auto [bin, worst] = worst_sidelobe(mag, st.ext);
  st.worst_bin = bin;
  st.worst_value = r[bin];
  st.peak = mag[st.ext.peak];
  st.ratio = st.peak > 0 ? worst / st.peak : 1.0;
  return st;
}

// subgradient of |r_bin|^2 w.r.t. the carrier powers
Vec bin_power_gradient(const OfdmConfig& cfg, Index bin, std::complex<double> r_bin) {
  const Index n = cfg.n_bins();
  Vec g(cfg.k);
  const double w0 = kTwoPi * static_cast<double>(bin) / static_cast<double>(n);
  for (Index k = 0; k < cfg.k; ++k) {
    const double ph = w0 * static_cast<double>(k) - kTwoPi * k * cfg.delta_f * cfg.tau;
    const std::complex<double> c(std::cos(ph), std::sin(ph));
    g[k] = 2.0 * std::real(std::conj(c) * r_bin);
  }
  return g;
}

}  // namespace

PowerAllocation uniform_allocation(const OfdmConfig& cfg) {
  cfg.validate();
  return {Vec::Constant(cfg.k, cfg.p_total / cfg.k)};
}

PowerAllocation edges_allocation(const OfdmConfig& cfg) {
  cfg.validate();
  Vec p = Vec::Zero(cfg.k);
  p[0] = cfg.p_total / 2.0;
  p[cfg.k - 1] = cfg.p_total / 2.0;
  return {p};
}

PowerAllocation hann_allocation(const OfdmConfig& cfg) {
  cfg.validate();
  Vec w(cfg.k);
  for (Index k = 0; k < cfg.k; ++k)
    w[k] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) / (cfg.k - 1)));
  const double s = w.sum();
  if (!(s > 0))
    throw std::domain_error("hann_allocation: window vanishes identically for k = 2");
  return {w * (cfg.p_total / s)};
}

PowerAllocation water_filling(const ChannelRealization& chan, const OfdmConfig& cfg) {
  cfg.validate();
  if (chan.h.size() != cfg.k)
    throw std::invalid_argument("water_filling: channel length does not match config");
  const Vec g = chan.gain_over_noise(cfg);
  double min_inv = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < cfg.k; ++k)
    if (g[k] > 0) min_inv = std::min(min_inv, 1.0 / g[k]);
  if (!std::isfinite(min_inv))
    throw InfeasibleError("water_filling: every channel gain is zero");

  auto poured = [&](double mu) {
    double s = 0.0;
    for (Index k = 0; k < cfg.k; ++k)
      if (g[k] > 0) s += std::max(0.0, mu - 1.0 / g[k]);
    return s;
  };

  double lo = min_inv, hi = min_inv + cfg.p_total;
  for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
    const double mu = 0.5 * (lo + hi);
    (poured(mu) < cfg.p_total ? lo : hi) = mu;
  }
  const double mu = 0.5 * (lo + hi);

  Vec p = Vec::Zero(cfg.k);
  Index active = 0;
  for (Index k = 0; k < cfg.k; ++k) {
    if (g[k] > 0 && mu > 1.0 / g[k]) {
      p[k] = mu - 1.0 / g[k];
      ++active;
    }
  }
  // spread the bisection residual over the active set; keeps the implied
  // water level common across active carriers
  const double residual = cfg.p_total - p.sum();
  for (Index k = 0; k < cfg.k; ++k)
    if (p[k] > 0) p[k] = std::max(0.0, p[k] + residual / static_cast<double>(active));
  return {p};
}

Vec project_to_simplex(const Eigen::Ref<const Vec>& v, double total) {
  if (!(total > 0)) throw std::invalid_argument("project_to_simplex: total must be > 0");
  const Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (Index j = 0; j < n; ++j) {
    cum += u[j];
    const double t = (cum - total) / static_cast<double>(j + 1);
    if (u[j] - t > 0) theta = t;
  }
  Vec x(n);
  for (Index i = 0; i < n; ++i) x[i] = std::max(0.0, v[i] - theta);
  return x;
}

SolverResult psl_min_allocation(const OfdmConfig& cfg, const SolverSettings& settings) {
  cfg.validate();
  settings.validate();
  ProfileEngine engine(cfg);
  const Index cap = std::max<Index>(1, cfg.n_bins() / 4);
  const double step0 = settings.step_init > 0 ? settings.step_init : cfg.p_total / cfg.k;

  Vec cur = Vec::Constant(cfg.k, cfg.p_total / cfg.k);
  Vec best = cur;
  double best_ratio = evaluate_lobes(engine, cur, cap).ratio;

  const int round_len = 1000;
  double round_step = step0;
  double last_improvement = std::numeric_limits<double>::infinity();
  int it = 0;
  while (it < settings.max_iters) {
    const double round_start = best_ratio;
    for (int t = 0; t < round_len && it < settings.max_iters; ++t, ++it) {
      const LobeState st = evaluate_lobes(engine, cur, cap);
      if (!st.flat && st.ratio < best_ratio) {
        best_ratio = st.ratio;
        best = cur;
      }
      if (st.flat) break;  // no lobe structure to descend on
      Vec grad = bin_power_gradient(cfg, st.worst_bin, st.worst_value);
      const double norm = grad.norm();
      if (norm < 1e-300) break;
      const double step = round_step * std::pow(0.99, t);
      cur = project_to_simplex(cur - (step / norm) * grad, cfg.p_total);
    }
    last_improvement = round_start - best_ratio;
    round_step *= 0.5;
    cur = best;
    if (last_improvement < settings.tol && round_step < 1e-6 * step0) break;
  }

  SolverResult result;
  result.allocation = {best};
  result.iterations = it;
  result.converged = last_improvement < settings.tol;
  return result;
}

SolverResult psl_constrained_capacity(const ChannelRealization& chan, const OfdmConfig& cfg,
                                      double gamma_psl_db, const SolverSettings& settings,
                                      const PowerAllocation* psl_opt_hint) {
  cfg.validate();
  settings.validate();
  if (!(gamma_psl_db <= 0))
    throw std::invalid_argument("psl_constrained_capacity: gamma_psl_db must be <= 0");

  const Vec gains = chan.gain_over_noise(cfg);
  ProfileEngine engine(cfg);
  const double gamma_lin = std::pow(10.0, gamma_psl_db / 20.0);

  auto lobe_ratio = [&](const Vec& p) { return evaluate_lobes(engine, p, -1).ratio; };

  const PowerAllocation wf = water_filling(chan, cfg);
  SolverResult result;
  result.converged = true;
  if (lobe_ratio(wf.p) <= gamma_lin) {
    result.allocation = wf;  // bound is inactive
    return result;
  }

  PowerAllocation psl_opt;
  if (psl_opt_hint) {
    psl_opt = *psl_opt_hint;
  } else {
    psl_opt = psl_min_allocation(cfg, settings).allocation;
  }
  if (lobe_ratio(psl_opt.p) > gamma_lin)
    throw InfeasibleError("psl_constrained_capacity: bound tighter than the achievable minimum");

  auto cap_of = [&](const Vec& p) {
    double c = 0.0;
    for (Index k = 0; k < cfg.k; ++k) c += std::log2(1.0 + p[k] * gains[k]);
    return c;
  };
  const double c_wf = cap_of(wf.p);

  // feasible start: smallest blend of the water-filling point toward the
  // minimum-side-lobe point that meets the bound
  const int kThetaGrid = 1024;
  Vec cur = psl_opt.p;
  for (int i = 0; i <= kThetaGrid; ++i) {
    const double th = static_cast<double>(i) / kThetaGrid;
    Vec p = (1.0 - th) * wf.p + th * psl_opt.p;
    if (lobe_ratio(p) <= gamma_lin) {
      cur = p;
      break;
    }
  }
  Vec best = cur;
  double best_cap = cap_of(cur);

  const Index n = cfg.n_bins();
  const double p2 = cfg.p_total * cfg.p_total;
  const double step0 = settings.step_init > 0 ? settings.step_init : cfg.p_total / cfg.k;
  const int round_len = 2000;
  double beta = std::max(1.0, c_wf);
  int iters_total = 0;

  CVec mask(n);
  for (int round = 0; round < 20; ++round) {
    for (int t = 0; t < round_len && iters_total < settings.max_iters; ++t, ++iters_total) {
      Vec grad(cfg.k);
      for (Index k = 0; k < cfg.k; ++k)
        grad[k] = gains[k] / ((1.0 + cur[k] * gains[k]) * std::numbers::ln2);

      const CVec& r = engine.complex_bins(cur);
      const Vec mag = r.cwiseAbs();
      LobeExtents ext;
      bool flat = false;
      try {
        ext = lobe_extents(mag);
      } catch (const std::domain_error&) {
        flat = true;  // no lobe structure; let the capacity term move the iterate
      }
      if (!flat) {
        const double peak = mag[ext.peak];
        const double worst = worst_sidelobe(mag, ext).second;
        if (worst <= gamma_lin * peak) {
          const double c = cap_of(cur);
          if (c > best_cap) {
            best_cap = c;
            best = cur;
          }
        } else {
          // exterior penalty on every violating side-lobe bin
          mask.setZero();
          const double amp_bound = gamma_lin * peak;
          for (Index i = ext.peak + ext.right; i <= ext.peak - ext.left + n; ++i) {
            const Index bin = ((i % n) + n) % n;
            if (mag[bin] > amp_bound) mask[bin] = r[bin];
          }
          grad -= (beta / p2) * engine.masked_energy_gradient(mask);
        }
      }
      const double norm = grad.norm();
      if (norm < 1e-300) break;
      const double step = step0 * std::pow(0.99, t);
      cur = project_to_simplex(cur + (step / norm) * grad, cfg.p_total);
    }
    if (lobe_ratio(cur) <= gamma_lin) break;
    // iterate still violates the bound at convergence
    if (round == 19 || iters_total >= settings.max_iters) {
      result.converged = false;
      break;
    }
    beta *= 2.0;
    cur = best;
  }

  // polish: slide the best point back toward water filling as far as the
  // bound allows; capacity is concave along the segment, so any feasible
  // step toward the water-filling end cannot hurt
  const int kPolishGrid = 2048;
  for (int i = kPolishGrid; i >= 1; --i) {
    const double th = static_cast<double>(i) / kPolishGrid;  // th = 1 is water filling
    Vec p = (1.0 - th) * best + th * wf.p;
    if (lobe_ratio(p) <= gamma_lin) {
      if (cap_of(p) > best_cap) {
        best_cap = cap_of(p);
        best = p;
      }
      break;
    }
  }

  result.allocation = {best};
  result.iterations = iters_total;
  return result;
}

}  // namespace isac
