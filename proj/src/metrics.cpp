#include "isac/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "isac/model.hpp"

namespace isac {

double capacity(const PowerAllocation& alloc, const ChannelRealization& chan,
                const OfdmConfig& cfg) {
  if (alloc.p.size() != cfg.k || chan.h.size() != cfg.k)
    throw std::invalid_argument("capacity: dimension mismatch");
  const Vec g = chan.gain_over_noise(cfg);
  double c = 0.0;
  for (Index k = 0; k < cfg.k; ++k) c += std::log2(1.0 + alloc.p[k] * g[k]);
  return c;
}

double psl_db(const RangeProfile& profile) {
  if (profile.sidelobe_bins.empty())
    throw std::invalid_argument("psl_db: empty side-lobe region");
  const double peak = profile.magnitude[profile.peak_index];
  double worst = 0.0;
  for (Index bin : profile.sidelobe_bins) worst = std::max(worst, profile.magnitude[bin]);
  if (worst == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(worst / peak);
}

double accuracy_proxy(const PowerAllocation& alloc) {
  const Index k_count = alloc.p.size();
  const double center = static_cast<double>(k_count) / 2.0;
  double acc = 0.0;
  for (Index k = 0; k < k_count; ++k) {
    const double d = static_cast<double>(k) - center;
    acc += d * d * alloc.p[k];
  }
  return acc;
}

namespace {

// interpolated distance from the peak to the first crossing below `level`,
// walking in direction `dir`; the walk may use the boundary minimum itself
double crossing_distance(const RangeProfile& profile, double level, int dir) {
  const Index n = profile.magnitude.size();
  const Index extent = dir > 0 ? profile.right_extent : profile.left_extent;
  auto mag = [&](Index step) {
    return profile.magnitude[((profile.peak_index + dir * step) % n + n) % n];
  };
  for (Index s = 1; s <= extent; ++s) {
    if (mag(s) < level) {
      const double prev = mag(s - 1);
      const double frac = (prev - level) / (prev - mag(s));
      return static_cast<double>(s - 1) + frac;
    }
  }
  throw std::domain_error("mlw_3db: main lobe never crosses the 3-dB level");
}

}  // namespace

double mlw_3db(const RangeProfile& profile) {
  const double peak = profile.magnitude[profile.peak_index];
  if (!(peak > 0)) throw std::domain_error("mlw_3db: non-positive peak");
  const double level = peak / std::sqrt(2.0);
  return crossing_distance(profile, level, +1) + crossing_distance(profile, level, -1);
}

double capacity_loss(double c, double c_ref) {
  if (!(c_ref > 0)) throw std::invalid_argument("capacity_loss: reference must be > 0");
  double loss = (c_ref - c) / c_ref;
  if (std::abs(loss) < 1e-12) loss = 0.0;
  return loss;
}

double accuracy_loss_pct(double mlw, double mlw_ref) {
  if (!(mlw_ref > 0)) throw std::invalid_argument("accuracy_loss_pct: reference must be > 0");
  return (mlw - mlw_ref) / mlw_ref * 100.0;
}

SensingReport sensing_report(const OfdmConfig& cfg, const PowerAllocation& alloc,
                             const ChannelRealization& chan) {
  const RangeProfile profile = expected_range_profile(cfg, alloc);
  SensingReport r;
  r.capacity_bits = capacity(alloc, chan, cfg);
  r.psl_db = psl_db(profile);
  r.accuracy_proxy = accuracy_proxy(alloc);
  r.mlw_bins = mlw_3db(profile);
  r.suppression_db = -r.psl_db;
  return r;
}

SensingReport sensing_report(const OfdmConfig& cfg, const PowerAllocation& alloc,
                             const ChannelRealization& chan, double c_ref, double mlw_ref) {
  SensingReport r = sensing_report(cfg, alloc, chan);
  r.capacity_loss = capacity_loss(r.capacity_bits, c_ref);
  r.accuracy_loss_pct = accuracy_loss_pct(r.mlw_bins, mlw_ref);
  return r;
}

}  // namespace isac
