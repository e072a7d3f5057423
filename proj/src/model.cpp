#include "isac/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace isac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Index wrap(Index i, Index n) { return ((i % n) + n) % n; }

}  // namespace

void OfdmConfig::validate() const {
  if (k < 2) throw std::invalid_argument("OfdmConfig: k must be >= 2");
  if (!(delta_f > 0)) throw std::invalid_argument("OfdmConfig: delta_f must be > 0");
  if (!(n0 > 0)) throw std::invalid_argument("OfdmConfig: n0 must be > 0");
  if (!(p_total > 0)) throw std::invalid_argument("OfdmConfig: p_total must be > 0");
  if (oversample < 1) throw std::invalid_argument("OfdmConfig: oversample must be >= 1");
  if (!(tau >= 0) || !(tau < 1.0 / delta_f))
    throw std::invalid_argument("OfdmConfig: tau must lie in [0, 1/delta_f)");
}

void PowerAllocation::validate(const OfdmConfig& cfg, double rel_tol) const {
  if (p.size() != cfg.k)
    throw std::invalid_argument("PowerAllocation: length does not match config");
  if ((p.array() < 0).any())
    throw std::invalid_argument("PowerAllocation: negative entry");
  if (std::abs(p.sum() - cfg.p_total) > rel_tol * cfg.p_total)
    throw std::invalid_argument("PowerAllocation: budget mismatch");
}

Vec ChannelRealization::gain_over_noise(const OfdmConfig& cfg) const {
  return h.cwiseAbs2() / (cfg.n0 * cfg.delta_f);
}

LobeExtents lobe_extents(const Vec& magnitude, Index cap_per_side) {
  const Index n = magnitude.size();
  if (n < 3) throw std::invalid_argument("lobe_extents: need at least 3 bins");

  Index peak = 0;
  double peak_mag = magnitude[0];
  for (Index i = 1; i < n; ++i) {
    if (magnitude[i] > peak_mag) {
      peak_mag = magnitude[i];
      peak = i;
    }
  }
  if (peak_mag <= magnitude.minCoeff())
    throw std::domain_error("lobe_extents: flat profile has no main lobe");

  auto mag = [&](Index i) { return magnitude[wrap(i, n)]; };
  auto is_min = [&](Index i) { return mag(i) <= mag(i - 1) && mag(i) <= mag(i + 1); };

  Index left = 1;
  while (left < n && !is_min(peak - left)) ++left;
  Index right = 1;
  while (right < n && !is_min(peak + right)) ++right;

  if (cap_per_side > 0) {
    left = std::min(left, cap_per_side);
    right = std::min(right, cap_per_side);
  }
  // left+right == n leaves exactly one side-lobe bin (coinciding boundaries)
  if (left + right > n)
    throw std::domain_error("lobe_extents: main lobe covers every bin");
  return {peak, left, right};
}

std::pair<Index, double> worst_sidelobe(const Vec& magnitude, const LobeExtents& ext) {
  const Index n = magnitude.size();
  Index best = -1;
  double best_mag = -1.0;
  // side lobes run from peak+right around the circle to peak-left
  for (Index i = ext.peak + ext.right; i <= ext.peak - ext.left + n; ++i) {
    const Index bin = wrap(i, n);
    if (magnitude[bin] > best_mag) {
      best_mag = magnitude[bin];
      best = bin;
    }
  }
  return {best, best_mag};
}

ProfileEngine::ProfileEngine(const OfdmConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const Index n = cfg_.n_bins();
  carrier_phase_ = CVec::Ones(cfg_.k);
  if (cfg_.tau != 0.0) {
    for (Index k = 0; k < cfg_.k; ++k) {
      const double ph = -kTwoPi * static_cast<double>(k) * cfg_.delta_f * cfg_.tau;
      carrier_phase_[k] = std::complex<double>(std::cos(ph), std::sin(ph));
    }
  }
  in_.assign(n, {0.0, 0.0});
  out_.assign(n, {0.0, 0.0});
  bins_.resize(n);
}

const CVec& ProfileEngine::complex_bins(const Vec& p) {
  if (p.size() != cfg_.k)
    throw std::invalid_argument("ProfileEngine: allocation length does not match config");
  const Index n = cfg_.n_bins();
  std::fill(in_.begin(), in_.end(), std::complex<double>(0.0, 0.0));
  for (Index k = 0; k < cfg_.k; ++k) in_[k] = p[k] * carrier_phase_[k];
  // unnormalized inverse DFT: r_n = sum_k q_k e^{+j2pi nk/N}
  fft_.inv(out_, in_);
  for (Index i = 0; i < n; ++i) bins_[i] = out_[i] * static_cast<double>(n);
  return bins_;
}

RangeProfile ProfileEngine::profile(const Vec& p) {
  const CVec& r = complex_bins(p);
  return make_range_profile(r.cwiseAbs());
}

Vec ProfileEngine::masked_energy_gradient(const CVec& mask) {
  const Index n = cfg_.n_bins();
  if (mask.size() != n)
    throw std::invalid_argument("ProfileEngine: mask length does not match bin count");
  // d/dP_k sum_n |r_n|^2 over masked bins = 2 Re(conj(phase_k) * DFT(mask)[k])
  for (Index i = 0; i < n; ++i) in_[i] = mask[i];
  fft_.fwd(out_, in_);
  Vec grad(cfg_.k);
  for (Index k = 0; k < cfg_.k; ++k)
    grad[k] = 2.0 * std::real(std::conj(carrier_phase_[k]) * out_[k]);
  return grad;
}

RangeProfile expected_range_profile(const OfdmConfig& cfg, const PowerAllocation& alloc) {
  ProfileEngine engine(cfg);
  return engine.profile(alloc);
}

CVec expected_range_profile_complex(const OfdmConfig& cfg, const PowerAllocation& alloc) {
  ProfileEngine engine(cfg);
  return engine.complex_bins(alloc);
}

std::pair<std::vector<Index>, std::vector<Index>> mainlobe_partition(const Vec& magnitude) {
  RangeProfile p = make_range_profile(magnitude);
  return {std::move(p.mainlobe_bins), std::move(p.sidelobe_bins)};
}

RangeProfile make_range_profile(Vec magnitude) {
  const LobeExtents ext = lobe_extents(magnitude);
  const Index n = magnitude.size();

  RangeProfile profile;
  profile.magnitude = std::move(magnitude);
  profile.peak_index = ext.peak;
  profile.left_extent = ext.left;
  profile.right_extent = ext.right;

  std::vector<char> in_lobe(static_cast<size_t>(n), 0);
  for (Index i = ext.peak - ext.left + 1; i <= ext.peak + ext.right - 1; ++i)
    in_lobe[static_cast<size_t>(wrap(i, n))] = 1;
  for (Index i = 0; i < n; ++i) {
    if (in_lobe[static_cast<size_t>(i)])
      profile.mainlobe_bins.push_back(i);
    else
      profile.sidelobe_bins.push_back(i);
  }
  return profile;
}

void SolverSettings::validate() const {
  if (max_iters < 1) throw std::invalid_argument("SolverSettings: max_iters must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("SolverSettings: tol must be > 0");
  if (step_init < 0) throw std::invalid_argument("SolverSettings: step_init must be >= 0");
}

void Thresholds::validate() const {
  if (!(gamma_psl_db <= 0)) throw std::invalid_argument("Thresholds: gamma_psl_db must be <= 0");
  if (!(gamma_acc > 0)) throw std::invalid_argument("Thresholds: gamma_acc must be > 0");
  if (!(gamma_c > 0) || !(gamma_c < 1))
    throw std::invalid_argument("Thresholds: gamma_c must lie in (0, 1)");
  if (!(epsilon > 0)) throw std::invalid_argument("Thresholds: epsilon must be > 0");
  if (mlw_bound_bins && !(*mlw_bound_bins > 0))
    throw std::invalid_argument("Thresholds: mlw_bound_bins must be > 0");
}

const char* to_string(Mode m) { return m == Mode::Isac ? "ISAC" : "CommOnly"; }

const char* to_string(Branch b) {
  switch (b) {
    case Branch::BothViolated: return "BothViolated";
    case Branch::BlendTowardEdges: return "BlendTowardEdges";
    case Branch::BlendTowardPslOpt: return "BlendTowardPslOpt";
    case Branch::WfAlreadyFeasible: return "WfAlreadyFeasible";
  }
  return "?";
}

}  // namespace isac
