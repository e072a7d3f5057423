#pragma once

#include <unsupported/Eigen/FFT>

#include <complex>
#include <utility>
#include <vector>

#include "isac/types.hpp"

namespace isac {

/// Boundaries of the main lobe around the global peak of a magnitude profile.
struct LobeExtents {
  Index peak = 0;
  Index left = 1;   ///< distance from peak to the boundary minimum on the left
  Index right = 1;  ///< distance from peak to the boundary minimum on the right
};

/// Locates the global peak (ties broken by lowest index) and walks circularly
/// to the first local minimum on each side. Throws std::domain_error on a
/// flat profile. `cap_per_side`, when positive, clips each walk — solvers use
/// it to reject allocations whose lobe swallows most of the delay circle.
LobeExtents lobe_extents(const Vec& magnitude, Index cap_per_side = -1);

/// Largest side-lobe bin and its magnitude (side lobes = everything at or
/// beyond the boundary minima).
std::pair<Index, double> worst_sidelobe(const Vec& magnitude, const LobeExtents& ext);

/// Reusable evaluator for the oversampled delay-domain response of a power
/// allocation: r_n = sum_k P_k e^{-j2pi k df tau} e^{j2pi n k / N}.
///
/// Holds FFT plans and scratch buffers; create one instance per thread.
class ProfileEngine {
 public:
  explicit ProfileEngine(const OfdmConfig& cfg);

  /// Complex profile bins; the returned reference is invalidated by the next call.
  const CVec& complex_bins(const Vec& p);
  const CVec& complex_bins(const PowerAllocation& alloc) { return complex_bins(alloc.p); }

  RangeProfile profile(const Vec& p);
  RangeProfile profile(const PowerAllocation& alloc) { return profile(alloc.p); }

  /// Gradient w.r.t. the carrier powers of sum_n |r_n|^2 restricted to the
  /// bins where `mask` is nonzero (pass mask_n = r_n on selected bins).
  Vec masked_energy_gradient(const CVec& mask);

  const OfdmConfig& config() const { return cfg_; }

 private:
  OfdmConfig cfg_;
  CVec carrier_phase_;  // e^{-j2pi k df tau}
  Eigen::FFT<double> fft_;
  std::vector<std::complex<double>> in_, out_;
  CVec bins_;
};

/// One-shot expected pulse-compression profile of an allocation.
RangeProfile expected_range_profile(const OfdmConfig& cfg, const PowerAllocation& alloc);

/// Complex-valued counterpart, exposed for linearity checks.
CVec expected_range_profile_complex(const OfdmConfig& cfg, const PowerAllocation& alloc);

/// Splits delay bins into main-lobe and side-lobe sets via the null-to-null
/// rule. Requires >= 3 bins and a non-flat profile.
std::pair<std::vector<Index>, std::vector<Index>> mainlobe_partition(const Vec& magnitude);

/// Builds a full RangeProfile (peak + partition) from raw magnitudes.
RangeProfile make_range_profile(Vec magnitude);

}  // namespace isac
