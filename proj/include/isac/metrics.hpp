#pragma once

#include "isac/types.hpp"

namespace isac {

/// Shannon capacity sum_k log2(1 + P_k g_k) in bits per channel use.
double capacity(const PowerAllocation& alloc, const ChannelRealization& chan,
                const OfdmConfig& cfg);

/// Peak side-lobe level: 20 log10(max side-lobe magnitude / peak magnitude).
/// Returns -inf when every side-lobe bin is exactly zero.
double psl_db(const RangeProfile& profile);

/// Edge-weighted accuracy proxy sum_k (k - K/2)^2 P_k; larger is better.
double accuracy_proxy(const PowerAllocation& alloc);

/// 3-dB main-lobe width in fractional bins, crossings found by linear
/// interpolation on each side of the peak. Throws std::domain_error when the
/// lobe never falls below peak/sqrt(2) inside its partition.
double mlw_3db(const RangeProfile& profile);

/// (c_ref - c) / c_ref, with |x| < 1e-12 clamped to zero.
double capacity_loss(double c, double c_ref);

/// (mlw - mlw_ref) / mlw_ref * 100; negative when the candidate lobe is narrower.
double accuracy_loss_pct(double mlw, double mlw_ref);

/// Full metric report for one allocation; loss fields stay zero.
SensingReport sensing_report(const OfdmConfig& cfg, const PowerAllocation& alloc,
                             const ChannelRealization& chan);

/// Report with capacity_loss and accuracy_loss_pct taken against a reference
/// capacity and main-lobe width (typically the water-filling point).
SensingReport sensing_report(const OfdmConfig& cfg, const PowerAllocation& alloc,
                             const ChannelRealization& chan, double c_ref,
                             double mlw_ref);

}  // namespace isac
