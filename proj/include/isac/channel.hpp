#pragma once

#include <cstdint>
#include <string>

#include "isac/types.hpp"

namespace isac {

enum class ChannelModel { Flat, RayleighIid, RayleighExpPdp };

ChannelModel channel_model_from_string(const std::string& name);
const char* to_string(ChannelModel m);

/// Channel generation knobs. snr_db is the mean per-carrier SNR seen by the
/// uniform allocation; pdp_decay is the exponential power-delay-profile time
/// constant in taps (correlated model only).
struct ChannelSpec {
  ChannelModel model = ChannelModel::RayleighIid;
  std::uint64_t seed = 1;
  double snr_db = 10.0;
  double pdp_decay = 8.0;
};

/// Deterministic channel synthesis: a fixed seed reproduces the exact gain
/// vector on any platform. The flat model returns all-ones gains untouched;
/// the Rayleigh models are scaled so that the uniform allocation meets
/// snr_db on ensemble average.
ChannelRealization generate_channel(const ChannelSpec& spec, const OfdmConfig& cfg);

}  // namespace isac
