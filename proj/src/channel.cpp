#include "isac/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace isac {

namespace {

// Box-Muller on explicit 53-bit uniforms; std::normal_distribution is not
// pinned across standard libraries, and outputs must be reproducible
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  std::complex<double> next_cn01() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log(u1));  // E|z|^2 = 1 for complex z
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  double uniform() { return std::ldexp(static_cast<double>(rng_() >> 11), -53); }
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    return u;
  }

  std::mt19937_64 rng_;
};

}  // namespace

ChannelModel channel_model_from_string(const std::string& name) {
  if (name == "flat") return ChannelModel::Flat;
  if (name == "rayleigh_iid") return ChannelModel::RayleighIid;
  if (name == "rayleigh_exp_pdp") return ChannelModel::RayleighExpPdp;
  throw std::invalid_argument("unknown channel model: " + name);
}

const char* to_string(ChannelModel m) {
  switch (m) {
    case ChannelModel::Flat: return "flat";
    case ChannelModel::RayleighIid: return "rayleigh_iid";
    case ChannelModel::RayleighExpPdp: return "rayleigh_exp_pdp";
  }
  return "?";
}

ChannelRealization generate_channel(const ChannelSpec& spec, const OfdmConfig& cfg) {
  cfg.validate();
  const Index k_count = cfg.k;

  if (spec.model == ChannelModel::Flat) {
    return {CVec::Ones(k_count)};
  }

  GaussianSource gauss(spec.seed);
  CVec h(k_count);

  if (spec.model == ChannelModel::RayleighIid) {
    for (Index k = 0; k < k_count; ++k) h[k] = gauss.next_cn01();
  } else {
    // frequency response of an exponential power-delay profile: taps
    // a_l ~ CN(0, sigma_l^2), sigma_l^2 ~ exp(-l / pdp_decay), sum = 1
    if (!(spec.pdp_decay > 0))
      throw std::invalid_argument("generate_channel: pdp_decay must be > 0");
    Vec sigma2(k_count);
    for (Index l = 0; l < k_count; ++l)
      sigma2[l] = std::exp(-static_cast<double>(l) / spec.pdp_decay);
    sigma2 /= sigma2.sum();
    CVec taps(k_count);
    for (Index l = 0; l < k_count; ++l) taps[l] = std::sqrt(sigma2[l]) * gauss.next_cn01();
    for (Index k = 0; k < k_count; ++k) {
      std::complex<double> acc(0.0, 0.0);
      for (Index l = 0; l < k_count; ++l) {
        const double ph = -2.0 * std::numbers::pi * static_cast<double>(k * l) / k_count;
        acc += taps[l] * std::complex<double>(std::cos(ph), std::sin(ph));
      }
      h[k] = acc;
    }
  }

  // ensemble E|h_k|^2 = 1; scale so the uniform allocation sees snr_db on average
  const double snr_lin = std::pow(10.0, spec.snr_db / 10.0);
  const double scale =
      std::sqrt(snr_lin * cfg.k * cfg.n0 * cfg.delta_f / cfg.p_total);
  h *= scale;
  return {h};
}

}  // namespace isac
