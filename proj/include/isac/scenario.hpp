#pragma once

#include <string>
#include <utility>
#include <vector>

#include "isac/channel.hpp"
#include "isac/types.hpp"

namespace isac {

/// Bad configuration input (file syntax, unknown key, invalid value).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::vector<double> gamma_psl_list = {-5, -10, -15, -20, -25, -30, -35};
  std::vector<double> alpha_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> surface_gamma_psl = {-40, -35, -30, -25, -20, -15, -10, -5};
  /// main-lobe-width bounds as multiples of the water-filling lobe width
  std::vector<double> surface_mlw_scales = {1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75};
  int threads = 1;
};

struct OutputSpec {
  std::string dir = "out";
  std::string format = "csv";  // csv | json
  bool meters = false;         // append a round-trip range column to profile dumps
};

/// Everything one run needs: system, channel, thresholds, sweep grids, output.
struct ScenarioConfig {
  OfdmConfig ofdm;
  double bandwidth_hz = 1e6;  // delta_f = bandwidth_hz / k, resolved in finalize()
  ChannelSpec channel;
  Thresholds thresholds;
  SolverSettings solver;
  SweepSpec sweep;
  OutputSpec output;

  /// Derives delta_f and validates every block. Throws ConfigError.
  void finalize();
};

/// `key = value` lines with `#` comments; keys are dotted paths like
/// `ofdm.k` or `sweep.gamma_psl_list` (lists comma-separated).
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path);

/// Applies one dotted key; throws ConfigError for unknown keys or bad values.
void apply_config_key(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Loads a config file on top of defaults (finalize() is the caller's job).
ScenarioConfig load_scenario(const std::string& path);

}  // namespace isac
