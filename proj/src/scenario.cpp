#include "isac/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace isac {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("bad integer value for " + key + ": '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("bad boolean value for " + key + ": '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty element in list for " + key);
    out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

}  // namespace

void ScenarioConfig::finalize() {
  if (!(bandwidth_hz > 0)) throw ConfigError("bandwidth must be > 0");
  ofdm.delta_f = bandwidth_hz / ofdm.k;
  try {
    ofdm.validate();
    thresholds.validate();
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (sweep.threads < 1) throw ConfigError("sweep.threads must be >= 1");
  if (sweep.gamma_psl_list.empty() || sweep.alpha_grid.empty() ||
      sweep.surface_gamma_psl.empty() || sweep.surface_mlw_scales.empty())
    throw ConfigError("sweep grids must be non-empty");
  for (double a : sweep.alpha_grid)
    if (a < 0.0 || a > 1.0) throw ConfigError("alpha grid values must lie in [0, 1]");
  if (!std::is_sorted(sweep.alpha_grid.begin(), sweep.alpha_grid.end()))
    throw ConfigError("alpha grid must be ascending");
  for (double s : sweep.surface_mlw_scales)
    if (!(s > 0)) throw ConfigError("surface mlw scales must be > 0");
  if (output.format != "csv" && output.format != "json")
    throw ConfigError("output format must be csv or json");
}

std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

void apply_config_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "ofdm.k") cfg.ofdm.k = static_cast<int>(parse_int(key, value));
  else if (key == "ofdm.bandwidth_hz") cfg.bandwidth_hz = parse_double(key, value);
  else if (key == "ofdm.n0") cfg.ofdm.n0 = parse_double(key, value);
  else if (key == "ofdm.p_total") cfg.ofdm.p_total = parse_double(key, value);
  else if (key == "ofdm.oversample") cfg.ofdm.oversample = static_cast<int>(parse_int(key, value));
  else if (key == "ofdm.tau") cfg.ofdm.tau = parse_double(key, value);
  else if (key == "channel.model") {
    try {
      cfg.channel.model = channel_model_from_string(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  else if (key == "channel.seed") cfg.channel.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "channel.snr_db") cfg.channel.snr_db = parse_double(key, value);
  else if (key == "channel.pdp_decay") cfg.channel.pdp_decay = parse_double(key, value);
  else if (key == "thresholds.gamma_psl_db") cfg.thresholds.gamma_psl_db = parse_double(key, value);
  else if (key == "thresholds.gamma_acc") cfg.thresholds.gamma_acc = parse_double(key, value);
  else if (key == "thresholds.gamma_c") cfg.thresholds.gamma_c = parse_double(key, value);
  else if (key == "thresholds.epsilon") cfg.thresholds.epsilon = parse_double(key, value);
  else if (key == "thresholds.improve_accuracy")
    cfg.thresholds.improve_accuracy_when_satisfied = parse_bool(key, value);
  else if (key == "solver.max_iters") cfg.solver.max_iters = static_cast<int>(parse_int(key, value));
  else if (key == "solver.step_init") cfg.solver.step_init = parse_double(key, value);
  else if (key == "solver.tol") cfg.solver.tol = parse_double(key, value);
  else if (key == "solver.seed") cfg.solver.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "sweep.gamma_psl_list") cfg.sweep.gamma_psl_list = parse_list(key, value);
  else if (key == "sweep.alpha_grid") cfg.sweep.alpha_grid = parse_list(key, value);
  else if (key == "sweep.surface_gamma_psl") cfg.sweep.surface_gamma_psl = parse_list(key, value);
  else if (key == "sweep.surface_mlw_scales") cfg.sweep.surface_mlw_scales = parse_list(key, value);
  else if (key == "sweep.threads") cfg.sweep.threads = static_cast<int>(parse_int(key, value));
  else if (key == "output.dir") cfg.output.dir = value;
  else if (key == "output.format") cfg.output.format = value;
  else if (key == "output.meters") cfg.output.meters = parse_bool(key, value);
  else throw ConfigError("unknown config key: " + key);
}

ScenarioConfig load_scenario(const std::string& path) {
  ScenarioConfig cfg;
  for (const auto& [key, value] : parse_config_file(path)) apply_config_key(cfg, key, value);
  return cfg;
}

}  // namespace isac
