#include "isac/emit.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <utility>

#include "isac/version.hpp"

namespace isac {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << body;
  if (!out) throw IoError("write failed: " + path);
}

std::string to_csv(const Table& t) {
  std::string body;
  for (size_t i = 0; i < t.header.size(); ++i) {
    if (i) body += ',';
    body += t.header[i];
  }
  body += '\n';
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) body += ',';
      body += row[i];
    }
    body += '\n';
  }
  return body;
}

std::string to_json(const Table& t) {
  ordered_json doc;
  doc["name"] = t.name;
  doc["header"] = t.header;
  doc["rows"] = t.rows;
  return doc.dump(2) + "\n";
}

ordered_json config_json(const ScenarioConfig& c) {
  ordered_json j;
  j["ofdm"] = {{"k", c.ofdm.k},
               {"bandwidth_hz", c.bandwidth_hz},
               {"delta_f", c.ofdm.delta_f},
               {"n0", c.ofdm.n0},
               {"p_total", c.ofdm.p_total},
               {"oversample", c.ofdm.oversample},
               {"tau", c.ofdm.tau}};
  j["channel"] = {{"model", to_string(c.channel.model)},
                  {"seed", c.channel.seed},
                  {"snr_db", c.channel.snr_db},
                  {"pdp_decay", c.channel.pdp_decay}};
  j["thresholds"] = {{"gamma_psl_db", c.thresholds.gamma_psl_db},
                     {"gamma_acc", c.thresholds.gamma_acc},
                     {"gamma_c", c.thresholds.gamma_c},
                     {"epsilon", c.thresholds.epsilon},
                     {"improve_accuracy", c.thresholds.improve_accuracy_when_satisfied}};
  j["solver"] = {{"max_iters", c.solver.max_iters},
                 {"step_init", c.solver.step_init},
                 {"tol", c.solver.tol},
                 {"seed", c.solver.seed}};
  j["sweep"] = {{"gamma_psl_list", c.sweep.gamma_psl_list},
                {"alpha_grid", c.sweep.alpha_grid},
                {"surface_gamma_psl", c.sweep.surface_gamma_psl},
                {"surface_mlw_scales", c.sweep.surface_mlw_scales},
                {"threads", c.sweep.threads}};
  j["output"] = {{"dir", c.output.dir},
                 {"format", c.output.format},
                 {"meters", c.output.meters}};
  return j;
}

}  // namespace

Emitter::Emitter(const ScenarioConfig& config, std::string subcommand)
    : config_(config), subcommand_(std::move(subcommand)) {
  std::error_code ec;
  fs::create_directories(config_.output.dir, ec);
  if (ec) throw IoError("cannot create output directory: " + config_.output.dir);
}

std::string Emitter::write_table(const Table& table) {
  const bool csv = config_.output.format == "csv";
  const std::string name = table.name + (csv ? ".csv" : ".json");
  const std::string path = (fs::path(config_.output.dir) / name).string();
  write_file(path, csv ? to_csv(table) : to_json(table));
  files_.push_back(name);
  return path;
}

std::string Emitter::write_json(const std::string& name, const std::string& body) {
  const std::string filename = name + ".json";
  const std::string path = (fs::path(config_.output.dir) / filename).string();
  write_file(path, body);
  files_.push_back(filename);
  return path;
}

std::string Emitter::write_manifest() {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["command"] = subcommand_;
  j["seed"] = config_.channel.seed;
  j["config"] = config_json(config_);
  j["files"] = files_;
  const std::string path = (fs::path(config_.output.dir) / "manifest.json").string();
  write_file(path, j.dump(2) + "\n");
  return path;
}

Table psl_sweep_table(const std::vector<PslSweepRow>& rows) {
  Table t;
  t.name = "psl_sweep";
  t.header = {"gamma_psl_db", "feasible",  "capacity_bits",    "capacity_loss",
              "psl_db",       "mlw_bins",  "accuracy_loss_pct"};
  for (const auto& r : rows) {
    t.rows.push_back({format_double(r.gamma_psl_db), r.feasible ? "1" : "0",
                      format_double(r.capacity_bits), format_double(r.capacity_loss),
                      format_double(r.psl_db), format_double(r.mlw_bins),
                      format_double(r.accuracy_loss_pct)});
  }
  return t;
}

Table alpha_sweep_table(const std::vector<AlphaSweepRow>& rows) {
  Table t;
  t.name = "alpha_sweep";
  t.header = {"direction", "alpha", "capacity_ratio", "suppression_db", "mlw_ratio"};
  for (const auto& r : rows) {
    t.rows.push_back({to_string(r.direction), format_double(r.alpha),
                      format_double(r.capacity_ratio), format_double(r.suppression_db),
                      format_double(r.mlw_ratio)});
  }
  return t;
}

Table surface_table(const std::vector<SurfaceRow>& rows) {
  Table t;
  t.name = "surface";
  t.header = {"gamma_psl_db", "mlw_bound_bins", "mode", "capacity_bits", "alpha"};
  for (const auto& r : rows) {
    t.rows.push_back({format_double(r.gamma_psl_db), format_double(r.mlw_bound_bins),
                      to_string(r.mode), format_double(r.capacity_bits),
                      format_double(r.alpha)});
  }
  return t;
}

Table allocation_table(const std::string& name, const PowerAllocation& alloc,
                       const ChannelRealization& chan) {
  Table t;
  t.name = name;
  t.header = {"k", "p_k", "h_abs2"};
  for (Index k = 0; k < alloc.p.size(); ++k) {
    t.rows.push_back({std::to_string(k), format_double(alloc.p[k]),
                      format_double(std::norm(chan.h[k]))});
  }
  return t;
}

Table profile_table(const std::string& name, const Vec& magnitude, const OfdmConfig& cfg,
                    bool meters) {
  constexpr double kSpeedOfLight = 299792458.0;
  Table t;
  t.name = name;
  t.header = {"n", "magnitude"};
  if (meters) t.header.push_back("range_m");
  const Index n_bins = magnitude.size();
  for (Index n = 0; n < n_bins; ++n) {
    std::vector<std::string> row = {std::to_string(n), format_double(magnitude[n])};
    if (meters) {
      // round-trip radar convention: d = c * tau / 2, tau = n / (N * delta_f)
      const double tau = static_cast<double>(n) / (static_cast<double>(n_bins) * cfg.delta_f);
      row.push_back(format_double(kSpeedOfLight * tau / 2.0));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table channel_table(const ChannelRealization& chan) {
  Table t;
  t.name = "channel";
  t.header = {"k", "h_re", "h_im", "h_abs2"};
  for (Index k = 0; k < chan.h.size(); ++k) {
    t.rows.push_back({std::to_string(k), format_double(chan.h[k].real()),
                      format_double(chan.h[k].imag()), format_double(std::norm(chan.h[k]))});
  }
  return t;
}

std::string decision_json(const DecisionOutcome& outcome) {
  // psl/suppression can be infinite (side lobes exactly zero); JSON has no
  // inf, so those fall back to string sentinels
  auto number_or_sentinel = [](double v) {
    return std::isfinite(v) ? ordered_json(v) : ordered_json(format_double(v));
  };
  ordered_json j;
  j["mode"] = to_string(outcome.mode);
  j["branch"] = to_string(outcome.branch);
  j["alpha"] = outcome.alpha;
  j["feasible"] = outcome.feasible;
  j["report"] = {{"capacity_bits", outcome.report.capacity_bits},
                 {"psl_db", number_or_sentinel(outcome.report.psl_db)},
                 {"accuracy_proxy", outcome.report.accuracy_proxy},
                 {"mlw_bins", outcome.report.mlw_bins},
                 {"capacity_loss", outcome.report.capacity_loss},
                 {"accuracy_loss_pct", outcome.report.accuracy_loss_pct},
                 {"suppression_db", number_or_sentinel(outcome.report.suppression_db)}};
  return j.dump(2) + "\n";
}

}  // namespace isac
