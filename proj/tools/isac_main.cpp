#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "isac/allocators.hpp"
#include "isac/channel.hpp"
#include "isac/dynamic.hpp"
#include "isac/emit.hpp"
#include "isac/metrics.hpp"
#include "isac/model.hpp"
#include "isac/scenario.hpp"
#include "isac/sweeps.hpp"
#include "isac/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

struct CliOverrides {
  std::string config_path;
  std::optional<long long> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<int> threads;
  bool meters = false;
};

isac::ScenarioConfig resolve_config(const CliOverrides& o) {
  isac::ScenarioConfig cfg;
  if (!o.config_path.empty()) cfg = isac::load_scenario(o.config_path);
  if (o.seed) cfg.channel.seed = static_cast<std::uint64_t>(*o.seed);
  if (o.out_dir) cfg.output.dir = *o.out_dir;
  if (o.format) cfg.output.format = *o.format;
  if (o.threads) cfg.sweep.threads = *o.threads;
  if (o.meters) cfg.output.meters = true;
  cfg.finalize();
  return cfg;
}

void run_allocate(const isac::ScenarioConfig& config) {
  const isac::ChannelRealization chan = isac::generate_channel(config.channel, config.ofdm);
  const isac::DecisionOutcome outcome =
      isac::dynamic_allocate(chan, config.ofdm, config.thresholds, config.solver);
  isac::Emitter emitter(config, "allocate");
  emitter.write_json("decision", isac::decision_json(outcome));
  emitter.write_table(isac::allocation_table("allocation", outcome.allocation, chan));
  emitter.write_manifest();
  std::printf("mode=%s branch=%s alpha=%s capacity=%s bits\n", isac::to_string(outcome.mode),
              isac::to_string(outcome.branch), isac::format_double(outcome.alpha).c_str(),
              isac::format_double(outcome.report.capacity_bits).c_str());
}

void run_channel(const isac::ScenarioConfig& config) {
  const isac::ChannelRealization chan = isac::generate_channel(config.channel, config.ofdm);
  isac::Emitter emitter(config, "channel");
  emitter.write_table(isac::channel_table(chan));
  emitter.write_manifest();
}

void run_sweep_psl(const isac::ScenarioConfig& config) {
  const auto rows = isac::run_psl_sweep(config);
  const isac::ChannelRealization chan = isac::generate_channel(config.channel, config.ofdm);
  isac::Emitter emitter(config, "sweep-psl");
  emitter.write_table(isac::psl_sweep_table(rows));
  bool any_feasible = false;
  for (const auto& row : rows) {
    if (!row.feasible) continue;
    any_feasible = true;
    const std::string tag = "gamma_" + isac::format_double(row.gamma_psl_db);
    emitter.write_table(isac::allocation_table("allocation_" + tag, row.allocation, chan));
    emitter.write_table(
        isac::profile_table("profile_" + tag, row.profile_magnitude, config.ofdm,
                            config.output.meters));
  }
  emitter.write_manifest();
  // flagged rows are still emitted above; an entirely infeasible grid is a
  // scenario-level failure
  if (!any_feasible) throw isac::InfeasibleError("no feasible bound in sweep.gamma_psl_list");
}

void run_sweep_alpha(const isac::ScenarioConfig& config, const std::string& direction) {
  std::vector<isac::AlphaSweepRow> rows;
  if (direction == "edges" || direction == "both") {
    const auto r = isac::run_alpha_sweep(config, isac::SweepDirection::TowardEdges);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (direction == "psl-opt" || direction == "both") {
    const auto r = isac::run_alpha_sweep(config, isac::SweepDirection::TowardPslOpt);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  isac::Emitter emitter(config, "sweep-alpha");
  emitter.write_table(isac::alpha_sweep_table(rows));
  emitter.write_manifest();
}

void run_surface(const isac::ScenarioConfig& config) {
  const auto rows = isac::run_capacity_surface(config);
  isac::Emitter emitter(config, "surface");
  emitter.write_table(isac::surface_table(rows));
  emitter.write_manifest();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OFDM ISAC dynamic power allocation toolkit"};
  app.set_version_flag("--version", std::string(isac::kToolName) + " " + isac::kVersion);
  app.require_subcommand(1);

  CliOverrides overrides;
  app.add_option("--config", overrides.config_path, "configuration file (key = value lines)");
  app.add_option("--seed", overrides.seed, "channel seed override");
  app.add_option("--out", overrides.out_dir, "output directory");
  app.add_option("--format", overrides.format, "output format: csv or json");
  app.add_option("--threads", overrides.threads, "worker threads for sweep evaluation");
  app.add_flag("--meters", overrides.meters, "append a round-trip range column to profile dumps");

  auto* cmd_allocate = app.add_subcommand("allocate", "run the dynamic allocation decision");
  auto* cmd_sweep_psl = app.add_subcommand("sweep-psl", "capacity/accuracy trade-off vs the side-lobe bound");
  auto* cmd_sweep_alpha = app.add_subcommand("sweep-alpha", "metric ratios along the blend weight");
  std::string direction = "both";
  cmd_sweep_alpha->add_option("--direction", direction, "edges, psl-opt or both")
      ->check(CLI::IsMember({"edges", "psl-opt", "both"}));
  auto* cmd_surface = app.add_subcommand("surface", "capacity over the (psl, mlw-bound) grid");
  auto* cmd_channel = app.add_subcommand("channel", "generate and dump the channel realization");
  // let the global flags appear after the subcommand too
  for (auto* sub : {cmd_allocate, cmd_sweep_psl, cmd_sweep_alpha, cmd_surface, cmd_channel})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const isac::ScenarioConfig config = resolve_config(overrides);
    if (cmd_allocate->parsed()) run_allocate(config);
    else if (cmd_sweep_psl->parsed()) run_sweep_psl(config);
    else if (cmd_sweep_alpha->parsed()) run_sweep_alpha(config, direction);
    else if (cmd_surface->parsed()) run_surface(config);
    else if (cmd_channel->parsed()) run_channel(config);
    return kExitOk;
  } catch (const isac::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const isac::InfeasibleError& e) {
    std::fprintf(stderr, "infeasible scenario: %s\n", e.what());
    return kExitInfeasible;
  } catch (const isac::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
