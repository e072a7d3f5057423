#pragma once

#include <string>
#include <vector>

#include "isac/dynamic.hpp"
#include "isac/sweeps.hpp"

namespace isac {

/// File-system failure while writing results (maps to exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest-roundtrip decimal text for a double; "inf"/"-inf"/"nan" sentinels.
std::string format_double(double v);

/// A fully stringified table: deterministic CSV/JSON on disk.
struct Table {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Accumulates emitted files and closes with a JSON manifest holding the
/// resolved configuration. Identical inputs produce byte-identical trees.
class Emitter {
 public:
  Emitter(const ScenarioConfig& config, std::string subcommand);

  /// Writes `name.csv` or `name.json` under the output dir; returns the path.
  std::string write_table(const Table& table);
  /// Free-form JSON payload (always .json).
  std::string write_json(const std::string& name, const std::string& body);

  /// Writes manifest.json and returns its path.
  std::string write_manifest();

 private:
  ScenarioConfig config_;
  std::string subcommand_;
  std::vector<std::string> files_;
};

Table psl_sweep_table(const std::vector<PslSweepRow>& rows);
Table alpha_sweep_table(const std::vector<AlphaSweepRow>& rows);
Table surface_table(const std::vector<SurfaceRow>& rows);
Table allocation_table(const std::string& name, const PowerAllocation& alloc,
                       const ChannelRealization& chan);
Table profile_table(const std::string& name, const Vec& magnitude,
                    const OfdmConfig& cfg, bool meters);
Table channel_table(const ChannelRealization& chan);

/// Decision summary as a JSON document body.
std::string decision_json(const DecisionOutcome& outcome);

}  // namespace isac
